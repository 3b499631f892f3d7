#pragma once
#include <string_view>
#include <vector>

namespace imad::embedded {

// Content of a file under core/data/, addressed by its relative path
// (e.g. "templates/qa_self_critique.txt"). Empty view if absent.
std::string_view file(std::string_view relative_path);

std::vector<std::string_view> list_files();

}  // namespace imad::embedded
