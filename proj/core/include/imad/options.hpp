#pragma once
#include <optional>
#include <string>
#include <vector>

namespace imad {

// One multiple-choice candidate: a short label ("A") and the answer text.
struct Option {
    std::string label;
    std::string text;

    bool operator==(const Option&) const = default;
};

using Options = std::vector<Option>;

// "A) Paris" lines, one per option, in order.
std::string render_options(const Options& options);

// Resolves free text to an option label: exact label match on the leading
// token (wrapping punctuation stripped) or on the whole trimmed text, then
// case-insensitive equality with an option's text, then unique
// case-insensitive containment of an option's text. nullopt when nothing
// (or more than one candidate) matches.
std::optional<std::string> resolve_option(const std::string& answer_text, const Options& options);

const Option* find_option(const Options& options, const std::string& label);

}  // namespace imad
