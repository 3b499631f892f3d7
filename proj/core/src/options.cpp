#include "imad/options.hpp"

#include <algorithm>

#include "imad/text.hpp"

namespace imad {
namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string strip_wrapping(std::string token) {
    while (!token.empty() && (token.front() == '(' || token.front() == '[')) token.erase(0, 1);
    while (!token.empty()) {
        char c = token.back();
        if (c == ')' || c == ']' || c == '.' || c == ':' || c == ',' || c == ';') {
            token.pop_back();
        } else {
            break;
        }
    }
    return token;
}

bool contains_ci(const std::string& haystack, const std::string& needle) {
    if (needle.empty()) return false;
    const std::string h = text::lowercase(haystack);
    const std::string n = text::lowercase(needle);
    return h.find(n) != std::string::npos;
}

}  // namespace

std::string render_options(const Options& options) {
    std::string out;
    for (std::size_t i = 0; i < options.size(); ++i) {
        if (i > 0) out += '\n';
        out += options[i].label;
        out += ')';
        if (!options[i].text.empty()) {
            out += ' ';
            out += options[i].text;
        }
    }
    return out;
}

std::optional<std::string> resolve_option(const std::string& answer_text, const Options& options) {
    const std::string trimmed = trim(answer_text);
    if (trimmed.empty()) return std::nullopt;

    // Exact label: whole text or its leading token, wrapping punctuation removed.
    const std::string whole = strip_wrapping(trimmed);
    std::string first = whole;
    if (auto pos = first.find_first_of(" \t\r\n"); pos != std::string::npos) first.resize(pos);
    first = strip_wrapping(first);
    for (const auto& opt : options) {
        if (whole == opt.label || first == opt.label) return opt.label;
    }

    // Case-insensitive equality with an option's text.
    const std::string lowered = text::lowercase(trimmed);
    for (const auto& opt : options) {
        if (!opt.text.empty() && lowered == text::lowercase(opt.text)) return opt.label;
    }

    // Unique case-insensitive containment.
    const Option* found = nullptr;
    for (const auto& opt : options) {
        if (contains_ci(trimmed, opt.text)) {
            if (found) return std::nullopt;  // ambiguous
            found = &opt;
        }
    }
    if (found) return found->label;
    return std::nullopt;
}

const Option* find_option(const Options& options, const std::string& label) {
    auto it = std::find_if(options.begin(), options.end(),
                           [&](const Option& o) { return o.label == label; });
    return it == options.end() ? nullptr : &*it;
}

}  // namespace imad
