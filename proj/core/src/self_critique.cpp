#include "imad/self_critique.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <regex>
#include <sstream>

#include "imad/errors.hpp"

namespace imad {
namespace {

struct Anchor {
    std::size_t begin;         // start of the anchor match
    std::size_t content_begin; // first char after the anchor
};

// Case-insensitive search for `pattern` as a regex anchored at a line start
// or preceded by whitespace; returns all matches in order.
std::vector<Anchor> find_anchors(const std::string& raw, const std::string& pattern) {
    std::vector<Anchor> anchors;
    std::regex re(pattern, std::regex::icase | std::regex::multiline);
    auto begin = std::sregex_iterator(raw.begin(), raw.end(), re);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        anchors.push_back({static_cast<std::size_t>(it->position(0)),
                           static_cast<std::size_t>(it->position(0) + it->length(0))});
    }
    return anchors;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<double> first_number(const std::string& s) {
    static const std::regex re(R"(-?\d+(?:\.\d+)?)");
    std::smatch m;
    if (std::regex_search(s, m, re)) return std::stod(m.str(0));
    return std::nullopt;
}

// Field anchor patterns, strict first. Each entry is (field, patterns).
struct FieldSpec {
    const char* field;
    std::vector<std::string> patterns;
};

const std::vector<FieldSpec>& field_specs() {
    static const std::vector<FieldSpec> specs = {
        {"initial_answer",
         {R"(initial\s+answer\s*[:\-])", R"(^\s*answer\s*[:\-])"}},
        {"initial_reasoning",
         {R"(initial\s+reasoning\s*[:\-])", R"(^\s*reasoning\s*[:\-])",
          R"(chain\s+of\s+thought\s*[:\-])"}},
        {"initial_confidence",
         {R"(initial\s+confidence\s*[:\-])", R"(confidence\s*\(\s*initial\s*\)\s*[:\-])"}},
        {"critique_reasoning",
         {R"(self[\s\-]?critique\s*[:\-])", R"(counter[\s\-]?argument\s*[:\-])",
          R"(critique\s*[:\-])", R"(disagreement\s*[:\-])"}},
        {"critique_confidence",
         {R"(disagreement\s+confidence\s*[:\-])", R"(critique\s+confidence\s*[:\-])",
          R"(self[\s\-]?critique\s+confidence\s*[:\-])"}},
        {"final_answer",
         {R"(final\s+answer\s*[:\-])", R"(final\s+choice\s*[:\-])"}},
        {"final_confidence",
         {R"(final\s+confidence\s*[:\-])", R"(overall\s+confidence\s*[:\-])"}},
    };
    return specs;
}

}  // namespace

double normalize_confidence(double value) {
    if (value > 1.0 && value <= 100.0) value /= 100.0;
    return std::clamp(value, kConfidenceClamp, 1.0 - kConfidenceClamp);
}

SelfCritiqueResponse parse_self_critique(const std::string& raw, const Options& options) {
    // Locate one anchor per field; the first pattern with an unclaimed match
    // wins. Claim tracking keeps two fields from anchoring on the same span.
    struct Located {
        const char* field;
        std::size_t begin;
        std::size_t content_begin;
    };
    std::vector<Located> located;

    for (const auto& spec : field_specs()) {
        std::optional<Anchor> chosen;
        for (const auto& pattern : spec.patterns) {
            auto anchors = find_anchors(raw, pattern);
            for (const auto& a : anchors) {
                bool claimed = false;
                for (const auto& l : located) {
                    if (a.begin >= l.begin && a.begin < l.content_begin) claimed = true;
                }
                if (!claimed) {
                    chosen = a;
                    break;
                }
            }
            if (chosen) break;
        }
        if (!chosen) throw UnparseableResponse(spec.field);
        located.push_back({spec.field, chosen->begin, chosen->content_begin});
    }

    // Sort anchors by position; content of each runs to the next anchor.
    std::vector<Located> ordered = located;
    std::sort(ordered.begin(), ordered.end(),
              [](const Located& a, const Located& b) { return a.begin < b.begin; });

    auto content_of = [&](const char* field) -> std::string {
        for (std::size_t i = 0; i < ordered.size(); ++i) {
            if (std::string_view(ordered[i].field) != field) continue;
            const std::size_t begin = ordered[i].content_begin;
            const std::size_t end =
                i + 1 < ordered.size() ? ordered[i + 1].begin : raw.size();
            if (end < begin) return "";
            return trim(raw.substr(begin, end - begin));
        }
        return "";
    };

    auto confidence_of = [&](const char* field) {
        const std::string content = content_of(field);
        auto num = first_number(content);
        if (!num) throw UnparseableResponse(field);
        if (*num < 0.0 || *num > 100.0) throw UnparseableResponse(field);
        return normalize_confidence(*num);
    };

    auto answer_of = [&](const char* field) {
        const std::string content = content_of(field);
        if (content.empty()) throw UnparseableResponse(field);
        auto label = resolve_option(content, options);
        if (!label) throw AnswerNotInOptions(content);
        return *label;
    };

    SelfCritiqueResponse r;
    r.raw_text = raw;
    r.initial_answer = answer_of("initial_answer");
    r.initial_reasoning = content_of("initial_reasoning");
    r.initial_confidence = confidence_of("initial_confidence");
    r.critique_reasoning = content_of("critique_reasoning");
    r.critique_confidence = confidence_of("critique_confidence");
    r.final_answer = answer_of("final_answer");
    r.final_confidence = confidence_of("final_confidence");
    return r;
}

std::string render_self_critique_reply(const std::string& initial_answer,
                                       const std::string& initial_reasoning,
                                       double initial_confidence_pct,
                                       const std::string& critique_reasoning,
                                       double critique_confidence_pct,
                                       const std::string& final_answer,
                                       double final_confidence_pct) {
    std::ostringstream out;
    out << "Initial answer: " << initial_answer << "\n"
        << "Initial reasoning: " << initial_reasoning << "\n"
        << "Initial confidence: " << initial_confidence_pct << "\n"
        << "Self-critique: " << critique_reasoning << "\n"
        << "Disagreement confidence: " << critique_confidence_pct << "\n"
        << "Final answer: " << final_answer << "\n"
        << "Final confidence: " << final_confidence_pct << "\n";
    return out.str();
}

}  // namespace imad
