#pragma once
#include <string>

#include "imad/options.hpp"

namespace imad {

// Parsed structured single-agent output: initial answer with reasoning and
// confidence, the forced self-critique with its confidence, and the final
// answer with its confidence. Answers are resolved option labels;
// confidences live strictly inside (0,1) after normalization and clamping.
struct SelfCritiqueResponse {
    std::string initial_answer;
    std::string initial_reasoning;
    double initial_confidence = 0.5;
    std::string critique_reasoning;
    double critique_confidence = 0.5;
    std::string final_answer;
    double final_confidence = 0.5;
    std::string raw_text;
};

// Accepts fractions and percentages: values <= 1 pass through, values in
// (1, 100] divide by 100. The result is clamped to [1e-4, 1 - 1e-4] so the
// downstream logit transform stays finite. Idempotent on already-normalized
// values away from the clamp bounds.
double normalize_confidence(double value);

inline constexpr double kConfidenceClamp = 1e-4;

// Section-anchor parser with a strict-first, lenient-fallback cascade.
// A reply failing all cascades raises UnparseableResponse(section) rather
// than guessing; unresolvable answers raise AnswerNotInOptions.
SelfCritiqueResponse parse_self_critique(const std::string& raw, const Options& options);

// Canonical reply surface used by the shipped templates; also the generator
// for parser round-trip tests.
std::string render_self_critique_reply(const std::string& initial_answer,
                                       const std::string& initial_reasoning,
                                       double initial_confidence_pct,
                                       const std::string& critique_reasoning,
                                       double critique_confidence_pct,
                                       const std::string& final_answer,
                                       double final_confidence_pct);

}  // namespace imad
