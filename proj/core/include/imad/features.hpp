#pragma once
#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "imad/lexicons.hpp"
#include "imad/options.hpp"
#include "imad/self_critique.hpp"

namespace imad {

inline constexpr int kFeatureCount = 41;

// The 41-dimensional interpretable feature vector plus the LLM confidence
// carried alongside for logit fusion. Order is fixed by the canonical
// manifest; manifest_hash binds a vector to the order it was produced under.
struct FeatureVector {
    std::array<double, kFeatureCount> values{};
    double p_llm = 0.5;
    std::uint64_t manifest_hash = 0;
};

enum class ReasoningSection { Initial, Negative };

// The 9 text-derived features of a reasoning section (confidences are copied
// from the response, not computed from text).
struct ReasoningFeatures {
    int hedge_count = 0;
    int certainty_count = 0;
    int contrast_count = 0;
    int syntactic_depth = 0;
    double flesch_reading_ease = 0.0;
    double coleman_liau_index = 0.0;
    int num_nouns = 0;
    int num_verbs = 0;
    int num_adjs = 0;
};

// The question-derived features (AnswerToken is filled in by extract(), from
// the final answer's option text).
struct QuestionFeatures {
    int question_tokens = 0;
    int named_entity_count = 0;
    std::array<double, 11> qtype{};  // what..do, other — exactly one is 1
    int syntactic_depth = 0;
    double flesch_reading_ease = 0.0;
    double coleman_liau_index = 0.0;
    int num_nouns = 0;
    int num_verbs = 0;
    int num_adjs = 0;
};

class FeatureExtractor {
public:
    explicit FeatureExtractor(Lexicons lexicons);

    static FeatureExtractor with_defaults();
    static FeatureExtractor load(const std::filesystem::path& lexicon_dir);

    const Lexicons& lexicons() const { return lexicons_; }
    const std::string& lexicon_version() const { return lexicons_.version; }

    // Canonical feature names, manifest order.
    static const std::array<const char*, kFeatureCount>& feature_names();

    // One line per name, the manifest file content.
    static std::string manifest_text();

    // FNV-1a hash of the manifest text; stored in trained models.
    static std::uint64_t manifest_hash();

    QuestionFeatures question_features(const std::string& question) const;
    ReasoningFeatures reasoning_features(const std::string& section_text) const;

    // Full 41-vector: question group (20), initial-reasoning group (10),
    // self-critique group (11), canonical order. Sets p_llm to the clamped
    // final confidence.
    FeatureVector extract(const std::string& question, const Options& options,
                          const SelfCritiqueResponse& response) const;

private:
    Lexicons lexicons_;
};

}  // namespace imad
