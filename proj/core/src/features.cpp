#include "imad/features.hpp"

#include <algorithm>

#include "imad/checksum.hpp"
#include "imad/text.hpp"

namespace imad {
namespace {

constexpr std::array<const char*, 10> kQTypeWords = {
    "what", "where", "why", "how", "when", "who", "is", "are", "does", "do"};

int lexicon_hits(const std::vector<std::string>& tokens, const text::WordSet& set) {
    int hits = 0;
    for (const auto& t : tokens) {
        if (!text::is_word_token(t)) continue;
        if (set.count(text::lowercase(t))) ++hits;
    }
    return hits;
}

int word_count(const std::vector<std::string>& tokens) {
    return static_cast<int>(std::count_if(tokens.begin(), tokens.end(), [](const auto& t) {
        return text::is_word_token(t);
    }));
}

}  // namespace

FeatureExtractor::FeatureExtractor(Lexicons lexicons) : lexicons_(std::move(lexicons)) {}

FeatureExtractor FeatureExtractor::with_defaults() {
    return FeatureExtractor(Lexicons::defaults());
}

FeatureExtractor FeatureExtractor::load(const std::filesystem::path& lexicon_dir) {
    return FeatureExtractor(Lexicons::load(lexicon_dir));
}

const std::array<const char*, kFeatureCount>& FeatureExtractor::feature_names() {
    static const std::array<const char*, kFeatureCount> names = {
        "QuestionToken",
        "AnswerToken",
        "question_named_entity_count",
        "qtype_what",
        "qtype_where",
        "qtype_why",
        "qtype_how",
        "qtype_when",
        "qtype_who",
        "qtype_is",
        "qtype_are",
        "qtype_does",
        "qtype_do",
        "qtype_other",
        "QSyntacticDepth",
        "Question_flesch_reading_ease",
        "Question_coleman_liau_index",
        "Question_num_nouns",
        "Question_num_verbs",
        "Question_num_adjs",
        "InitialConfidence",
        "InitialReason_HedgeCount",
        "InitialReason_CertaintyCount",
        "InitialReason_contrast",
        "InitialReason_SyntacticDepth",
        "InitialReason_flesch_reading_ease",
        "InitialReason_coleman_liau_index",
        "InitialReason_num_nouns",
        "InitialReason_num_verbs",
        "InitialReason_num_adjs",
        "NegativeConfidence",
        "NegativeReason_HedgeCount",
        "NegativeReason_CertaintyCount",
        "NegativeReason_contrast",
        "FinalConfidence",
        "NegativeReason_SyntacticDepth",
        "NegativeReason_flesch_reading_ease",
        "NegativeReason_coleman_liau_index",
        "NegativeReason_num_nouns",
        "NegativeReason_num_verbs",
        "NegativeReason_num_adjs",
    };
    return names;
}

std::string FeatureExtractor::manifest_text() {
    std::string out;
    for (const char* name : feature_names()) {
        out += name;
        out += '\n';
    }
    return out;
}

std::uint64_t FeatureExtractor::manifest_hash() {
    static const std::uint64_t h = fnv1a64(manifest_text());
    return h;
}

QuestionFeatures FeatureExtractor::question_features(const std::string& question) const {
    QuestionFeatures f;
    const auto tokens = text::tokenize(question);
    f.question_tokens = static_cast<int>(tokens.size());
    f.named_entity_count = text::count_named_entities(question, lexicons_.proper_nouns);

    // Question type keys off the first word, lowercased.
    std::string first;
    for (const auto& t : tokens) {
        if (text::is_word_token(t)) {
            first = text::lowercase(t);
            break;
        }
    }
    bool matched = false;
    for (std::size_t i = 0; i < kQTypeWords.size(); ++i) {
        if (first == kQTypeWords[i]) {
            f.qtype[i] = 1.0;
            matched = true;
            break;
        }
    }
    if (!matched) f.qtype[10] = 1.0;  // qtype_other

    f.syntactic_depth = text::syntactic_depth(question, lexicons_.subordinators);
    const auto read = text::readability(question);
    f.flesch_reading_ease = read.flesch_reading_ease;
    f.coleman_liau_index = read.coleman_liau_index;
    const auto pos = text::count_pos(tokens);
    f.num_nouns = pos.nouns;
    f.num_verbs = pos.verbs;
    f.num_adjs = pos.adjectives;
    return f;
}

ReasoningFeatures FeatureExtractor::reasoning_features(const std::string& section_text) const {
    ReasoningFeatures f;
    const auto tokens = text::tokenize(section_text);
    f.hedge_count = lexicon_hits(tokens, lexicons_.hedges);
    f.certainty_count = lexicon_hits(tokens, lexicons_.certainty);
    f.contrast_count = lexicon_hits(tokens, lexicons_.contrast);
    f.syntactic_depth = text::syntactic_depth(section_text, lexicons_.subordinators);
    const auto read = text::readability(section_text);
    f.flesch_reading_ease = read.flesch_reading_ease;
    f.coleman_liau_index = read.coleman_liau_index;
    const auto pos = text::count_pos(tokens);
    f.num_nouns = pos.nouns;
    f.num_verbs = pos.verbs;
    f.num_adjs = pos.adjectives;
    return f;
}

FeatureVector FeatureExtractor::extract(const std::string& question, const Options& options,
                                        const SelfCritiqueResponse& response) const {
    const QuestionFeatures q = question_features(question);
    const ReasoningFeatures initial = reasoning_features(response.initial_reasoning);
    const ReasoningFeatures critique = reasoning_features(response.critique_reasoning);

    // AnswerToken counts the tokens of the final answer's option text.
    int answer_tokens = 0;
    if (const Option* opt = find_option(options, response.final_answer)) {
        answer_tokens = static_cast<int>(text::tokenize(opt->text).size());
    }

    FeatureVector v;
    v.manifest_hash = manifest_hash();
    v.p_llm = std::clamp(response.final_confidence, kConfidenceClamp, 1.0 - kConfidenceClamp);

    int i = 0;
    auto put = [&](double x) { v.values[i++] = x; };

    put(q.question_tokens);
    put(answer_tokens);
    put(q.named_entity_count);
    for (double ind : q.qtype) put(ind);
    put(q.syntactic_depth);
    put(q.flesch_reading_ease);
    put(q.coleman_liau_index);
    put(q.num_nouns);
    put(q.num_verbs);
    put(q.num_adjs);

    put(response.initial_confidence);
    put(initial.hedge_count);
    put(initial.certainty_count);
    put(initial.contrast_count);
    put(initial.syntactic_depth);
    put(initial.flesch_reading_ease);
    put(initial.coleman_liau_index);
    put(initial.num_nouns);
    put(initial.num_verbs);
    put(initial.num_adjs);

    put(response.critique_confidence);
    put(critique.hedge_count);
    put(critique.certainty_count);
    put(critique.contrast_count);
    put(response.final_confidence);
    put(critique.syntactic_depth);
    put(critique.flesch_reading_ease);
    put(critique.coleman_liau_index);
    put(critique.num_nouns);
    put(critique.num_verbs);
    put(critique.num_adjs);

    return v;
}

}  // namespace imad
