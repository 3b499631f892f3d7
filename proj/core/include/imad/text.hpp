#pragma once
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace imad::text {

using WordSet = std::unordered_set<std::string>;

// Whitespace split with punctuation detached as separate tokens. '-', '\''
// and '.' stay inside a token when flanked by alphanumerics on both sides
// ("state-of-the-art", "don't", "3.14"); anything else non-alphanumeric is
// emitted as its own single-character token. Bytes >= 0x80 (UTF-8
// continuations and leads) count as word characters.
std::vector<std::string> tokenize(std::string_view text);

// Token contains at least one alphanumeric character.
bool is_word_token(std::string_view token);

// Token consists solely of '.', '!' or '?' characters.
bool is_sentence_terminator(std::string_view token);

std::string lowercase(std::string_view s);

// First character is an ASCII uppercase letter.
bool starts_uppercase(std::string_view token);

// Vowel-group syllable count with silent-e subtraction, minimum 1.
int count_syllables(std::string_view word);

// Sentence count over a token stream: a terminator token closes a sentence
// if at least one word token preceded it since the last close; a trailing
// run of words counts as one more sentence. Zero when there are no words.
int count_sentences(const std::vector<std::string>& tokens);

struct Readability {
    double flesch_reading_ease = 0.0;
    double coleman_liau_index = 0.0;
};

// Flesch = 206.835 - 1.015*(words/sentences) - 84.6*(syllables/words).
// Coleman-Liau = 0.0588*L - 0.296*S - 15.8 with L = letters per 100 words
// and S = sentences per 100 words. Empty text yields (0, 0).
Readability readability(std::string_view text);

// Deterministic nesting proxy: per sentence, 1 + (subordinator hits) +
// (max parenthesis/bracket/double-quote nesting); maximum over sentences.
// Empty text yields 0.
int syntactic_depth(std::string_view text, const WordSet& subordinators);

struct PosCounts {
    int nouns = 0;
    int verbs = 0;
    int adjectives = 0;
};

// Lexicon + suffix-rule tagger over the token stream. Closed-class words are
// compiled in; unknown words default to noun.
PosCounts count_pos(const std::vector<std::string>& tokens);

// Capitalization heuristic: maximal runs of capitalized tokens not at
// sentence start count as one entity each, plus 4-digit year tokens.
// A sentence-initial capitalized token joins a run only if it re-occurs
// capitalized mid-sentence elsewhere or appears in `proper_nouns`
// (lowercased entries).
int count_named_entities(std::string_view text, const WordSet& proper_nouns);

}  // namespace imad::text
