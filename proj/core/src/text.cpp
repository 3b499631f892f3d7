#include "imad/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace imad::text {
namespace {

bool is_word_char(unsigned char c) {
    return std::isalnum(c) || c >= 0x80 || c == '_';
}

bool is_vowel(char c) {
    switch (c) {
        case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
            return true;
        default:
            return false;
    }
}

const WordSet& determiners() {
    static const WordSet s = {"the", "a", "an", "this", "that", "these", "those", "each",
                              "every", "some", "any", "no", "all", "both", "either",
                              "neither", "such", "another", "other", "its", "his", "her",
                              "their", "our", "your", "my"};
    return s;
}

const WordSet& pronouns() {
    static const WordSet s = {"i", "you", "he", "she", "it", "we", "they", "me", "him",
                              "us", "them", "who", "whom", "whose", "which", "what",
                              "something", "anything", "nothing", "everything", "someone",
                              "anyone", "everyone", "nobody", "one", "oneself", "itself",
                              "himself", "herself", "themselves", "myself", "yourself"};
    return s;
}

const WordSet& prepositions_conjunctions() {
    static const WordSet s = {"of", "in", "to", "for", "with", "on", "at", "by", "from",
                              "about", "as", "into", "through", "over", "after", "under",
                              "between", "against", "during", "without", "within", "along",
                              "across", "behind", "beyond", "near", "and", "or", "but",
                              "nor", "so", "yet", "because", "although", "though", "while",
                              "whereas", "if", "unless", "until", "when", "whenever",
                              "where", "wherever", "before", "once", "since", "than",
                              "whether", "not", "then", "there", "here", "why", "how",
                              "up", "down", "out", "off"};
    return s;
}

// Auxiliaries and modals; tagged as verbs themselves and license a following
// -ing/-ed form as a verb.
const WordSet& auxiliaries() {
    static const WordSet s = {"is", "am", "are", "was", "were", "be", "been", "being",
                              "do", "does", "did", "have", "has", "had", "will", "would",
                              "can", "could", "shall", "should", "may", "might", "must"};
    return s;
}

const WordSet& common_verbs() {
    static const WordSet s = {"go", "goes", "went", "gone", "make", "makes", "made",
                              "take", "takes", "took", "taken", "get", "gets", "got",
                              "see", "sees", "saw", "seen", "know", "knows", "knew",
                              "known", "think", "thinks", "thought", "say", "says",
                              "said", "come", "comes", "came", "give", "gives", "gave",
                              "given", "find", "finds", "found", "use", "uses", "used",
                              "work", "works", "show", "shows", "showed", "shown",
                              "mean", "means", "meant", "become", "becomes", "became",
                              "seem", "seems", "seemed", "sit", "sits", "sat", "run",
                              "runs", "ran", "rain", "rains", "rained", "answer",
                              "answers", "answered", "argue", "argues", "argued",
                              "support", "supports", "supported", "suggest", "suggests",
                              "suggested", "indicate", "indicates", "indicated", "state",
                              "states", "stated", "consider", "considers", "considered",
                              "choose", "chooses", "chose", "chosen", "select", "selects",
                              "selected", "believe", "believes", "believed", "agree",
                              "agrees", "agreed", "disagree", "disagrees", "disagreed",
                              "explain", "explains", "explained", "remain", "remains",
                              "remained", "depend", "depends", "depended", "follow",
                              "follows", "followed", "lead", "leads", "led", "cause",
                              "causes", "caused", "require", "requires", "required",
                              "produce", "produces", "produced", "contain", "contains",
                              "contained", "hold", "holds", "held", "occur", "occurs",
                              "occurred", "appear", "appears", "appeared", "implies",
                              "imply", "implied", "conclude", "concludes", "concluded"};
    return s;
}

const WordSet& common_adjectives() {
    static const WordSet s = {"good", "bad", "large", "small", "big", "little", "long",
                              "short", "high", "low", "old", "new", "young", "early",
                              "late", "right", "wrong", "true", "false", "correct",
                              "incorrect", "strong", "weak", "hard", "easy", "simple",
                              "complex", "common", "rare", "hot", "cold", "warm", "cool",
                              "blue", "red", "green", "black", "white", "fast", "slow",
                              "deep", "shallow", "wide", "narrow", "heavy", "light",
                              "full", "empty", "main", "major", "minor", "first", "last",
                              "next", "same", "different", "similar", "important",
                              "possible", "impossible", "plausible", "better", "best",
                              "worse", "worst", "larger", "largest", "smaller",
                              "smallest", "higher", "highest", "lower", "lowest"};
    return s;
}

bool has_suffix(std::string_view w, std::string_view suffix) {
    return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

bool adjective_by_suffix(std::string_view w) {
    if (w.size() < 5) return false;
    static const std::array<std::string_view, 9> suffixes = {
        "ous", "ful", "ive", "able", "ible", "ical", "less", "ish", "est"};
    return std::any_of(suffixes.begin(), suffixes.end(),
                       [&](std::string_view s) { return has_suffix(w, s); });
}

bool verb_by_suffix(std::string_view w) {
    if (w.size() < 5) return false;
    return has_suffix(w, "ize") || has_suffix(w, "ise") || has_suffix(w, "ify");
}

bool all_digits(std::string_view token) {
    return !token.empty() && std::all_of(token.begin(), token.end(), [](unsigned char c) {
        return std::isdigit(c);
    });
}

// Sentence-start flags aligned with the token stream.
std::vector<char> sentence_start_flags(const std::vector<std::string>& tokens) {
    std::vector<char> start(tokens.size(), 0);
    bool at_start = true;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (is_word_token(tokens[i])) {
            start[i] = at_start ? 1 : 0;
            at_start = false;
        } else if (is_sentence_terminator(tokens[i])) {
            at_start = true;
        }
    }
    return start;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        unsigned char c = text[i];
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (is_word_char(c)) {
            std::size_t j = i + 1;
            while (j < n) {
                unsigned char cj = text[j];
                if (is_word_char(cj)) {
                    ++j;
                } else if ((cj == '-' || cj == '\'' || cj == '.') && j + 1 < n &&
                           is_word_char(static_cast<unsigned char>(text[j + 1]))) {
                    j += 2;
                } else {
                    break;
                }
            }
            tokens.emplace_back(text.substr(i, j - i));
            i = j;
        } else {
            tokens.emplace_back(1, static_cast<char>(c));
            ++i;
        }
    }
    return tokens;
}

bool is_word_token(std::string_view token) {
    return std::any_of(token.begin(), token.end(), [](unsigned char c) {
        return std::isalnum(c) || c >= 0x80;
    });
}

bool is_sentence_terminator(std::string_view token) {
    return !token.empty() && std::all_of(token.begin(), token.end(), [](char c) {
        return c == '.' || c == '!' || c == '?';
    });
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool starts_uppercase(std::string_view token) {
    return !token.empty() && std::isupper(static_cast<unsigned char>(token.front()));
}

int count_syllables(std::string_view word) {
    int groups = 0;
    bool in_group = false;
    char last_alpha = 0;
    char prev_alpha = 0;
    for (unsigned char uc : word) {
        if (!std::isalpha(uc)) {
            in_group = false;
            continue;
        }
        char c = static_cast<char>(std::tolower(uc));
        prev_alpha = last_alpha;
        last_alpha = c;
        if (is_vowel(c)) {
            if (!in_group) {
                ++groups;
                in_group = true;
            }
        } else {
            in_group = false;
        }
    }
    if (groups > 1 && last_alpha == 'e' && prev_alpha != 0 && !is_vowel(prev_alpha)) {
        --groups;
    }
    return std::max(groups, 1);
}

int count_sentences(const std::vector<std::string>& tokens) {
    int sentences = 0;
    bool word_seen = false;
    for (const auto& t : tokens) {
        if (is_word_token(t)) {
            word_seen = true;
        } else if (is_sentence_terminator(t) && word_seen) {
            ++sentences;
            word_seen = false;
        }
    }
    if (word_seen) ++sentences;
    return sentences;
}

Readability readability(std::string_view text) {
    const auto tokens = tokenize(text);
    long words = 0, syllables = 0, letters = 0;
    for (const auto& t : tokens) {
        if (!is_word_token(t)) continue;
        ++words;
        syllables += count_syllables(t);
        letters += std::count_if(t.begin(), t.end(),
                                 [](unsigned char c) { return std::isalpha(c); });
    }
    if (words == 0) return {};
    const double sentences = count_sentences(tokens);
    const double w = static_cast<double>(words);
    Readability r;
    r.flesch_reading_ease = 206.835 - 1.015 * (w / sentences) - 84.6 * (syllables / w);
    const double letters_per_100 = 100.0 * letters / w;
    const double sentences_per_100 = 100.0 * sentences / w;
    r.coleman_liau_index = 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8;
    return r;
}

int syntactic_depth(std::string_view text, const WordSet& subordinators) {
    const auto tokens = tokenize(text);
    int best = 0;
    int subs = 0;
    int paren = 0, max_nest = 0;
    bool in_quote = false;
    bool has_word = false;

    auto close_sentence = [&]() {
        if (has_word) best = std::max(best, 1 + subs + max_nest);
        subs = 0;
        paren = 0;
        max_nest = 0;
        in_quote = false;
        has_word = false;
    };

    for (const auto& t : tokens) {
        if (is_sentence_terminator(t)) {
            close_sentence();
            continue;
        }
        if (t == "(" || t == "[") {
            ++paren;
        } else if (t == ")" || t == "]") {
            paren = std::max(paren - 1, 0);
        } else if (t == "\"") {
            in_quote = !in_quote;
        } else if (is_word_token(t)) {
            has_word = true;
            if (subordinators.count(lowercase(t)) > 0) ++subs;
        }
        max_nest = std::max(max_nest, paren + (in_quote ? 1 : 0));
    }
    close_sentence();
    return best;
}

PosCounts count_pos(const std::vector<std::string>& tokens) {
    PosCounts counts;
    bool prev_was_aux = false;
    for (const auto& t : tokens) {
        if (!is_word_token(t)) continue;
        const std::string w = lowercase(t);
        const bool aux_before = prev_was_aux;
        prev_was_aux = auxiliaries().count(w) > 0;

        if (all_digits(t)) continue;
        if (auxiliaries().count(w) || common_verbs().count(w) || verb_by_suffix(w)) {
            ++counts.verbs;
            continue;
        }
        if ((has_suffix(w, "ing") || has_suffix(w, "ed")) && aux_before) {
            ++counts.verbs;
            continue;
        }
        if (determiners().count(w) || pronouns().count(w) || prepositions_conjunctions().count(w)) {
            continue;
        }
        if (has_suffix(w, "ly") && w.size() > 3) continue;  // adverb
        if (common_adjectives().count(w) || adjective_by_suffix(w)) {
            ++counts.adjectives;
            continue;
        }
        ++counts.nouns;  // default, including proper nouns
    }
    return counts;
}

int count_named_entities(std::string_view text, const WordSet& proper_nouns) {
    const auto tokens = tokenize(text);
    const auto start = sentence_start_flags(tokens);

    // Capitalized occurrences at non-initial positions, for the repeat rule.
    WordSet repeated_mid;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (is_word_token(tokens[i]) && !start[i] && starts_uppercase(tokens[i])) {
            repeated_mid.insert(lowercase(tokens[i]));
        }
    }

    auto qualifies = [&](std::size_t i) {
        if (!is_word_token(tokens[i]) || !starts_uppercase(tokens[i])) return false;
        if (!start[i]) return true;
        const std::string w = lowercase(tokens[i]);
        return repeated_mid.count(w) > 0 || proper_nouns.count(w) > 0;
    };

    int entities = 0;
    std::size_t i = 0;
    while (i < tokens.size()) {
        if (qualifies(i)) {
            ++entities;
            while (i < tokens.size() && qualifies(i)) ++i;
        } else {
            if (is_word_token(tokens[i]) && all_digits(tokens[i]) && tokens[i].size() == 4 &&
                tokens[i][0] >= '1' && tokens[i][0] <= '2') {
                ++entities;  // 4-digit year
            }
            ++i;
        }
    }
    return entities;
}

}  // namespace imad::text
