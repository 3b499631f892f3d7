#pragma once
#include <filesystem>
#include <string>
#include <unordered_set>

#include "imad/text.hpp"

namespace imad {

// Cue-word sets driving the lexical features, loaded from the versioned
// data files (header line "version: <string>", then one lowercase term per
// line). Hedge, certainty and contrast sets are disjoint.
struct Lexicons {
    std::string version;
    text::WordSet hedges;
    text::WordSet certainty;
    text::WordSet contrast;
    text::WordSet subordinators;
    text::WordSet proper_nouns;

    // Compiled-in defaults (the files under core/data/lexicons).
    static Lexicons defaults();

    // Loads hedges.txt, certainty.txt, contrast.txt, subordinators.txt and
    // proper_nouns.txt from a directory. All files must carry the same
    // version string. Throws LexiconError on format or invariant violations.
    static Lexicons load(const std::filesystem::path& dir);
};

// Parses a single lexicon file body; returns (version, terms).
std::pair<std::string, text::WordSet> parse_lexicon(std::string_view content,
                                                    const std::string& name);

}  // namespace imad
