#include "imad/lexicons.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "imad/embedded_data.hpp"
#include "imad/errors.hpp"

namespace imad {
namespace {

std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LexiconError("cannot open lexicon file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Lexicons assemble(const std::string& name_prefix,
                  const std::function<std::string(const std::string&)>& fetch) {
    Lexicons lex;
    auto load_one = [&](const std::string& name, text::WordSet& out) {
        auto [version, terms] = parse_lexicon(fetch(name), name_prefix + name);
        if (lex.version.empty()) {
            lex.version = version;
        } else if (lex.version != version) {
            throw LexiconError("lexicon version mismatch: " + name + " has '" + version +
                               "', expected '" + lex.version + "'");
        }
        out = std::move(terms);
    };
    load_one("hedges.txt", lex.hedges);
    load_one("certainty.txt", lex.certainty);
    load_one("contrast.txt", lex.contrast);
    load_one("subordinators.txt", lex.subordinators);
    load_one("proper_nouns.txt", lex.proper_nouns);

    for (const auto& w : lex.hedges) {
        if (lex.certainty.count(w))
            throw LexiconError("term '" + w + "' appears in both hedges and certainty");
    }
    return lex;
}

}  // namespace

std::pair<std::string, text::WordSet> parse_lexicon(std::string_view content,
                                                    const std::string& name) {
    std::istringstream in{std::string(content)};
    std::string line;
    std::string version;
    text::WordSet terms;
    bool header_seen = false;
    while (std::getline(in, line)) {
        line = strip(line);
        if (line.empty()) continue;
        if (!header_seen) {
            if (line.rfind("version:", 0) != 0)
                throw LexiconError("lexicon " + name + " is missing the version header");
            version = strip(line.substr(8));
            if (version.empty())
                throw LexiconError("lexicon " + name + " has an empty version string");
            header_seen = true;
            continue;
        }
        const std::string lower = text::lowercase(line);
        if (lower != line)
            throw LexiconError("lexicon " + name + " term '" + line + "' is not lowercase");
        terms.insert(lower);
    }
    if (!header_seen) throw LexiconError("lexicon " + name + " is empty");
    return {version, terms};
}

Lexicons Lexicons::defaults() {
    return assemble("lexicons/", [](const std::string& name) {
        auto view = embedded::file("lexicons/" + name);
        if (view.empty()) throw LexiconError("embedded lexicon " + name + " not found");
        return std::string(view);
    });
}

Lexicons Lexicons::load(const std::filesystem::path& dir) {
    return assemble(dir.string() + "/", [&](const std::string& name) {
        return read_file(dir / name);
    });
}

}  // namespace imad
