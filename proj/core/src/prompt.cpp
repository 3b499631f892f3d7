#include "imad/prompt.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "imad/embedded_data.hpp"
#include "imad/errors.hpp"

namespace imad {
namespace {

constexpr std::array<std::string_view, 8> kPlaceholderSet = {
    "QUESTION", "OPTIONS", "OPTIONS2", "IMAGE", "TRANSCRIPT", "ROUND", "AFF_ANS", "NEG_ANS"};

constexpr std::string_view kImageMarker = "[attached image]";

bool is_identifier_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Scans for identifier-like {NAME} tokens. Returns (position, name) pairs.
std::vector<std::pair<std::size_t, std::string>> scan_tokens(const std::string& body) {
    std::vector<std::pair<std::size_t, std::string>> found;
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] != '{') continue;
        std::size_t j = i + 1;
        while (j < body.size() && is_identifier_char(body[j])) ++j;
        if (j > i + 1 && j < body.size() && body[j] == '}') {
            found.emplace_back(i, body.substr(i + 1, j - i - 1));
            i = j;
        }
    }
    return found;
}

bool in_closed_set(const std::string& name) {
    for (auto p : kPlaceholderSet)
        if (name == p) return true;
    return false;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open template file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::array<Role, 5> kAllRoles = {Role::SelfCritique, Role::DebaterAffirmative,
                                       Role::DebaterNegative, Role::JudgePerRound,
                                       Role::JudgeFinal};
const std::array<Modality, 2> kAllModalities = {Modality::QA, Modality::VQA};

}  // namespace

const char* to_string(Role role) {
    switch (role) {
        case Role::SelfCritique: return "SelfCritique";
        case Role::DebaterAffirmative: return "DebaterAffirmative";
        case Role::DebaterNegative: return "DebaterNegative";
        case Role::JudgePerRound: return "JudgePerRound";
        case Role::JudgeFinal: return "JudgeFinal";
    }
    return "Unknown";
}

const char* to_string(Modality modality) {
    return modality == Modality::QA ? "QA" : "VQA";
}

std::optional<Role> role_from_string(const std::string& name) {
    for (Role r : kAllRoles)
        if (name == to_string(r)) return r;
    return std::nullopt;
}

PromptTemplate PromptTemplate::make(Role role, Modality modality, std::string body) {
    PromptTemplate t{role, modality, std::move(body)};
    bool has_image = false;
    for (const auto& [pos, name] : scan_tokens(t.body)) {
        if (!in_closed_set(name)) throw UnknownPlaceholder(name);
        if (name == "IMAGE") has_image = true;
    }
    if (modality == Modality::QA && has_image)
        throw UnknownPlaceholder("IMAGE (not allowed in QA templates)");
    if (modality == Modality::VQA && !has_image)
        throw Error(std::string("VQA template for ") + to_string(role) + " must contain {IMAGE}");
    return t;
}

std::vector<std::string> PromptTemplate::placeholders() const {
    std::vector<std::string> names;
    for (const auto& [pos, name] : scan_tokens(body)) names.push_back(name);
    return names;
}

std::string render_prompt(const PromptTemplate& tmpl, const PromptBindings& bindings) {
    auto value_for = [&](const std::string& name) -> std::string {
        if (name == "QUESTION") return bindings.question;
        if (name == "OPTIONS") return render_options(bindings.options);
        if (name == "OPTIONS2") {
            if (!bindings.options2) throw MissingBinding("OPTIONS2");
            return render_options(*bindings.options2);
        }
        if (name == "IMAGE") {
            if (!bindings.image_ref) throw MissingBinding("IMAGE");
            return std::string(kImageMarker);
        }
        if (name == "TRANSCRIPT") return bindings.transcript;
        if (name == "ROUND") {
            if (bindings.round < 1) throw MissingBinding("ROUND");
            return std::to_string(bindings.round);
        }
        if (name == "AFF_ANS") {
            if (!bindings.aff_ans) throw MissingBinding("AFF_ANS");
            return *bindings.aff_ans;
        }
        if (name == "NEG_ANS") {
            if (!bindings.neg_ans) throw MissingBinding("NEG_ANS");
            return *bindings.neg_ans;
        }
        throw UnknownPlaceholder(name);
    };

    const auto tokens = scan_tokens(tmpl.body);
    std::string out;
    out.reserve(tmpl.body.size());
    std::size_t cursor = 0;
    for (const auto& [pos, name] : tokens) {
        out.append(tmpl.body, cursor, pos - cursor);
        out.append(value_for(name));
        cursor = pos + name.size() + 2;
    }
    out.append(tmpl.body, cursor, std::string::npos);
    return out;
}

std::string render_transcript(const std::vector<TranscriptEntry>& history) {
    std::string out;
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (i > 0) out += "\n\n";
        out += '[';
        out += history[i].speaker;
        out += "]: ";
        out += history[i].text;
    }
    return out;
}

std::string template_stem(Role role, Modality modality) {
    std::string stem = modality == Modality::QA ? "qa_" : "vqa_";
    switch (role) {
        case Role::SelfCritique: stem += "self_critique"; break;
        case Role::DebaterAffirmative: stem += "debater_affirmative"; break;
        case Role::DebaterNegative: stem += "debater_negative"; break;
        case Role::JudgePerRound: stem += "judge_round"; break;
        case Role::JudgeFinal: stem += "judge_final"; break;
    }
    return stem;
}

TemplateSet TemplateSet::defaults() {
    TemplateSet set;
    for (Role role : kAllRoles) {
        for (Modality modality : kAllModalities) {
            auto view = embedded::file("templates/" + template_stem(role, modality) + ".txt");
            if (view.empty())
                throw IoError("embedded template " + template_stem(role, modality) + " not found");
            set.templates_.emplace(std::make_pair(role, modality),
                                   PromptTemplate::make(role, modality, std::string(view)));
        }
    }
    return set;
}

TemplateSet TemplateSet::load(const std::filesystem::path& dir) {
    TemplateSet set = defaults();
    for (Role role : kAllRoles) {
        for (Modality modality : kAllModalities) {
            const auto path = dir / (template_stem(role, modality) + ".txt");
            if (std::filesystem::exists(path)) {
                set.templates_.insert_or_assign(std::make_pair(role, modality),
                                                PromptTemplate::make(role, modality, read_file(path)));
            }
        }
    }
    return set;
}

const PromptTemplate& TemplateSet::get(Role role, Modality modality) const {
    return templates_.at(std::make_pair(role, modality));
}

}  // namespace imad
