#pragma once
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "imad/options.hpp"

namespace imad {

enum class Role { SelfCritique, DebaterAffirmative, DebaterNegative, JudgePerRound, JudgeFinal };
enum class Modality { QA, VQA };

const char* to_string(Role role);
const char* to_string(Modality modality);
std::optional<Role> role_from_string(const std::string& name);

// A prompt template body with {NAME} placeholder tokens from the closed set
// {QUESTION, OPTIONS, OPTIONS2, IMAGE, TRANSCRIPT, ROUND, AFF_ANS, NEG_ANS}.
// Identifier-like brace tokens outside the set are rejected at construction;
// other braced text (e.g. JSON examples) passes through untouched.
struct PromptTemplate {
    Role role = Role::SelfCritique;
    Modality modality = Modality::QA;
    std::string body;

    // Validates the placeholder set and the modality rules (QA templates
    // never contain IMAGE; every VQA template does).
    static PromptTemplate make(Role role, Modality modality, std::string body);

    std::vector<std::string> placeholders() const;
};

// Values available for substitution. Unused bindings are permitted; a
// placeholder present in the template without a usable binding raises
// MissingBinding.
struct PromptBindings {
    std::string question;
    Options options;
    std::optional<Options> options2;
    std::optional<std::string> image_ref;  // opaque handle, never inlined
    std::string transcript;
    int round = 1;
    std::optional<std::string> aff_ans;
    std::optional<std::string> neg_ans;
};

// Literal, single-pass substitution; the result contains no residual
// placeholder tokens. {IMAGE} resolves to a fixed textual marker; the
// attachment handle itself travels on the backend request.
std::string render_prompt(const PromptTemplate& tmpl, const PromptBindings& bindings);

struct TranscriptEntry {
    std::string speaker;
    std::string text;

    bool operator==(const TranscriptEntry&) const = default;
};

// Deterministic serialization: one "[speaker]: text" block per entry, in
// order, separated by blank lines.
std::string render_transcript(const std::vector<TranscriptEntry>& history);

// The ten (role, modality) templates used by the pipeline.
class TemplateSet {
public:
    // Compiled-in defaults (the files under core/data/templates).
    static TemplateSet defaults();

    // Loads <modality>_<role>.txt files (e.g. qa_judge_round.txt) from a
    // directory; missing files fall back to the defaults.
    static TemplateSet load(const std::filesystem::path& dir);

    const PromptTemplate& get(Role role, Modality modality) const;

private:
    std::map<std::pair<Role, Modality>, PromptTemplate> templates_;
};

// File-name stem for a (role, modality) template, e.g. "qa_self_critique".
std::string template_stem(Role role, Modality modality);

}  // namespace imad
