#pragma once
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "imad/prompt.hpp"

namespace imad {

struct BackendRequest {
    Role role = Role::SelfCritique;
    std::string prompt;
    std::optional<std::string> image_ref;
    int max_output_tokens = 512;
    double temperature = 0.0;
};

struct BackendResponse {
    std::string text;
    long input_tokens = 0;
    long output_tokens = 0;
    long latency_ms = 0;
    bool usage_approximate = false;  // counts came from the fallback counter
};

struct TokenUsage {
    long input_total = 0;
    long output_total = 0;

    void add(const BackendResponse& r) {
        input_total += r.input_tokens;
        output_total += r.output_tokens;
    }
    void add(const TokenUsage& other) {
        input_total += other.input_total;
        output_total += other.output_total;
    }
    long total() const { return input_total + output_total; }

    bool operator==(const TokenUsage&) const = default;
};

// Deterministic approximate count used only when an endpoint reports no
// usage data: ceil(characters / 4).
long count_tokens_fallback(std::string_view text);

class Backend {
public:
    virtual ~Backend() = default;
    virtual BackendResponse complete(const BackendRequest& request) = 0;
};

// One scripted reply with its declared token counts.
struct ScriptedTurn {
    std::string text;
    long input_tokens = 0;
    long output_tokens = 0;
};

// Deterministic mock: replies are keyed by (role, occurrence index), so
// multi-round debates and retry paths are fully scriptable. Occurrence
// counters advance under a lock, keeping concurrent tests deterministic
// per key. Requests beyond the script raise ScriptExhausted.
class ScriptedBackend : public Backend {
public:
    explicit ScriptedBackend(std::map<Role, std::vector<ScriptedTurn>> turns);

    BackendResponse complete(const BackendRequest& request) override;

    // Turns consumed so far for a role.
    int consumed(Role role) const;

private:
    std::map<Role, std::vector<ScriptedTurn>> turns_;
    mutable std::mutex mutex_;
    std::map<Role, int> next_;
};

// A collection of per-record scripts plus an optional record-independent
// default script. File format:
//   {"version": 1,
//    "records": [{"id": "...", "turns": {"<Role>": [{"text": ...,
//        "input_tokens": ..., "output_tokens": ...}, ...]}}, ...],
//    "turns": {...}}   // optional top-level script for single-scope use
class ScriptSet {
public:
    static ScriptSet load(const std::filesystem::path& path);
    static ScriptSet parse(const std::string& json_text, const std::string& origin);

    bool has_record(const std::string& record_id) const;

    // Fresh backend over the record's turns (falling back to the top-level
    // turns when the record is absent and a top-level script exists).
    std::shared_ptr<ScriptedBackend> backend_for(const std::string& record_id) const;

    // Backend over the top-level turns.
    std::shared_ptr<ScriptedBackend> backend() const;

private:
    std::map<std::string, std::map<Role, std::vector<ScriptedTurn>>> records_;
    std::map<Role, std::vector<ScriptedTurn>> top_level_;
};

}  // namespace imad
