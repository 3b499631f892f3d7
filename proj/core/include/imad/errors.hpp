#pragma once
#include <stdexcept>
#include <string>

namespace imad {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---- prompt / response protocol ----

class MissingBinding : public Error {
public:
    explicit MissingBinding(const std::string& placeholder)
        : Error("missing binding for placeholder {" + placeholder + "}"), placeholder(placeholder) {}
    std::string placeholder;
};

class UnknownPlaceholder : public Error {
public:
    explicit UnknownPlaceholder(const std::string& token)
        : Error("unknown placeholder {" + token + "}"), token(token) {}
    std::string token;
};

class UnparseableResponse : public Error {
public:
    explicit UnparseableResponse(const std::string& section)
        : Error("unparseable response: missing or invalid section '" + section + "'"), section(section) {}
    std::string section;
};

class AnswerNotInOptions : public Error {
public:
    explicit AnswerNotInOptions(const std::string& answer)
        : Error("answer '" + answer + "' does not resolve to any option"), answer(answer) {}
    std::string answer;
};

// ---- lexicons / features ----

class LexiconError : public Error {
public:
    using Error::Error;
};

// ---- loss ----

class DomainError : public Error {
public:
    using Error::Error;
};

class EmptyBatch : public Error {
public:
    EmptyBatch() : Error("empty batch") {}
};

// ---- classifier ----

class ManifestMismatch : public Error {
public:
    using Error::Error;
};

class EmptyTrainingSet : public Error {
public:
    EmptyTrainingSet() : Error("empty training set") {}
};

class NonFiniteLoss : public Error {
public:
    NonFiniteLoss(int epoch, int batch)
        : Error("non-finite loss at epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch)),
          epoch(epoch), batch(batch) {}
    int epoch;
    int batch;
};

class IoError : public Error {
public:
    using Error::Error;
};

class VersionMismatch : public Error {
public:
    using Error::Error;
};

class CorruptModel : public Error {
public:
    using Error::Error;
};

// ---- debate protocol ----

enum class MalformedCause {
    SurroundingText,
    MissingKey,
    BadPreference,
    BadSide,
    AnswerOutsideOptions,
    NotAnObject,
};

const char* to_string(MalformedCause cause);

class MalformedVerdict : public Error {
public:
    MalformedVerdict(MalformedCause cause, const std::string& detail)
        : Error(std::string("malformed judge verdict (") + to_string(cause) + "): " + detail), cause(cause) {}
    MalformedCause cause;
};

class NoOptionSelected : public Error {
public:
    explicit NoOptionSelected(const std::string& detail)
        : Error("debater reply does not select exactly one option: " + detail) {}
};

// ---- backend ----

enum class BackendFailureKind { Transport, Auth, Quota, Timeout, Protocol };

class BackendFailure : public Error {
public:
    BackendFailure(BackendFailureKind kind, const std::string& detail)
        : Error("backend failure: " + detail), kind(kind) {}
    BackendFailureKind kind;
};

class ScriptExhausted : public Error {
public:
    explicit ScriptExhausted(const std::string& key)
        : Error("scripted backend has no turn left for " + key) {}
};

// ---- harness ----

class SchemaError : public Error {
public:
    SchemaError(int line, const std::string& field, const std::string& detail)
        : Error("dataset schema error at line " + std::to_string(line) + ", field '" + field + "': " + detail),
          line(line), field(field) {}
    int line;
    std::string field;
};

class EmptyRun : public Error {
public:
    EmptyRun() : Error("no records to aggregate") {}
};

inline const char* to_string(MalformedCause cause) {
    switch (cause) {
        case MalformedCause::SurroundingText: return "SurroundingText";
        case MalformedCause::MissingKey: return "MissingKey";
        case MalformedCause::BadPreference: return "BadPreference";
        case MalformedCause::BadSide: return "BadSide";
        case MalformedCause::AnswerOutsideOptions: return "AnswerOutsideOptions";
        case MalformedCause::NotAnObject: return "NotAnObject";
    }
    return "Unknown";
}

}  // namespace imad
