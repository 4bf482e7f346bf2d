#pragma once

#include <stdexcept>
#include <string>

namespace chiraag {

// Base for all recoverable tool errors. Subcommands catch these at the top
// level and turn them into exit codes.
struct ChiraagError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoFailure : ChiraagError {
    explicit IoFailure(const std::string& what, const std::string& path)
        : ChiraagError(what + ": " + path), path(path) {}
    std::string path;
};

struct ConfigError : ChiraagError {
    using ChiraagError::ChiraagError;
};

// spec_format
struct EmptyDocument : ChiraagError {
    EmptyDocument() : ChiraagError("document body is empty") {}
};
struct MissingFunctionalRequirements : ChiraagError {
    MissingFunctionalRequirements()
        : ChiraagError("no section maps to functional_requirements (or it is empty)") {}
};
struct SpecParseError : ChiraagError {
    SpecParseError(const std::string& what, int line, int column)
        : ChiraagError(what), line(line), column(column) {}
    int line = 0;
    int column = 0;
};
struct SchemaError : ChiraagError {
    explicit SchemaError(const std::string& key, const std::string& detail = "")
        : ChiraagError("schema violation at key '" + key + "'" +
                       (detail.empty() ? "" : ": " + detail)),
          key(key) {}
    std::string key;
};

// llm_gateway
struct ProviderTimeout : ChiraagError {
    using ChiraagError::ChiraagError;
};
struct ProviderRejected : ChiraagError {
    ProviderRejected(int status, const std::string& body_excerpt)
        : ChiraagError("provider rejected request (status " + std::to_string(status) +
                       "): " + body_excerpt),
          status(status), body_excerpt(body_excerpt) {}
    int status = 0;
    std::string body_excerpt;
};
struct TranscriptExhausted : ChiraagError {
    explicit TranscriptExhausted(std::size_t size)
        : ChiraagError("replay transcript exhausted after " + std::to_string(size) +
                       " entries") {}
};
struct ExtractionFailure : ChiraagError {
    ExtractionFailure(const std::string& reason, const std::string& offending_text)
        : ChiraagError("assertion extraction failed: " + reason),
          reason(reason), offending_text(offending_text) {}
    std::string reason;
    std::string offending_text;
};
struct InvalidFeedbackKind : std::logic_error {
    using std::logic_error::logic_error;
};

// sim_harness
struct SimulatorNotFound : ChiraagError {
    using ChiraagError::ChiraagError;
};
struct BindTemplateMissing : ChiraagError {
    explicit BindTemplateMissing(const std::string& path)
        : ChiraagError("bind template not found: " + path) {}
};
struct CrashWithoutOutput : ChiraagError {
    using ChiraagError::ChiraagError;
};
// Thrown when the simulator exceeds its wall-clock budget; carries whatever
// output was captured before the process tree was killed.
struct SimulationTimeout : ChiraagError {
    explicit SimulationTimeout(const std::string& what, std::string partial_output)
        : ChiraagError(what), partial_output(std::move(partial_output)) {}
    std::string partial_output;
};

// log_triage
struct MalformedPack : ChiraagError {
    using ChiraagError::ChiraagError;
};
struct InvalidVerdict : std::logic_error {
    using std::logic_error::logic_error;
};

// orchestrator / report
struct DuplicateName : ChiraagError {
    explicit DuplicateName(const std::string& name)
        : ChiraagError("duplicate assertion name: " + name), name(name) {}
    std::string name;
};
struct EmptyTrace : ChiraagError {
    EmptyTrace() : ChiraagError("trace contains no iteration records") {}
};
struct EmptyInput : ChiraagError {
    using ChiraagError::ChiraagError;
};

} // namespace chiraag
