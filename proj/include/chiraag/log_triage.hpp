#pragma once

#include "chiraag/sim_log.hpp"

#include <cstddef>
#include <optional>
#include <regex>
#include <string>
#include <vector>

namespace chiraag {

enum class LogPhase { Compile, Run };
enum class Severity { Info, Warning, Error, Fatal };
enum class Category {
    Syntax,
    Timing,
    MissingSignal,
    AssertionFailure,
    TestcaseFailure,
    Tool,
    Other,
};

const char* to_string(LogPhase phase);
const char* to_string(Severity severity);
const char* to_string(Category category);

struct SourceLocation {
    std::string file;
    int line = 0;

    bool operator==(const SourceLocation&) const = default;
};

// One structured message parsed out of a simulator log.
struct LogMessage {
    LogPhase phase = LogPhase::Compile;
    Severity severity = Severity::Error;
    Category category = Category::Other;
    std::string text; // the matched line, verbatim
    std::optional<std::string> signal;
    std::optional<std::string> assertion_name;
    std::optional<SourceLocation> location;

    bool operator==(const LogMessage&) const = default;
};

// Four-way outcome of one simulation run, mirroring the elif chain that
// drives the repair loop. messages is empty exactly for NoError.
struct TriageVerdict {
    enum class Kind { NoError, SyntaxError, SimulationFailure, TestcaseFailure };
    enum class FailureKind { Timing, MissingSignal };

    Kind kind = Kind::NoError;
    std::optional<FailureKind> failure_kind; // set iff kind == SimulationFailure
    std::vector<LogMessage> messages;

    bool operator==(const TriageVerdict&) const = default;
};

const char* to_string(TriageVerdict::Kind kind);
const char* to_string(TriageVerdict::FailureKind kind);

// One ordered match rule from a pattern pack. Capture groups are referenced
// by index; index 0 (the whole match) is not addressable.
struct PackRule {
    std::string pattern_text;
    std::regex pattern;
    std::optional<LogPhase> phase_filter; // absent = any phase
    Severity severity = Severity::Error;
    Category category = Category::Other;
    std::optional<int> signal_group;
    std::optional<int> assertion_group;
    std::optional<int> file_group;
    std::optional<int> line_group;
};

// A simulator's log dialect as data: ordered rules plus the pattern that
// recovers the final simulation time.
struct PatternPack {
    std::string name;
    std::vector<PackRule> rules;
    std::string sim_time_pattern_text;
    std::regex sim_time_pattern; // group 1: numeric value, group 2: unit
};

// Loads and validates a .pack.json file. Throws MalformedPack when a pattern
// does not compile or a capture index exceeds the pattern's group count.
PatternPack load_pack(const std::string& path);
PatternPack parse_pack(const std::string& json_text, const std::string& origin);

// Line-oriented scan of the captured log. First matching rule wins per line;
// unmatched lines containing "error" (case-insensitive) become conservative
// category=other errors; everything else is dropped. The harness-owned
// "### PHASE: compile|run" separator lines switch the tracked phase and are
// consumed. Total: never fails, whatever the input bytes.
std::vector<LogMessage> parse_log(const SimulationLog& log, const PatternPack& pack);

// Strict precedence classification: syntax > (timing|missing signal) >
// testcase failure > no error. A nonzero exit with an otherwise clean
// message list is reported as TestcaseFailure, never as success.
TriageVerdict classify(const std::vector<LogMessage>& messages, int exit_code);

// Renders a failing verdict's messages (earliest first, at most max_lines)
// in the single-line diagnostic format, appending a "…N more" marker when
// truncated. Throws InvalidVerdict for NoError.
std::string feedback_excerpt(const TriageVerdict& verdict, std::size_t max_lines);

// Final reported simulation time via the pack's time pattern; when the log
// prints several, the last one wins. Returns nullopt when absent.
std::optional<SimTime> extract_sim_time(const std::string& raw_text, const PatternPack& pack);

} // namespace chiraag
