#include "chiraag/log_triage.hpp"

#include "chiraag/errors.hpp"
#include "chiraag/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string_view>

using nlohmann::json;

namespace chiraag {

const char* to_string(LogPhase phase) {
    return phase == LogPhase::Compile ? "compile" : "run";
}

const char* to_string(Severity severity) {
    switch (severity) {
        case Severity::Info: return "info";
        case Severity::Warning: return "warning";
        case Severity::Error: return "error";
        case Severity::Fatal: return "fatal";
    }
    return "error";
}

const char* to_string(Category category) {
    switch (category) {
        case Category::Syntax: return "syntax";
        case Category::Timing: return "timing";
        case Category::MissingSignal: return "missing_signal";
        case Category::AssertionFailure: return "assertion_failure";
        case Category::TestcaseFailure: return "testcase_failure";
        case Category::Tool: return "tool";
        case Category::Other: return "other";
    }
    return "other";
}

const char* to_string(TriageVerdict::Kind kind) {
    switch (kind) {
        case TriageVerdict::Kind::NoError: return "NoError";
        case TriageVerdict::Kind::SyntaxError: return "SyntaxError";
        case TriageVerdict::Kind::SimulationFailure: return "SimulationFailure";
        case TriageVerdict::Kind::TestcaseFailure: return "TestcaseFailure";
    }
    return "NoError";
}

const char* to_string(TriageVerdict::FailureKind kind) {
    return kind == TriageVerdict::FailureKind::Timing ? "timing" : "missing_signal";
}

namespace {

LogPhase parse_phase(const std::string& s, const std::string& origin) {
    if (s == "compile") return LogPhase::Compile;
    if (s == "run") return LogPhase::Run;
    throw MalformedPack(origin + ": unknown phase '" + s + "'");
}

Severity parse_severity(const std::string& s, const std::string& origin) {
    if (s == "info") return Severity::Info;
    if (s == "warning") return Severity::Warning;
    if (s == "error") return Severity::Error;
    if (s == "fatal") return Severity::Fatal;
    throw MalformedPack(origin + ": unknown severity '" + s + "'");
}

Category parse_category(const std::string& s, const std::string& origin) {
    if (s == "syntax") return Category::Syntax;
    if (s == "timing") return Category::Timing;
    if (s == "missing_signal") return Category::MissingSignal;
    if (s == "assertion_failure") return Category::AssertionFailure;
    if (s == "testcase_failure") return Category::TestcaseFailure;
    if (s == "tool") return Category::Tool;
    if (s == "other") return Category::Other;
    throw MalformedPack(origin + ": unknown category '" + s + "'");
}

std::regex compile_pattern(const std::string& text, const std::string& origin) {
    try {
        return std::regex(text, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
        throw MalformedPack(origin + ": pattern does not compile: " + e.what());
    }
}

std::optional<int> capture_index(const json& captures, const char* key,
                                 const std::regex& pattern, const std::string& origin) {
    if (!captures.contains(key)) return std::nullopt;
    const json& v = captures.at(key);
    if (!v.is_number_integer()) {
        throw MalformedPack(origin + ": capture '" + std::string(key) +
                            "' must be a group index");
    }
    const int idx = v.get<int>();
    if (idx < 1 || static_cast<unsigned>(idx) > pattern.mark_count()) {
        throw MalformedPack(origin + ": capture '" + std::string(key) + "' references group " +
                            std::to_string(idx) + " but the pattern has " +
                            std::to_string(pattern.mark_count()) + " group(s)");
    }
    return idx;
}

// the harness-owned phase separators (see sim_harness)
constexpr const char* kCompileSeparator = "### PHASE: compile";
constexpr const char* kRunSeparator = "### PHASE: run";

bool contains_error_token(const std::string& line) {
    static constexpr std::string_view needle = "error";
    const auto it = std::search(line.begin(), line.end(), needle.begin(), needle.end(),
                                [](char a, char b) {
                                    return std::tolower(static_cast<unsigned char>(a)) == b;
                                });
    return it != line.end();
}

} // namespace

PatternPack parse_pack(const std::string& json_text, const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw MalformedPack(origin + ": " + e.what());
    }
    if (!j.is_object()) {
        throw MalformedPack(origin + ": pack must be an object");
    }
    for (const auto& [key, _] : j.items()) {
        if (key != "name" && key != "rules" && key != "sim_time_pattern") {
            throw MalformedPack(origin + ": unknown key '" + key + "'");
        }
    }
    if (!j.contains("name") || !j.at("name").is_string()) {
        throw MalformedPack(origin + ": missing string field 'name'");
    }
    if (!j.contains("rules") || !j.at("rules").is_array()) {
        throw MalformedPack(origin + ": missing array field 'rules'");
    }
    if (!j.contains("sim_time_pattern") || !j.at("sim_time_pattern").is_string()) {
        throw MalformedPack(origin + ": missing string field 'sim_time_pattern'");
    }

    PatternPack pack;
    pack.name = j.at("name").get<std::string>();
    pack.sim_time_pattern_text = j.at("sim_time_pattern").get<std::string>();
    pack.sim_time_pattern = compile_pattern(pack.sim_time_pattern_text, origin);
    if (pack.sim_time_pattern.mark_count() < 2) {
        throw MalformedPack(origin +
                            ": sim_time_pattern needs a value capture and a unit capture");
    }

    int rule_no = 0;
    for (const json& jr : j.at("rules")) {
        ++rule_no;
        const std::string where = origin + " rule " + std::to_string(rule_no);
        if (!jr.is_object() || !jr.contains("pattern") || !jr.at("pattern").is_string()) {
            throw MalformedPack(where + ": missing string field 'pattern'");
        }
        PackRule rule;
        rule.pattern_text = jr.at("pattern").get<std::string>();
        rule.pattern = compile_pattern(rule.pattern_text, where);
        if (jr.contains("phase")) {
            rule.phase_filter = parse_phase(jr.at("phase").get<std::string>(), where);
        }
        rule.severity = parse_severity(jr.value("severity", "error"), where);
        if (!jr.contains("category")) {
            throw MalformedPack(where + ": missing field 'category'");
        }
        rule.category = parse_category(jr.at("category").get<std::string>(), where);
        if (jr.contains("captures")) {
            const json& captures = jr.at("captures");
            if (!captures.is_object()) {
                throw MalformedPack(where + ": 'captures' must be an object");
            }
            for (const auto& [key, _] : captures.items()) {
                if (key != "signal" && key != "assertion" && key != "file" && key != "line") {
                    throw MalformedPack(where + ": unknown capture '" + key + "'");
                }
            }
            rule.signal_group = capture_index(captures, "signal", rule.pattern, where);
            rule.assertion_group = capture_index(captures, "assertion", rule.pattern, where);
            rule.file_group = capture_index(captures, "file", rule.pattern, where);
            rule.line_group = capture_index(captures, "line", rule.pattern, where);
        }
        if (rule.category == Category::MissingSignal && !rule.signal_group) {
            throw MalformedPack(where + ": missing_signal rules must capture the signal");
        }
        pack.rules.push_back(std::move(rule));
    }
    return pack;
}

PatternPack load_pack(const std::string& path) {
    return parse_pack(read_file(path), path);
}

std::vector<LogMessage> parse_log(const SimulationLog& log, const PatternPack& pack) {
    std::vector<LogMessage> messages;
    LogPhase phase = LogPhase::Compile;

    for (const std::string& raw_line : split_lines(log.raw_text)) {
        const std::string line = sanitize_utf8(raw_line);
        if (line == kCompileSeparator) {
            phase = LogPhase::Compile;
            continue;
        }
        if (line == kRunSeparator) {
            phase = LogPhase::Run;
            continue;
        }
        if (trim(line).empty()) continue;

        bool matched = false;
        for (const PackRule& rule : pack.rules) {
            if (rule.phase_filter && *rule.phase_filter != phase) continue;
            std::smatch m;
            if (!std::regex_match(line, m, rule.pattern)) continue;

            LogMessage msg;
            msg.phase = phase;
            msg.severity = rule.severity;
            msg.category = rule.category;
            msg.text = line;
            if (rule.signal_group && m[*rule.signal_group].matched) {
                msg.signal = m[*rule.signal_group].str();
            }
            if (rule.assertion_group && m[*rule.assertion_group].matched) {
                msg.assertion_name = m[*rule.assertion_group].str();
            }
            if (rule.file_group && m[*rule.file_group].matched) {
                SourceLocation loc;
                loc.file = m[*rule.file_group].str();
                if (rule.line_group && m[*rule.line_group].matched) {
                    try {
                        loc.line = std::stoi(m[*rule.line_group].str());
                    } catch (...) {
                        loc.line = 0;
                    }
                }
                msg.location = std::move(loc);
            }
            messages.push_back(std::move(msg));
            matched = true;
            break;
        }
        if (!matched && contains_error_token(line)) {
            LogMessage msg;
            msg.phase = phase;
            msg.severity = Severity::Error;
            msg.category = Category::Other;
            msg.text = line;
            messages.push_back(std::move(msg));
        }
    }
    return messages;
}

TriageVerdict classify(const std::vector<LogMessage>& messages, int exit_code) {
    auto is_error = [](const LogMessage& m) {
        return m.severity == Severity::Error || m.severity == Severity::Fatal;
    };

    std::vector<LogMessage> syntax;
    std::vector<LogMessage> simulation;
    std::vector<LogMessage> testcase;
    std::vector<LogMessage> other_errors;
    std::optional<TriageVerdict::FailureKind> earliest_sim_kind;

    for (const LogMessage& m : messages) {
        switch (m.category) {
            case Category::Syntax:
                if (is_error(m)) syntax.push_back(m);
                break;
            case Category::Timing:
            case Category::MissingSignal:
                if (!earliest_sim_kind) {
                    earliest_sim_kind = m.category == Category::Timing
                                            ? TriageVerdict::FailureKind::Timing
                                            : TriageVerdict::FailureKind::MissingSignal;
                }
                simulation.push_back(m);
                break;
            case Category::AssertionFailure:
            case Category::TestcaseFailure:
                testcase.push_back(m);
                break;
            default:
                if (is_error(m)) other_errors.push_back(m);
                break;
        }
    }

    TriageVerdict verdict;
    if (!syntax.empty()) {
        verdict.kind = TriageVerdict::Kind::SyntaxError;
        verdict.messages = std::move(syntax);
        return verdict;
    }
    if (!simulation.empty()) {
        verdict.kind = TriageVerdict::Kind::SimulationFailure;
        verdict.failure_kind = earliest_sim_kind;
        verdict.messages = std::move(simulation);
        return verdict;
    }
    if (!testcase.empty() || (exit_code != 0 && !other_errors.empty())) {
        verdict.kind = TriageVerdict::Kind::TestcaseFailure;
        verdict.messages = std::move(testcase);
        if (exit_code != 0) {
            for (auto& m : other_errors) verdict.messages.push_back(std::move(m));
        }
        return verdict;
    }
    if (exit_code != 0) {
        // Silent nonzero exit must never read as success. The synthesized
        // message is the one evidence line that is not quoted from the log.
        LogMessage msg;
        msg.phase = LogPhase::Run;
        msg.severity = Severity::Fatal;
        msg.category = Category::Other;
        msg.text = "simulator exited with code " + std::to_string(exit_code) +
                   " without reporting errors";
        verdict.kind = TriageVerdict::Kind::TestcaseFailure;
        verdict.messages.push_back(std::move(msg));
        return verdict;
    }
    verdict.kind = TriageVerdict::Kind::NoError;
    return verdict;
}

std::string feedback_excerpt(const TriageVerdict& verdict, std::size_t max_lines) {
    if (verdict.kind == TriageVerdict::Kind::NoError) {
        throw InvalidVerdict("feedback_excerpt called on a NoError verdict");
    }
    std::ostringstream out;
    const std::size_t shown = std::min(verdict.messages.size(), max_lines);
    for (std::size_t i = 0; i < shown; ++i) {
        const LogMessage& m = verdict.messages[i];
        if (i > 0) out << "\n";
        const int line = m.location ? m.location->line : 0;
        out << "line " << line << ", col 0: " << m.text;
    }
    if (verdict.messages.size() > max_lines) {
        out << "\n…" << (verdict.messages.size() - max_lines) << " more";
    }
    return out.str();
}

std::optional<SimTime> extract_sim_time(const std::string& raw_text, const PatternPack& pack) {
    std::optional<SimTime> last;
    for (const std::string& line : split_lines(raw_text)) {
        std::smatch m;
        if (std::regex_match(line, m, pack.sim_time_pattern) && m.size() >= 3) {
            last = SimTime{m[1].str(), m[2].str()};
        }
    }
    return last;
}

} // namespace chiraag
