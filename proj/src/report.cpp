#include "chiraag/report.hpp"

#include "chiraag/errors.hpp"
#include "chiraag/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using nlohmann::json;

namespace chiraag {

namespace {

// An initial assertion counts as erroneous if any failing verdict's evidence
// names it, or a repair merge retired it.
std::uint32_t count_raw_errors(const std::set<std::string>& initial_names,
                               const Trace& trace) {
    std::set<std::string> erroneous;
    for (const IterationRecord& rec : trace.records) {
        if (rec.verdict && rec.verdict->kind != TriageVerdict::Kind::NoError) {
            for (const LogMessage& m : rec.verdict->messages) {
                if (m.assertion_name && initial_names.count(*m.assertion_name)) {
                    erroneous.insert(*m.assertion_name);
                }
            }
        }
        for (const std::string& name : rec.retired) {
            if (initial_names.count(name)) {
                erroneous.insert(name);
            }
        }
    }
    return static_cast<std::uint32_t>(erroneous.size());
}

} // namespace

RunReport summarize(const Trace& trace, const PipelineOutcome& outcome,
                    std::uint32_t baseline_count) {
    if (trace.records.empty()) {
        throw EmptyTrace();
    }
    RunReport report;
    report.module_name = trace.design_name;
    report.baseline_assertion_count = baseline_count;
    report.generated_assertion_count =
        static_cast<std::uint32_t>(outcome.final_suite.assertions.size());
    report.prompt_count = trace.prompt_count;
    report.sva_generation_time = trace.generation_wall;

    std::set<std::string> initial_names;
    for (const Assertion& a : trace.records.front().suite.assertions) {
        initial_names.insert(a.name);
    }
    report.raw_total =
        static_cast<std::uint32_t>(trace.records.front().suite.assertions.size());
    report.raw_error_count = count_raw_errors(initial_names, trace);

    for (const IterationRecord& rec : trace.records) {
        if (rec.sim_time) report.sim_time = rec.sim_time;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Bundle loading

namespace {

std::optional<TriageVerdict::Kind> kind_from_string(const std::string& s) {
    if (s == "NoError") return TriageVerdict::Kind::NoError;
    if (s == "SyntaxError") return TriageVerdict::Kind::SyntaxError;
    if (s == "SimulationFailure") return TriageVerdict::Kind::SimulationFailure;
    if (s == "TestcaseFailure") return TriageVerdict::Kind::TestcaseFailure;
    return std::nullopt;
}

json parse_bundle_file(const std::string& bundle_dir, const char* name) {
    const std::string path = (fs::path(bundle_dir) / name).string();
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace

RunReport load_report(const std::string& bundle_dir) {
    const json jt = parse_bundle_file(bundle_dir, "trace.json");
    const json jo = parse_bundle_file(bundle_dir, "outcome.json");
    const json jw = parse_bundle_file(bundle_dir, "timing.json");

    // rebuild the slice of the trace that report arithmetic reads
    Trace trace;
    trace.design_name = jt.value("design_name", "");
    trace.prompt_count = jt.value("prompt_count", 0u);
    if (!jt.contains("records") || !jt.at("records").is_array()) {
        throw ConfigError(bundle_dir + "/trace.json: missing 'records' array");
    }
    for (const json& jr : jt.at("records")) {
        IterationRecord rec;
        rec.n = jr.value("n", 0u);
        if (jr.contains("suite")) {
            for (const json& ja : jr.at("suite")) {
                Assertion a;
                a.name = ja.value("name", "");
                rec.suite.assertions.push_back(std::move(a));
            }
        }
        if (jr.contains("verdict")) {
            TriageVerdict verdict;
            const json& jv = jr.at("verdict");
            auto kind = kind_from_string(jv.value("kind", ""));
            if (!kind) {
                throw ConfigError(bundle_dir + "/trace.json: unknown verdict kind '" +
                                  jv.value("kind", "") + "'");
            }
            verdict.kind = *kind;
            if (jv.contains("messages")) {
                for (const json& jm : jv.at("messages")) {
                    LogMessage m;
                    m.text = jm.value("text", "");
                    if (jm.contains("assertion_name")) {
                        m.assertion_name = jm.at("assertion_name").get<std::string>();
                    }
                    verdict.messages.push_back(std::move(m));
                }
            }
            rec.verdict = std::move(verdict);
        }
        if (jr.contains("retired")) {
            for (const json& name : jr.at("retired")) {
                rec.retired.push_back(name.get<std::string>());
            }
        }
        if (jr.contains("sim_time")) {
            rec.sim_time = SimTime{jr.at("sim_time").value("value", ""),
                                   jr.at("sim_time").value("unit", "")};
        }
        trace.records.push_back(std::move(rec));
    }
    trace.generation_wall = std::chrono::milliseconds(jw.value("generation_wall_ms", 0));

    PipelineOutcome outcome;
    const std::size_t final_count = jo.value("assertion_count", 0u);
    outcome.final_suite.assertions.resize(final_count);

    return summarize(trace, outcome, jo.value("baseline_assertion_count", 0u));
}

// ---------------------------------------------------------------------------
// Aggregation and rendering

double raw_error_rate(const std::vector<RunReport>& reports) {
    if (reports.empty()) {
        throw EmptyInput("raw_error_rate needs at least one report");
    }
    std::uint64_t errors = 0;
    std::uint64_t total = 0;
    for (const RunReport& r : reports) {
        errors += r.raw_error_count;
        total += r.raw_total;
    }
    if (total == 0) {
        throw EmptyInput("raw_error_rate needs a nonzero assertion total");
    }
    return static_cast<double>(errors) / static_cast<double>(total);
}

std::string format_percent(double fraction) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.1f%%", fraction * 100.0);
    return buffer;
}

namespace {

std::string format_seconds(std::chrono::milliseconds ms) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2fs",
                  static_cast<double>(ms.count()) / 1000.0);
    return buffer;
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

} // namespace

std::string render_table(const std::vector<RunReport>& reports) {
    static const std::vector<std::string> headers = {"Module",    "OT Assert.",
                                                     "LLM Assert.", "#Prompts",
                                                     "Sim. Time", "SVA Gen. Time"};
    std::vector<std::vector<std::string>> rows;
    for (const RunReport& r : reports) {
        rows.push_back({r.module_name, std::to_string(r.baseline_assertion_count),
                        std::to_string(r.generated_assertion_count),
                        std::to_string(r.prompt_count),
                        r.sim_time ? r.sim_time->to_string() : "-",
                        format_seconds(r.sva_generation_time)});
    }

    std::vector<std::size_t> widths;
    for (std::size_t col = 0; col < headers.size(); ++col) {
        std::size_t w = headers[col].size();
        for (const auto& row : rows) w = std::max(w, row[col].size());
        widths.push_back(w);
    }

    auto render_row = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t col = 0; col < cells.size(); ++col) {
            if (col > 0) line += " | ";
            // module names read left-aligned, numbers right-aligned
            line += col == 0 ? pad_right(cells[col], widths[col])
                             : pad_left(cells[col], widths[col]);
        }
        return line + "\n";
    };

    std::string out = render_row(headers);
    {
        std::string rule;
        for (std::size_t col = 0; col < widths.size(); ++col) {
            if (col > 0) rule += "-+-";
            rule += std::string(widths[col], '-');
        }
        out += rule + "\n";
    }
    for (const auto& row : rows) out += render_row(row);

    if (reports.empty()) {
        out += "no runs\n";
        return out;
    }
    std::uint64_t errors = 0;
    std::uint64_t total = 0;
    for (const RunReport& r : reports) {
        errors += r.raw_error_count;
        total += r.raw_total;
    }
    out += "raw assertion error rate: " + format_percent(raw_error_rate(reports)) + " (" +
           std::to_string(errors) + "/" + std::to_string(total) + ")\n";
    return out;
}

std::string render_reports_json(const std::vector<RunReport>& reports) {
    ordered_json out = ordered_json::array();
    for (const RunReport& r : reports) {
        ordered_json j;
        j["module_name"] = r.module_name;
        j["baseline_assertion_count"] = r.baseline_assertion_count;
        j["generated_assertion_count"] = r.generated_assertion_count;
        j["prompt_count"] = r.prompt_count;
        if (r.sim_time) {
            j["sim_time"] = ordered_json{{"value", r.sim_time->value},
                                         {"unit", r.sim_time->unit}};
        }
        j["sva_generation_time_ms"] = r.sva_generation_time.count();
        j["raw_error_count"] = r.raw_error_count;
        j["raw_total"] = r.raw_total;
        out.push_back(std::move(j));
    }
    return out.dump(2) + "\n";
}

} // namespace chiraag
