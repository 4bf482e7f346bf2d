#include "chiraag/orchestrator.hpp"

#include "chiraag/errors.hpp"
#include "chiraag/util.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <optional>

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using nlohmann::json;

namespace chiraag {

const char* to_string(PipelineOutcome::Status status) {
    switch (status) {
        case PipelineOutcome::Status::Converged: return "converged";
        case PipelineOutcome::Status::ImplementationBugSuspected:
            return "implementation_bug_suspected";
        case PipelineOutcome::Status::ExhaustedIterations: return "exhausted";
    }
    return "exhausted";
}

int exit_code_for(PipelineOutcome::Status status) {
    switch (status) {
        case PipelineOutcome::Status::Converged: return 0;
        case PipelineOutcome::Status::ImplementationBugSuspected: return 2;
        case PipelineOutcome::Status::ExhaustedIterations: return 3;
    }
    return 3;
}

// ---------------------------------------------------------------------------
// Run configuration

namespace {

std::chrono::milliseconds since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
}

void require_keys(const json& j, const std::vector<std::string>& allowed,
                  const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

std::string require_string(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_string()) {
        throw ConfigError(where + ": missing string field '" + key + "'");
    }
    return j.at(key).get<std::string>();
}

std::vector<std::string> string_array(const json& j, const std::string& key,
                                      const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw ConfigError(where + ": missing array field '" + key + "'");
    }
    std::vector<std::string> out;
    for (const json& v : j.at(key)) {
        if (!v.is_string()) {
            throw ConfigError(where + ": '" + key + "' must contain strings");
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

} // namespace

RunConfig load_run_config(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError("run config " + path + ": " + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("run config " + path + ": expected an object");
    }
    require_keys(j,
                 {"design_name", "spec", "heading_pattern", "label_map", "design", "provider",
                  "adapter", "pack", "bind_template", "prompts", "max_repair_iterations",
                  "feedback_max_lines", "baseline_assertion_count", "output_dir"},
                 path);

    const fs::path base = fs::absolute(fs::path(path)).parent_path();
    auto resolve = [&](const std::string& p) {
        fs::path q(p);
        return q.is_absolute() ? q.lexically_normal().string()
                               : (base / q).lexically_normal().string();
    };

    RunConfig config;
    config.design_name = require_string(j, "design_name", path);
    config.spec_path = resolve(require_string(j, "spec", path));
    if (j.contains("heading_pattern")) {
        config.heading_pattern = require_string(j, "heading_pattern", path);
    }

    if (!j.contains("label_map") || !j.at("label_map").is_object()) {
        throw ConfigError(path + ": missing object field 'label_map'");
    }
    for (const auto& [heading, label] : j.at("label_map").items()) {
        if (!label.is_string()) {
            throw ConfigError(path + ": label_map values must be strings");
        }
        config.label_map[heading] = label.get<std::string>();
    }

    {
        if (!j.contains("design") || !j.at("design").is_object()) {
            throw ConfigError(path + ": missing object field 'design'");
        }
        const json& jd = j.at("design");
        const std::string where = path + " design";
        require_keys(jd, {"files", "testbench", "testcase_description", "top_module"}, where);
        for (const std::string& f : string_array(jd, "files", where)) {
            config.design.design_files.push_back(resolve(f));
        }
        config.design.testbench_file = resolve(require_string(jd, "testbench", where));
        config.design.testcase_description = jd.value("testcase_description", "");
        config.design.top_module = require_string(jd, "top_module", where);
        if (config.design.top_module.empty()) {
            throw ConfigError(where + ": top_module must not be empty");
        }
    }

    {
        if (!j.contains("provider") || !j.at("provider").is_object()) {
            throw ConfigError(path + ": missing object field 'provider'");
        }
        const json& jp = j.at("provider");
        const std::string where = path + " provider";
        require_keys(jp,
                     {"kind", "endpoint", "model", "timeout_ms", "max_transport_retries",
                      "temperature", "transcript"},
                     where);
        const std::string kind = require_string(jp, "kind", where);
        if (kind == "remote") {
            config.provider.kind = ProviderConfig::Kind::Remote;
            config.provider.remote.endpoint = require_string(jp, "endpoint", where);
            config.provider.remote.model = require_string(jp, "model", where);
            config.provider.remote.timeout =
                std::chrono::milliseconds(jp.value("timeout_ms", 30000));
            config.provider.remote.max_transport_retries = jp.value("max_transport_retries", 2);
            config.provider.remote.temperature = jp.value("temperature", 0.0);
        } else if (kind == "replay") {
            config.provider.kind = ProviderConfig::Kind::Replay;
            config.provider.transcript_path = resolve(require_string(jp, "transcript", where));
        } else {
            throw ConfigError(where + ": kind must be 'remote' or 'replay'");
        }
    }

    {
        if (!j.contains("adapter") || !j.at("adapter").is_object()) {
            throw ConfigError(path + ": missing object field 'adapter'");
        }
        const json& ja = j.at("adapter");
        const std::string where = path + " adapter";
        require_keys(ja, {"kind", "compile_cmd", "run_cmd", "replay_dir", "timeout_ms"}, where);
        const std::string kind = require_string(ja, "kind", where);
        if (kind == "external") {
            config.adapter.kind = AdapterConfig::Kind::External;
            if (ja.contains("compile_cmd")) {
                config.adapter.compile_cmd = string_array(ja, "compile_cmd", where);
            }
            config.adapter.run_cmd = string_array(ja, "run_cmd", where);
            if (config.adapter.run_cmd.empty()) {
                throw ConfigError(where + ": run_cmd must not be empty");
            }
        } else if (kind == "replay") {
            config.adapter.kind = AdapterConfig::Kind::Replay;
            config.adapter.replay_dir = resolve(require_string(ja, "replay_dir", where));
        } else {
            throw ConfigError(where + ": kind must be 'external' or 'replay'");
        }
        config.adapter.timeout = std::chrono::milliseconds(ja.value("timeout_ms", 60000));
    }

    config.pack_path = resolve(require_string(j, "pack", path));
    config.bind_template_path = resolve(require_string(j, "bind_template", path));

    {
        if (!j.contains("prompts") || !j.at("prompts").is_object()) {
            throw ConfigError(path + ": missing object field 'prompts'");
        }
        const json& jp = j.at("prompts");
        const std::string where = path + " prompts";
        require_keys(jp, {"system", "generate", "repair", "format_repair"}, where);
        config.system_prompt_path = resolve(require_string(jp, "system", where));
        config.generate_prompt_path = resolve(require_string(jp, "generate", where));
        config.repair_prompt_path = resolve(require_string(jp, "repair", where));
        config.format_repair_prompt_path = resolve(require_string(jp, "format_repair", where));
    }

    if (!j.contains("max_repair_iterations") ||
        !j.at("max_repair_iterations").is_number_integer()) {
        throw ConfigError(path + ": missing integer field 'max_repair_iterations'");
    }
    const long t = j.at("max_repair_iterations").get<long>();
    if (t < 1) {
        throw ConfigError(path + ": max_repair_iterations must be >= 1");
    }
    config.max_repair_iterations = static_cast<std::uint32_t>(t);

    const long max_lines = j.value("feedback_max_lines", 10);
    if (max_lines < 1) {
        throw ConfigError(path + ": feedback_max_lines must be >= 1");
    }
    config.feedback_max_lines = static_cast<std::size_t>(max_lines);

    const long baseline = j.value("baseline_assertion_count", 0);
    if (baseline < 0) {
        throw ConfigError(path + ": baseline_assertion_count must be >= 0");
    }
    config.baseline_assertion_count = static_cast<std::uint32_t>(baseline);

    config.output_dir = resolve(require_string(j, "output_dir", path));

    // every referenced input must resolve now, not at iteration time
    std::vector<std::string> missing;
    auto check = [&](const std::string& p) {
        if (!fs::exists(p)) missing.push_back(p);
    };
    check(config.spec_path);
    for (const std::string& f : config.design.design_files) check(f);
    check(config.design.testbench_file);
    check(config.pack_path);
    check(config.bind_template_path);
    check(config.system_prompt_path);
    check(config.generate_prompt_path);
    check(config.repair_prompt_path);
    check(config.format_repair_prompt_path);
    if (config.provider.kind == ProviderConfig::Kind::Replay) {
        check(config.provider.transcript_path);
    }
    if (config.adapter.kind == AdapterConfig::Kind::Replay) {
        check(config.adapter.replay_dir);
    }
    if (!missing.empty()) {
        std::string joined;
        for (const std::string& m : missing) {
            if (!joined.empty()) joined += ", ";
            joined += m;
        }
        throw ConfigError(path + ": referenced paths do not exist: " + joined);
    }
    return config;
}

// ---------------------------------------------------------------------------
// Repair merge

AssertionSuite merge_repair(const AssertionSuite& old_suite, const AssertionSuite& repaired,
                            const std::set<std::string>& failing,
                            std::vector<std::string>* retired_out) {
    std::set<std::string> repaired_names;
    for (const Assertion& a : repaired.assertions) {
        if (!repaired_names.insert(a.name).second) {
            throw DuplicateName(a.name);
        }
    }
    std::set<std::string> old_names;
    for (const Assertion& a : old_suite.assertions) old_names.insert(a.name);

    const bool has_new_assertion =
        std::any_of(repaired.assertions.begin(), repaired.assertions.end(),
                    [&](const Assertion& a) { return old_names.count(a.name) == 0; });

    AssertionSuite merged;
    merged.design_name = old_suite.design_name;
    for (const Assertion& a : old_suite.assertions) {
        auto it = std::find_if(repaired.assertions.begin(), repaired.assertions.end(),
                               [&](const Assertion& r) { return r.name == a.name; });
        if (it != repaired.assertions.end()) {
            merged.assertions.push_back(*it); // replaced in place
            continue;
        }
        // retire rule: a failing assertion not re-emitted under any name is
        // dropped when the response introduced at least one new assertion
        if (failing.count(a.name) && has_new_assertion) {
            if (retired_out) retired_out->push_back(a.name);
            continue;
        }
        merged.assertions.push_back(a);
    }
    for (const Assertion& a : repaired.assertions) {
        if (old_names.count(a.name) == 0) {
            merged.assertions.push_back(a);
        }
    }
    return merged;
}

// ---------------------------------------------------------------------------
// Pipeline loop

namespace {

LogMessage local_gate_message(const std::string& assertion_name, const SyntaxDiagnostic& d) {
    LogMessage msg;
    msg.phase = LogPhase::Compile;
    msg.severity = Severity::Error;
    msg.category = Category::Syntax;
    msg.text = assertion_name + ": " + render_diagnostic_body(d);
    msg.assertion_name = assertion_name;
    msg.location = SourceLocation{"<generated>", d.line};
    return msg;
}

} // namespace

PipelineResult run_pipeline(const RunConfig& config, PipelineEnv& env) {
    const auto run_start = std::chrono::steady_clock::now();

    PipelineResult result;
    Trace& trace = result.trace;
    trace.design_name = config.design_name;

    ConversationHistory history;
    const fs::path ws_root = fs::path(config.output_dir) / "workspaces";

    auto provider_call = [&](const Prompt& prompt, bool primary) {
        ++trace.provider_calls;
        if (primary) ++trace.prompt_count;
        return env.provider->complete(prompt);
    };
    auto finish = [&](PipelineOutcome::Status status, AssertionSuite suite) {
        result.outcome.status = status;
        result.outcome.final_suite = std::move(suite);
        trace.total_wall = since(run_start);
    };

    // initial generation; rec_begin tracks the start of the work that
    // produced the current suite revision (generation or repair prompt)
    auto rec_begin = std::chrono::steady_clock::now();
    IterationRecord rec;
    rec.n = 0;
    {
        Prompt prompt = build_generation_prompt(env.spec, env.templates);
        rec.prompt = prompt;
        try {
            ProviderResponse response = provider_call(prompt, true);
            trace.generation_wall = since(rec_begin);
            rec.response = response;
            history.append(std::move(prompt), response);
            rec.suite = extract_assertions(
                response, config.design_name,
                AssertionOrigin{AssertionOrigin::Kind::InitialGeneration, 0});
        } catch (const ChiraagError& e) {
            rec.error = e.what();
            rec.wall_time = since(rec_begin);
            trace.records.push_back(std::move(rec));
            finish(PipelineOutcome::Status::ExhaustedIterations, AssertionSuite{});
            result.outcome.error = trace.records.back().error;
            return result;
        }
    }

    std::uint32_t n = 0;
    while (true) {

        // evaluate the current suite: local gate first, simulator otherwise
        TriageVerdict verdict;
        std::vector<SuiteDiagnostics> local = validate_suite(rec.suite);
        if (!local.empty()) {
            rec.gate = "local";
            verdict.kind = TriageVerdict::Kind::SyntaxError;
            for (const SuiteDiagnostics& sd : local) {
                for (const SyntaxDiagnostic& d : sd.diagnostics) {
                    verdict.messages.push_back(local_gate_message(sd.assertion_name, d));
                }
            }
        } else {
            rec.gate = "simulator";
            const std::string workspace =
                (ws_root / ("iter" + std::to_string(n))).string();
            try {
                std::error_code ec;
                fs::remove_all(workspace, ec); // tool-owned path; reruns overwrite
                compose_workspace(config.design, rec.suite, env.bind_template_path, workspace);
                SimulationLog log = run_simulation(workspace, *env.adapter,
                                                   config.design.top_module,
                                                   config.adapter.timeout, n);
                verdict = classify(parse_log(log, env.pack), log.exit_code);
                rec.sim_time = report_sim_time(log, env.pack);
            } catch (const ChiraagError& e) {
                rec.error = e.what();
                rec.wall_time = since(rec_begin);
                AssertionSuite suite = rec.suite;
                trace.records.push_back(std::move(rec));
                finish(PipelineOutcome::Status::ExhaustedIterations, std::move(suite));
                result.outcome.error = trace.records.back().error;
                return result;
            }
        }
        rec.verdict = verdict;
        rec.wall_time = since(rec_begin);
        trace.records.push_back(rec);
        const AssertionSuite& suite = trace.records.back().suite;

        if (verdict.kind == TriageVerdict::Kind::NoError) {
            finish(PipelineOutcome::Status::Converged, suite);
            return result;
        }
        if (verdict.kind == TriageVerdict::Kind::TestcaseFailure) {
            // a suspected implementation bug is never prompted away
            finish(PipelineOutcome::Status::ImplementationBugSuspected, suite);
            result.outcome.evidence = verdict.messages;
            return result;
        }
        if (n == config.max_repair_iterations) {
            finish(PipelineOutcome::Status::ExhaustedIterations, suite);
            return result;
        }

        // repair round
        const auto next_begin = std::chrono::steady_clock::now();
        IterationRecord next;
        next.n = n + 1;
        next.suite = suite;
        std::set<std::string> failing_names;
        for (const Assertion* a : select_failing(suite, verdict)) {
            failing_names.insert(a->name);
        }
        try {
            Prompt prompt = build_repair_prompt(suite, verdict, history, env.templates,
                                                config.feedback_max_lines);
            next.prompt = prompt;
            ProviderResponse response = provider_call(prompt, true);
            next.response = response;
            history.append(std::move(prompt), response);

            std::optional<AssertionSuite> repaired;
            const AssertionOrigin origin{AssertionOrigin::Kind::Repair, next.n};
            try {
                repaired = extract_assertions(response, config.design_name, origin);
            } catch (const ExtractionFailure& first_failure) {
                Prompt retry_prompt = build_format_repair_prompt(
                    first_failure, PromptPurpose::Repair, next.prompt->iteration,
                    env.templates);
                next.format_retry_prompt = retry_prompt;
                ProviderResponse retry = provider_call(retry_prompt, false);
                next.format_retry_response = retry;
                try {
                    repaired = extract_assertions(retry, config.design_name, origin);
                } catch (const ExtractionFailure& second_failure) {
                    next.error = "extraction failed after format retry: " +
                                 second_failure.reason;
                }
            }
            if (repaired) {
                try {
                    next.retired.clear();
                    next.suite = merge_repair(suite, *repaired, failing_names, &next.retired);
                } catch (const DuplicateName& dn) {
                    next.error = dn.what();
                    next.suite = suite; // keep the previous revision
                }
            }
        } catch (const ChiraagError& e) {
            // hard provider failure: record it and stop
            next.error = e.what();
            next.wall_time = since(next_begin);
            AssertionSuite last_good = suite;
            trace.records.push_back(std::move(next));
            finish(PipelineOutcome::Status::ExhaustedIterations, std::move(last_good));
            result.outcome.error = trace.records.back().error;
            return result;
        }
        rec = std::move(next);
        rec_begin = next_begin;
        ++n;
    }
}

// ---------------------------------------------------------------------------
// Artifact persistence

namespace {

ordered_json message_to_json(const LogMessage& m) {
    ordered_json j;
    j["phase"] = to_string(m.phase);
    j["severity"] = to_string(m.severity);
    j["category"] = to_string(m.category);
    j["text"] = m.text;
    if (m.signal) j["signal"] = *m.signal;
    if (m.assertion_name) j["assertion_name"] = *m.assertion_name;
    if (m.location) {
        j["location"] = ordered_json{{"file", m.location->file}, {"line", m.location->line}};
    }
    return j;
}

ordered_json verdict_to_json(const TriageVerdict& v) {
    ordered_json j;
    j["kind"] = to_string(v.kind);
    if (v.failure_kind) j["failure_kind"] = to_string(*v.failure_kind);
    ordered_json messages = ordered_json::array();
    for (const LogMessage& m : v.messages) messages.push_back(message_to_json(m));
    j["messages"] = std::move(messages);
    return j;
}

ordered_json suite_to_json(const AssertionSuite& suite) {
    ordered_json out = ordered_json::array();
    for (const Assertion& a : suite.assertions) {
        ordered_json j;
        j["name"] = a.name;
        if (a.comment) j["comment"] = *a.comment;
        j["source_text"] = a.source_text;
        j["origin"] = ordered_json{
            {"kind", a.origin.kind == AssertionOrigin::Kind::InitialGeneration
                         ? "initial_generation"
                         : "repair"},
            {"iteration", a.origin.iteration}};
        out.push_back(std::move(j));
    }
    return out;
}

ordered_json prompt_to_json(const Prompt& p) {
    ordered_json j;
    j["purpose"] = to_string(p.purpose);
    j["iteration"] = p.iteration;
    j["system_preamble"] = p.system_preamble;
    j["user_message"] = p.user_message;
    return j;
}

ordered_json response_to_json(const ProviderResponse& r) {
    ordered_json j;
    j["provider_id"] = r.provider_id;
    j["text"] = r.text;
    return j;
}

ordered_json sim_time_to_json(const SimTime& t) {
    return ordered_json{{"value", t.value}, {"unit", t.unit}};
}

} // namespace

std::string persist_trace(const PipelineResult& result, const RunConfig& config,
                          const std::string& output_dir) {
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec) {
        throw IoFailure("cannot create output directory", output_dir);
    }

    const Trace& trace = result.trace;
    const PipelineOutcome& outcome = result.outcome;

    ordered_json jt;
    jt["design_name"] = trace.design_name;
    jt["prompt_count"] = trace.prompt_count;
    jt["provider_calls"] = trace.provider_calls;
    ordered_json records = ordered_json::array();
    for (const IterationRecord& rec : trace.records) {
        ordered_json j;
        j["n"] = rec.n;
        if (!rec.gate.empty()) j["gate"] = rec.gate;
        if (rec.prompt) j["prompt"] = prompt_to_json(*rec.prompt);
        if (rec.response) j["response"] = response_to_json(*rec.response);
        if (rec.format_retry_prompt) {
            j["format_retry_prompt"] = prompt_to_json(*rec.format_retry_prompt);
        }
        if (rec.format_retry_response) {
            j["format_retry_response"] = response_to_json(*rec.format_retry_response);
        }
        j["suite"] = suite_to_json(rec.suite);
        if (rec.verdict) j["verdict"] = verdict_to_json(*rec.verdict);
        j["retired"] = rec.retired;
        if (rec.sim_time) j["sim_time"] = sim_time_to_json(*rec.sim_time);
        if (rec.error) j["error"] = *rec.error;
        records.push_back(std::move(j));
    }
    jt["records"] = std::move(records);
    write_file((fs::path(output_dir) / "trace.json").string(), jt.dump(2) + "\n");

    write_file((fs::path(output_dir) / "final.sva").string(),
               render_sva_file(outcome.final_suite));

    std::optional<SimTime> last_sim_time;
    for (const IterationRecord& rec : trace.records) {
        if (rec.sim_time) last_sim_time = rec.sim_time;
    }

    ordered_json jo;
    jo["design_name"] = trace.design_name;
    jo["status"] = to_string(outcome.status);
    jo["exit_code"] = exit_code_for(outcome.status);
    jo["assertion_count"] = outcome.final_suite.assertions.size();
    jo["prompt_count"] = trace.prompt_count;
    jo["baseline_assertion_count"] = config.baseline_assertion_count;
    if (last_sim_time) jo["sim_time"] = sim_time_to_json(*last_sim_time);
    if (outcome.status == PipelineOutcome::Status::ExhaustedIterations) {
        jo["advice"] = "examine design implementation and restart";
    }
    if (!outcome.evidence.empty()) {
        ordered_json evidence = ordered_json::array();
        for (const LogMessage& m : outcome.evidence) evidence.push_back(message_to_json(m));
        jo["evidence"] = std::move(evidence);
    }
    if (outcome.error) jo["error"] = *outcome.error;
    write_file((fs::path(output_dir) / "outcome.json").string(), jo.dump(2) + "\n");

    // wall-clock numbers live apart so the rest of the bundle is
    // byte-stable under replay
    ordered_json jw;
    jw["generation_wall_ms"] = trace.generation_wall.count();
    jw["total_wall_ms"] = trace.total_wall.count();
    ordered_json timings = ordered_json::array();
    for (const IterationRecord& rec : trace.records) {
        ordered_json j;
        j["n"] = rec.n;
        j["wall_ms"] = rec.wall_time.count();
        if (rec.response) j["latency_ms"] = rec.response->latency.count();
        if (rec.format_retry_response) {
            j["format_retry_latency_ms"] = rec.format_retry_response->latency.count();
        }
        timings.push_back(std::move(j));
    }
    jw["records"] = std::move(timings);
    write_file((fs::path(output_dir) / "timing.json").string(), jw.dump(2) + "\n");

    return output_dir;
}

// ---------------------------------------------------------------------------
// Config-driven entry point

namespace {

std::unique_ptr<CompletionProvider> make_provider(const ProviderConfig& config) {
    if (config.kind == ProviderConfig::Kind::Remote) {
        return std::make_unique<RemoteProvider>(config.remote);
    }
    return std::make_unique<ReplayProvider>(config.transcript_path);
}

std::unique_ptr<SimulatorAdapter> make_adapter(const AdapterConfig& config) {
    if (config.kind == AdapterConfig::Kind::External) {
        return std::make_unique<ExternalAdapter>(config.compile_cmd, config.run_cmd);
    }
    return std::make_unique<ReplayAdapter>(config.replay_dir);
}

} // namespace

PipelineResult run_pipeline(const RunConfig& config) {
    SpecDocument doc;
    doc.source_path = config.spec_path;
    doc.body = read_file(config.spec_path);
    doc.design_name = config.design_name;

    PipelineEnv env;
    env.spec = to_formatted(extract(doc, config.heading_pattern), config.label_map);
    env.pack = load_pack(config.pack_path);
    env.templates = PromptTemplates::load(config.system_prompt_path,
                                          config.generate_prompt_path,
                                          config.repair_prompt_path,
                                          config.format_repair_prompt_path);
    env.bind_template_path = config.bind_template_path;

    std::unique_ptr<CompletionProvider> provider = make_provider(config.provider);
    std::unique_ptr<SimulatorAdapter> adapter = make_adapter(config.adapter);
    env.provider = provider.get();
    env.adapter = adapter.get();

    PipelineResult result = run_pipeline(config, env);
    persist_trace(result, config, config.output_dir);
    return result;
}

} // namespace chiraag
