#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chiraag/errors.hpp"
#include "chiraag/orchestrator.hpp"
#include "chiraag/util.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

using namespace chiraag;
namespace fs = std::filesystem;

namespace {

const char* kBindTemplate = DATA_DIR "/bind/direct_include.sv.tmpl";
const char* kPackPath = DATA_DIR "/packs/generic.pack.json";
const char* kRvRunConfig = FIXTURES_DIR "/rv_timer/replay.run.json";

std::string fresh_dir() {
    static int counter = 0;
    const std::string path = "/tmp/chiraag_orch_test_" + std::to_string(getpid()) + "_" +
                             std::to_string(counter++);
    fs::remove_all(path);
    return path;
}

// Scripted provider: responses served in order, every prompt recorded.
class FakeProvider : public CompletionProvider {
public:
    std::vector<std::string> responses;
    std::vector<Prompt> seen;
    std::optional<std::size_t> throw_at; // call index that raises a timeout

    std::string id() const override { return "fake"; }

    ProviderResponse complete(const Prompt& prompt) override {
        seen.push_back(prompt);
        const std::size_t call = seen.size() - 1;
        if (throw_at && call == *throw_at) {
            throw ProviderTimeout("injected transport failure");
        }
        if (call >= responses.size()) {
            throw TranscriptExhausted(responses.size());
        }
        ProviderResponse r;
        r.text = responses[call];
        r.provider_id = "fake";
        return r;
    }
};

// Scripted adapter: one canned log per iteration number.
class FakeAdapter : public SimulatorAdapter {
public:
    std::map<std::uint32_t, SimulationLog> logs;
    mutable int calls = 0;

    std::string identity() const override { return "fake"; }

    SimulationLog run(const std::string&, const std::string&, std::chrono::milliseconds,
                      std::uint32_t iteration) const override {
        ++calls;
        auto it = logs.find(iteration);
        if (it == logs.end()) {
            throw ChiraagError("fake adapter has no log for iteration " +
                               std::to_string(iteration));
        }
        return it->second;
    }
};

SimulationLog clean_log() {
    SimulationLog log;
    log.raw_text = "### PHASE: run\ntestcases passed: 3 of 3\n$finish at 42 ns\n";
    log.exit_code = 0;
    return log;
}

SimulationLog assert_fail_log() {
    SimulationLog log;
    log.raw_text = "### PHASE: run\nASSERT FAILED p_a at 10ns\n$finish at 42 ns\n";
    log.exit_code = 1;
    return log;
}

SimulationLog timing_log(const std::string& name) {
    SimulationLog log;
    log.raw_text =
        "### PHASE: run\nERROR[TIMING] consequent never holds in property '" + name +
        "' at 15ns\n";
    log.exit_code = 1;
    return log;
}

std::string fence(const std::string& body) {
    return "Here is the suite.\n```systemverilog\n" + body + "```\n";
}

std::string good_response() {
    return fence("// Reset clears the counter\n"
                 "property p_a;\n@(posedge clk_i)\n(!rst_ni) |-> (count == 0);\n"
                 "endproperty\nassert property (p_a);\n"
                 "\n"
                 "// Counter advances while active\n"
                 "property p_b;\n@(posedge clk_i)\n(active) |=> (count == $past(count) + 1);\n"
                 "endproperty\nassert property (p_b);\n");
}

std::string broken_response() {
    // the sequence operator is outside the supported subset, so the local
    // gate rejects this without any simulator involvement
    return fence("property p_bad;\n@(posedge clk_i)\na ##1 b;\nendproperty\n"
                 "assert property (p_bad);\n");
}

std::string fixed_bad_response() {
    return fence("property p_bad;\n@(posedge clk_i)\na |=> b;\nendproperty\n"
                 "assert property (p_bad);\n");
}

std::string repaired_a_response() {
    return fence("property p_a;\n@(posedge clk_i)\n(!rst_ni) |=> (count == 0);\n"
                 "endproperty\nassert property (p_a);\n");
}

RunConfig base_config(const std::string& root, std::uint32_t t) {
    fs::create_directories(root);
    write_file(root + "/demo.sv", "module demo;\nendmodule\n");
    write_file(root + "/demo_tb.sv", "module demo_tb;\nendmodule\n");

    RunConfig config;
    config.design_name = "demo";
    config.spec_path = root + "/unused-spec.md";
    config.design.design_files = {root + "/demo.sv"};
    config.design.testbench_file = root + "/demo_tb.sv";
    config.design.top_module = "demo";
    config.adapter.timeout = std::chrono::milliseconds(5000);
    config.pack_path = kPackPath;
    config.bind_template_path = kBindTemplate;
    config.max_repair_iterations = t;
    config.feedback_max_lines = 10;
    config.baseline_assertion_count = 2;
    config.output_dir = root + "/out";
    return config;
}

FormattedSpec small_spec() {
    FormattedSpec s;
    s.introduction = "A demo block.";
    s.system_overview = "Counts while active.";
    s.functional_requirements = {"count increments each active cycle"};
    s.timing_requirements = {"reset acts within one cycle"};
    return s;
}

struct Rig {
    FakeProvider provider;
    FakeAdapter adapter;
    PipelineEnv env;
    RunConfig config;

    Rig(const std::string& root, std::uint32_t t) : config(base_config(root, t)) {
        env.spec = small_spec();
        env.provider = &provider;
        env.adapter = &adapter;
        env.pack = load_pack(kPackPath);
        env.templates = PromptTemplates::load(
            DATA_DIR "/prompts/system.txt", DATA_DIR "/prompts/generate.txt",
            DATA_DIR "/prompts/repair.txt", DATA_DIR "/prompts/format_repair.txt");
        env.bind_template_path = kBindTemplate;
    }
};

Assertion named(const std::string& name, const std::string& body_signal = "x") {
    Assertion a;
    a.name = name;
    a.source_text = "property " + name + ";\n" + body_signal + " |-> y;\nendproperty\n" +
                    "assert property (" + name + ");";
    ParseResult r = parse_assertion(a.source_text);
    a.ast = std::get<PropertyAst>(r);
    return a;
}

AssertionSuite suite_of(std::initializer_list<Assertion> assertions) {
    AssertionSuite s;
    s.design_name = "demo";
    for (const Assertion& a : assertions) s.assertions.push_back(a);
    return s;
}

std::vector<std::string> names_of(const AssertionSuite& s) {
    std::vector<std::string> out;
    for (const Assertion& a : s.assertions) out.push_back(a.name);
    return out;
}

} // namespace

TEST_CASE("the recorded run config loads with resolved paths and replay wiring") {
    const RunConfig config = load_run_config(kRvRunConfig);
    CHECK(config.design_name == "rv_timer");
    CHECK(config.max_repair_iterations == 11);
    CHECK(config.feedback_max_lines == 10);     // default
    CHECK(config.baseline_assertion_count == 0);
    CHECK(config.provider.kind == ProviderConfig::Kind::Replay);
    CHECK(config.adapter.kind == AdapterConfig::Kind::Replay);
    CHECK(config.adapter.timeout == std::chrono::milliseconds(60000)); // default
    CHECK_FALSE(config.heading_pattern.has_value());

    // relative entries resolve against the config file's own directory
    const std::string dir = fs::path(kRvRunConfig).parent_path().string();
    CHECK(config.spec_path == dir + "/spec.md");
    CHECK(config.provider.transcript_path == dir + "/transcript.json");
    CHECK(config.adapter.replay_dir == dir + "/logs");
    CHECK(config.output_dir == dir + "/out");
    CHECK(fs::exists(config.pack_path));
    CHECK(fs::exists(config.bind_template_path));
    REQUIRE(config.design.design_files.size() == 1);
    CHECK(fs::exists(config.design.design_files[0]));
    CHECK(config.design.top_module == "rv_timer");
    CHECK(config.label_map.at("theory_of_operation") == "system_overview");
}

TEST_CASE("run config schema violations are startup errors") {
    const std::string root = fresh_dir();
    fs::create_directories(root);
    auto write_and_load = [&](const std::string& body) {
        const std::string path = root + "/bad.run.json";
        write_file(path, body);
        return load_run_config(path);
    };

    // unknown top-level key
    nlohmann::json base = nlohmann::json::parse(read_file(kRvRunConfig));
    nlohmann::json with_extra = base;
    with_extra["surprise"] = 1;
    CHECK_THROWS_WITH_AS(write_and_load(with_extra.dump()),
                         doctest::Contains("unknown key 'surprise'"), ConfigError);

    // T < 1
    nlohmann::json zero_t = base;
    zero_t["max_repair_iterations"] = 0;
    CHECK_THROWS_WITH_AS(write_and_load(zero_t.dump()),
                         doctest::Contains("max_repair_iterations must be >= 1"), ConfigError);

    // unknown provider kind
    nlohmann::json bad_kind = base;
    bad_kind["provider"]["kind"] = "psychic";
    CHECK_THROWS_AS(write_and_load(bad_kind.dump()), ConfigError);

    CHECK_THROWS_AS(write_and_load("not json"), ConfigError);
    CHECK_THROWS_AS(write_and_load("[]"), ConfigError);
}

TEST_CASE("all dangling input paths are collected into one error") {
    const std::string root = fresh_dir();
    fs::create_directories(root);
    nlohmann::json base = nlohmann::json::parse(read_file(kRvRunConfig));
    base["spec"] = "ghost-spec.md";
    base["pack"] = "ghost.pack.json";
    const std::string path = root + "/dangling.run.json";
    write_file(path, base.dump());

    // the other relative paths now resolve against root, so they dangle too;
    // the error must name at least our two plantings in one message
    try {
        load_run_config(path);
        FAIL_CHECK("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("referenced paths do not exist") != std::string::npos);
        CHECK(what.find("ghost-spec.md") != std::string::npos);
        CHECK(what.find("ghost.pack.json") != std::string::npos);
    }
}

TEST_CASE("merge_repair replaces same-named assertions in place") {
    const AssertionSuite old_suite = suite_of({named("p_a"), named("p_b"), named("p_c")});
    Assertion fixed = named("p_b", "z");
    const AssertionSuite repaired = suite_of({fixed});

    std::vector<std::string> retired;
    const AssertionSuite merged = merge_repair(old_suite, repaired, {"p_b"}, &retired);
    CHECK(names_of(merged) == std::vector<std::string>{"p_a", "p_b", "p_c"});
    CHECK(merged.assertions[1].source_text == fixed.source_text);
    CHECK(retired.empty());
}

TEST_CASE("merge_repair appends new names and retires failing ones they replace") {
    const AssertionSuite old_suite = suite_of({named("p_a"), named("p_b")});
    const AssertionSuite repaired = suite_of({named("p_b_fixed")});

    std::vector<std::string> retired;
    const AssertionSuite merged = merge_repair(old_suite, repaired, {"p_b"}, &retired);
    CHECK(names_of(merged) == std::vector<std::string>{"p_a", "p_b_fixed"});
    CHECK(retired == std::vector<std::string>{"p_b"});
}

TEST_CASE("merge_repair keeps a failing assertion when nothing new arrived") {
    const AssertionSuite old_suite = suite_of({named("p_a"), named("p_b")});
    const AssertionSuite repaired = suite_of({named("p_a", "w")});

    std::vector<std::string> retired;
    const AssertionSuite merged = merge_repair(old_suite, repaired, {"p_a", "p_b"}, &retired);
    CHECK(names_of(merged) == std::vector<std::string>{"p_a", "p_b"});
    CHECK(retired.empty());
}

TEST_CASE("merge_repair keeps suite order: replacements in place, additions at the end") {
    const AssertionSuite old_suite = suite_of({named("p_a"), named("p_b"), named("p_c")});
    const AssertionSuite repaired =
        suite_of({named("p_new_1"), named("p_b", "q"), named("p_new_2")});

    std::vector<std::string> retired;
    const AssertionSuite merged = merge_repair(old_suite, repaired, {"p_b"}, &retired);
    CHECK(names_of(merged) ==
          std::vector<std::string>{"p_a", "p_b", "p_c", "p_new_1", "p_new_2"});
    CHECK(retired.empty());
}

TEST_CASE("merge_repair rejects a repaired suite that repeats a name") {
    const AssertionSuite old_suite = suite_of({named("p_a")});
    const AssertionSuite repaired = suite_of({named("p_x"), named("p_x", "q")});
    CHECK_THROWS_AS(merge_repair(old_suite, repaired, {"p_a"}, nullptr), DuplicateName);
}

TEST_CASE("a clean first simulation converges with one prompt") {
    Rig rig(fresh_dir(), 3);
    rig.provider.responses = {good_response()};
    rig.adapter.logs[0] = clean_log();

    const PipelineResult result = run_pipeline(rig.config, rig.env);

    CHECK(result.outcome.status == PipelineOutcome::Status::Converged);
    CHECK(exit_code_for(result.outcome.status) == 0);
    CHECK(names_of(result.outcome.final_suite) == std::vector<std::string>{"p_a", "p_b"});
    CHECK(result.trace.prompt_count == 1);
    CHECK(result.trace.provider_calls == 1);
    CHECK(rig.adapter.calls == 1);

    REQUIRE(result.trace.records.size() == 1);
    const IterationRecord& rec = result.trace.records[0];
    CHECK(rec.n == 0);
    CHECK(rec.gate == "simulator");
    REQUIRE(rec.verdict.has_value());
    CHECK(rec.verdict->kind == TriageVerdict::Kind::NoError);
    REQUIRE(rec.sim_time.has_value());
    CHECK(rec.sim_time->to_string() == "42ns");
    REQUIRE(rec.prompt.has_value());
    CHECK(rec.prompt->purpose == PromptPurpose::Generate);
    CHECK(rec.prompt->iteration == 0);

    // the workspace was composed for the simulated round
    CHECK(fs::exists(rig.config.output_dir + "/workspaces/iter0/generated_assertions.sv"));
}

TEST_CASE("a testcase failure stops the run as a suspected implementation bug") {
    Rig rig(fresh_dir(), 3);
    rig.provider.responses = {good_response(), good_response()}; // second must not be used
    rig.adapter.logs[0] = assert_fail_log();

    const PipelineResult result = run_pipeline(rig.config, rig.env);

    CHECK(result.outcome.status == PipelineOutcome::Status::ImplementationBugSuspected);
    CHECK(exit_code_for(result.outcome.status) == 2);
    CHECK(result.trace.prompt_count == 1); // no repair prompt after a testcase failure
    CHECK(result.trace.provider_calls == 1);
    REQUIRE(result.outcome.evidence.size() == 1);
    CHECK(result.outcome.evidence[0].text == "ASSERT FAILED p_a at 10ns");
    CHECK(result.trace.records.size() == 1);
    CHECK(names_of(result.outcome.final_suite) == std::vector<std::string>{"p_a", "p_b"});
}

TEST_CASE("the local gate rejects bad suites without touching the simulator") {
    Rig rig(fresh_dir(), 3);
    rig.provider.responses = {broken_response(), fixed_bad_response()};
    rig.adapter.logs[1] = clean_log();

    const PipelineResult result = run_pipeline(rig.config, rig.env);

    CHECK(result.outcome.status == PipelineOutcome::Status::Converged);
    REQUIRE(result.trace.records.size() == 2);
    CHECK(result.trace.records[0].gate == "local");
    CHECK(result.trace.records[0].verdict->kind == TriageVerdict::Kind::SyntaxError);
    CHECK(result.trace.records[1].gate == "simulator");
    CHECK(result.trace.records[1].n == 1);
    CHECK(rig.adapter.calls == 1); // iteration 0 never simulated

    CHECK_FALSE(fs::exists(rig.config.output_dir + "/workspaces/iter0"));
    CHECK(fs::exists(rig.config.output_dir + "/workspaces/iter1"));

    // the local diagnostics feed the repair prompt like any other feedback
    REQUIRE(result.trace.records[1].prompt.has_value());
    CHECK(result.trace.records[1].prompt->user_message.find("p_bad") != std::string::npos);
}

TEST_CASE("a suite that never fixes exhausts the iteration bound") {
    Rig rig(fresh_dir(), 3);
    rig.provider.responses = {broken_response(), broken_response(), broken_response(),
                              broken_response()};

    const PipelineResult result = run_pipeline(rig.config, rig.env);

    CHECK(result.outcome.status == PipelineOutcome::Status::ExhaustedIterations);
    CHECK(exit_code_for(result.outcome.status) == 3);
    REQUIRE(result.trace.records.size() == 4); // generation + T repairs
    for (std::size_t i = 0; i < result.trace.records.size(); ++i) {
        CHECK(result.trace.records[i].n == static_cast<std::uint32_t>(i)); // gap-free
        CHECK(result.trace.records[i].gate == "local");
        CHECK(result.trace.records[i].verdict->kind == TriageVerdict::Kind::SyntaxError);
    }
    CHECK(result.trace.prompt_count == 4);    // 1 + T primary calls
    CHECK(result.trace.provider_calls == 4);  // no format retries happened
    CHECK(rig.adapter.calls == 0);
}

TEST_CASE("a simulation failure is repaired in place and the run converges") {
    Rig rig(fresh_dir(), 3);
    rig.provider.responses = {good_response(), repaired_a_response()};
    rig.adapter.logs[0] = timing_log("p_a");
    rig.adapter.logs[1] = clean_log();

    const PipelineResult result = run_pipeline(rig.config, rig.env);

    CHECK(result.outcome.status == PipelineOutcome::Status::Converged);
    REQUIRE(result.trace.records.size() == 2);
    const IterationRecord& first = result.trace.records[0];
    CHECK(first.verdict->kind == TriageVerdict::Kind::SimulationFailure);
    CHECK(first.verdict->failure_kind == TriageVerdict::FailureKind::Timing);

    const IterationRecord& second = result.trace.records[1];
    CHECK(second.retired.empty());
    CHECK(names_of(second.suite) == std::vector<std::string>{"p_a", "p_b"});
    CHECK(second.suite.assertions[0].source_text.find("|=>") != std::string::npos);
    CHECK(second.suite.assertions[0].origin.kind == AssertionOrigin::Kind::Repair);
    CHECK(second.suite.assertions[0].origin.iteration == 1);
    CHECK(second.suite.assertions[1].origin.kind == AssertionOrigin::Kind::InitialGeneration);

    // the repair prompt carried the failing assertion and the evidence
    REQUIRE(second.prompt.has_value());
    CHECK(second.prompt->user_message.find("property p_a") != std::string::npos);
    CHECK(second.prompt->user_message.find("property p_b") == std::string::npos);
    CHECK(second.prompt->user_message.find("ERROR[TIMING]") != std::string::npos);
    CHECK(rig.adapter.calls == 2);
}

TEST_CASE("an unreadable repair reply gets exactly one format retry") {
    Rig rig(fresh_dir(), 3);
    rig.provider.responses = {broken_response(), "I think the problem is the reset polarity.",
                              fixed_bad_response()};
    rig.adapter.logs[1] = clean_log();

    const PipelineResult result = run_pipeline(rig.config, rig.env);

    CHECK(result.outcome.status == PipelineOutcome::Status::Converged);
    CHECK(result.trace.prompt_count == 2);   // generation + repair
    CHECK(result.trace.provider_calls == 3); // + one format retry

    REQUIRE(result.trace.records.size() == 2);
    const IterationRecord& second = result.trace.records[1];
    REQUIRE(second.format_retry_prompt.has_value());
    CHECK(second.format_retry_prompt->purpose == PromptPurpose::Repair);
    CHECK(second.format_retry_prompt->iteration == second.prompt->iteration);
    CHECK(second.format_retry_prompt->user_message.find("no code fence found") !=
          std::string::npos);
    REQUIRE(second.format_retry_response.has_value());
    CHECK_FALSE(second.error.has_value());

    REQUIRE(rig.provider.seen.size() == 3);
    CHECK(rig.provider.seen[1].purpose == PromptPurpose::Repair);
    CHECK(rig.provider.seen[2].purpose == PromptPurpose::Repair);
}

TEST_CASE("a second unreadable reply consumes the round and keeps the old suite") {
    Rig rig(fresh_dir(), 1);
    rig.provider.responses = {broken_response(), "prose only", "still prose"};

    const PipelineResult result = run_pipeline(rig.config, rig.env);

    CHECK(result.outcome.status == PipelineOutcome::Status::ExhaustedIterations);
    REQUIRE(result.trace.records.size() == 2);
    const IterationRecord& second = result.trace.records[1];
    REQUIRE(second.error.has_value());
    CHECK(second.error->find("extraction failed after format retry") != std::string::npos);
    CHECK(names_of(second.suite) == std::vector<std::string>{"p_bad"}); // unchanged
    CHECK(result.trace.prompt_count == 2);
    CHECK(result.trace.provider_calls == 3);
}

TEST_CASE("a hard provider failure ends the run with the last good suite") {
    Rig rig(fresh_dir(), 3);
    rig.provider.responses = {good_response()};
    rig.provider.throw_at = 1; // the first repair call
    rig.adapter.logs[0] = timing_log("p_a");

    const PipelineResult result = run_pipeline(rig.config, rig.env);

    CHECK(result.outcome.status == PipelineOutcome::Status::ExhaustedIterations);
    REQUIRE(result.outcome.error.has_value());
    CHECK(result.outcome.error->find("injected transport failure") != std::string::npos);
    CHECK(names_of(result.outcome.final_suite) == std::vector<std::string>{"p_a", "p_b"});
    REQUIRE(result.trace.records.size() == 2);
    CHECK(result.trace.records[1].error == result.outcome.error);
}

TEST_CASE("an unreadable first generation ends the run before any simulation") {
    Rig rig(fresh_dir(), 3);
    rig.provider.responses = {"Sorry, I can only help with Python."};

    const PipelineResult result = run_pipeline(rig.config, rig.env);

    CHECK(result.outcome.status == PipelineOutcome::Status::ExhaustedIterations);
    REQUIRE(result.outcome.error.has_value());
    CHECK(result.outcome.error->find("no code fence found") != std::string::npos);
    CHECK(result.outcome.final_suite.assertions.empty());
    CHECK(result.trace.provider_calls == 1); // no format retry at generation time
    CHECK(rig.adapter.calls == 0);
    REQUIRE(result.trace.records.size() == 1);
    CHECK_FALSE(result.trace.records[0].verdict.has_value());
}

TEST_CASE("a repaired suite that repeats a name keeps the previous revision") {
    Rig rig(fresh_dir(), 1);
    const std::string duplicate_reply =
        fence("property p_x;\na |-> b;\nendproperty\nassert property (p_x);\n"
              "\n"
              "property p_x;\nc |-> d;\nendproperty\nassert property (p_x);\n");
    rig.provider.responses = {broken_response(), duplicate_reply};

    const PipelineResult result = run_pipeline(rig.config, rig.env);

    CHECK(result.outcome.status == PipelineOutcome::Status::ExhaustedIterations);
    REQUIRE(result.trace.records.size() == 2);
    const IterationRecord& second = result.trace.records[1];
    REQUIRE(second.error.has_value());
    CHECK(second.error->find("p_x") != std::string::npos);
    CHECK(names_of(second.suite) == std::vector<std::string>{"p_bad"});
}

TEST_CASE("persist_trace writes the artifact bundle; replayed bytes are stable") {
    auto run_once = [](const std::string& root) {
        Rig rig(root, 3);
        rig.provider.responses = {good_response()};
        rig.adapter.logs[0] = clean_log();
        const PipelineResult result = run_pipeline(rig.config, rig.env);
        return persist_trace(result, rig.config, rig.config.output_dir);
    };

    const std::string first_dir = run_once(fresh_dir());
    for (const char* name : {"trace.json", "final.sva", "outcome.json", "timing.json"}) {
        CHECK(fs::exists(first_dir + "/" + std::string(name)));
    }

    const nlohmann::json outcome =
        nlohmann::json::parse(read_file(first_dir + "/outcome.json"));
    CHECK(outcome.at("design_name") == "demo");
    CHECK(outcome.at("status") == "converged");
    CHECK(outcome.at("exit_code") == 0);
    CHECK(outcome.at("assertion_count") == 2);
    CHECK(outcome.at("prompt_count") == 1);
    CHECK(outcome.at("baseline_assertion_count") == 2);
    CHECK(outcome.at("sim_time").at("value") == "42");
    CHECK(outcome.at("sim_time").at("unit") == "ns");
    CHECK_FALSE(outcome.contains("advice"));

    // the final suite re-parses cleanly
    AssertionSuite final_suite = load_sva_file(first_dir + "/final.sva", "demo");
    CHECK(final_suite.assertions.size() == 2);
    CHECK(validate_suite(final_suite).empty());

    const nlohmann::json trace = nlohmann::json::parse(read_file(first_dir + "/trace.json"));
    CHECK(trace.at("prompt_count") == 1);
    CHECK(trace.at("provider_calls") == 1);
    REQUIRE(trace.at("records").size() == 1);
    CHECK(trace["records"][0].at("n") == 0);
    CHECK(trace["records"][0].at("gate") == "simulator");

    // a second identical run produces byte-identical replay-stable artifacts
    const std::string second_dir = run_once(fresh_dir());
    for (const char* name : {"trace.json", "final.sva", "outcome.json"}) {
        CHECK(read_file(first_dir + "/" + std::string(name)) ==
              read_file(second_dir + "/" + std::string(name)));
    }
}

TEST_CASE("an exhausted run records the restart advice") {
    Rig rig(fresh_dir(), 1);
    rig.provider.responses = {broken_response(), broken_response()};
    const PipelineResult result = run_pipeline(rig.config, rig.env);
    const std::string dir = persist_trace(result, rig.config, rig.config.output_dir);

    const nlohmann::json outcome = nlohmann::json::parse(read_file(dir + "/outcome.json"));
    CHECK(outcome.at("status") == "exhausted");
    CHECK(outcome.at("exit_code") == 3);
    CHECK(outcome.at("advice") == "examine design implementation and restart");
}

TEST_CASE("a suspected bug records its evidence in the outcome artifact") {
    Rig rig(fresh_dir(), 3);
    rig.provider.responses = {good_response()};
    rig.adapter.logs[0] = assert_fail_log();
    const PipelineResult result = run_pipeline(rig.config, rig.env);
    const std::string dir = persist_trace(result, rig.config, rig.config.output_dir);

    const nlohmann::json outcome = nlohmann::json::parse(read_file(dir + "/outcome.json"));
    CHECK(outcome.at("status") == "implementation_bug_suspected");
    CHECK(outcome.at("exit_code") == 2);
    REQUIRE(outcome.contains("evidence"));
    CHECK(outcome["evidence"][0].at("text") == "ASSERT FAILED p_a at 10ns");
}

TEST_CASE("the config-driven entry point replays the recorded timer run end to end") {
    const RunConfig config = load_run_config(kRvRunConfig);
    fs::remove_all(config.output_dir);

    const PipelineResult result = run_pipeline(config);

    CHECK(result.outcome.status == PipelineOutcome::Status::Converged);
    CHECK(result.outcome.final_suite.assertions.size() == 11);
    CHECK(result.trace.prompt_count == 12);
    REQUIRE(result.trace.records.size() == 12);

    // the recorded verdict path: syntax repairs, one missing signal, timing
    // repairs, then convergence
    for (int i = 0; i <= 5; ++i) {
        CHECK(result.trace.records[static_cast<std::size_t>(i)].verdict->kind ==
              TriageVerdict::Kind::SyntaxError);
    }
    CHECK(result.trace.records[6].verdict->kind == TriageVerdict::Kind::SimulationFailure);
    CHECK(result.trace.records[6].verdict->failure_kind ==
          TriageVerdict::FailureKind::MissingSignal);
    for (int i = 7; i <= 10; ++i) {
        CHECK(result.trace.records[static_cast<std::size_t>(i)].verdict->kind ==
              TriageVerdict::Kind::SimulationFailure);
        CHECK(result.trace.records[static_cast<std::size_t>(i)].verdict->failure_kind ==
              TriageVerdict::FailureKind::Timing);
    }
    CHECK(result.trace.records[11].verdict->kind == TriageVerdict::Kind::NoError);
    REQUIRE(result.trace.records[11].sim_time.has_value());
    CHECK(result.trace.records[11].sim_time->to_string() == "80ns");
    CHECK(result.trace.records[7].retired ==
          std::vector<std::string>{"p_tick_count_increment"});

    // artifacts were persisted by the entry point
    CHECK(fs::exists(config.output_dir + "/trace.json"));
    CHECK(fs::exists(config.output_dir + "/outcome.json"));
    CHECK(fs::exists(config.output_dir + "/final.sva"));
    fs::remove_all(config.output_dir);
}
