#pragma once

#include "chiraag/llm_gateway.hpp"
#include "chiraag/log_triage.hpp"
#include "chiraag/sim_harness.hpp"
#include "chiraag/spec_format.hpp"
#include "chiraag/sva_parse.hpp"

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace chiraag {

struct ProviderConfig {
    enum class Kind { Remote, Replay };
    Kind kind = Kind::Replay;
    RemoteProviderConfig remote;  // kind == Remote
    std::string transcript_path;  // kind == Replay
};

struct AdapterConfig {
    enum class Kind { External, Replay };
    Kind kind = Kind::Replay;
    std::vector<std::string> compile_cmd;
    std::vector<std::string> run_cmd;
    std::string replay_dir;
    std::chrono::milliseconds timeout{60000};
};

// Everything one run needs, loaded from a .run.json file. Relative paths in
// the file resolve against the file's own directory.
struct RunConfig {
    std::string design_name;
    std::string spec_path;
    std::optional<std::string> heading_pattern;
    LabelMap label_map;
    DesignBundle design;
    ProviderConfig provider;
    AdapterConfig adapter;
    std::string pack_path;
    std::string bind_template_path;
    std::string system_prompt_path;
    std::string generate_prompt_path;
    std::string repair_prompt_path;
    std::string format_repair_prompt_path;
    std::uint32_t max_repair_iterations = 1; // T
    std::size_t feedback_max_lines = 10;
    std::uint32_t baseline_assertion_count = 0;
    std::string output_dir;
};

// Throws ConfigError on schema violations, T < 1, or unresolvable paths.
RunConfig load_run_config(const std::string& path);

// One pass around the generate/validate/simulate/repair loop. Records the
// prompt/response pair that produced this suite revision and the verdict its
// evaluation reached.
struct IterationRecord {
    std::uint32_t n = 0;
    std::optional<Prompt> prompt;
    std::optional<ProviderResponse> response;
    std::optional<Prompt> format_retry_prompt;
    std::optional<ProviderResponse> format_retry_response;
    AssertionSuite suite;                  // snapshot after this record's merge
    std::optional<TriageVerdict> verdict;  // absent when the run aborted first
    std::string gate;                      // "local" or "simulator"
    std::optional<SimTime> sim_time;
    std::vector<std::string> retired;      // names dropped by the merge
    std::optional<std::string> error;      // provider/extraction/simulator failure
    std::chrono::milliseconds wall_time{0};
};

struct Trace {
    std::string design_name;
    std::vector<IterationRecord> records;
    std::uint32_t prompt_count = 0;        // primary provider calls
    std::uint32_t provider_calls = 0;      // including format-repair retries
    std::chrono::milliseconds generation_wall{0};
    std::chrono::milliseconds total_wall{0};
};

struct PipelineOutcome {
    enum class Status { Converged, ImplementationBugSuspected, ExhaustedIterations };
    Status status = Status::ExhaustedIterations;
    AssertionSuite final_suite;
    std::vector<LogMessage> evidence;      // ImplementationBugSuspected only
    std::optional<std::string> error;      // hard-failure note, when any
};

const char* to_string(PipelineOutcome::Status status);
int exit_code_for(PipelineOutcome::Status status); // 0 / 2 / 3

struct PipelineResult {
    PipelineOutcome outcome;
    Trace trace;
};

// The injectable collaborators of one run; lets tests drive the loop with
// in-memory providers and adapters.
struct PipelineEnv {
    FormattedSpec spec;
    CompletionProvider* provider = nullptr;
    const SimulatorAdapter* adapter = nullptr;
    PatternPack pack;
    PromptTemplates templates;
    std::string bind_template_path;
};

// Core loop: generate, then while n < T validate/simulate/triage and repair.
// Workspaces land under config.output_dir/workspaces/iter<n>. Does not write
// the trace artifacts; callers use persist_trace.
PipelineResult run_pipeline(const RunConfig& config, PipelineEnv& env);

// Convenience entry point: builds the environment from the config's files,
// runs the loop, persists the artifact bundle under config.output_dir.
PipelineResult run_pipeline(const RunConfig& config);

// Replace same-named assertions in place, append new names in repaired
// order, and retire members of `failing` that were not re-emitted under any
// name when the response introduced at least one new assertion. Names of
// retired assertions are appended to retired_out when given. Throws
// DuplicateName when the repaired suite repeats a name.
AssertionSuite merge_repair(const AssertionSuite& old_suite, const AssertionSuite& repaired,
                            const std::set<std::string>& failing,
                            std::vector<std::string>* retired_out = nullptr);

// Writes trace.json, final.sva, outcome.json (deterministic under replay)
// and timing.json (all wall-clock fields) into output_dir. Returns
// output_dir.
std::string persist_trace(const PipelineResult& result, const RunConfig& config,
                          const std::string& output_dir);

} // namespace chiraag
