#pragma once

#include "chiraag/orchestrator.hpp"
#include "chiraag/sim_log.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chiraag {

// Aggregate metrics for one completed pipeline run, one table row.
struct RunReport {
    std::string module_name;
    // assertions pre-existing in the design under test, as declared by the
    // run config (the tool does not parse RTL to count them)
    std::uint32_t baseline_assertion_count = 0;
    // final suite size
    std::uint32_t generated_assertion_count = 0;
    // provider calls excluding format-repair retries
    std::uint32_t prompt_count = 0;
    // simulator-reported simulation time of the last simulated iteration
    std::optional<SimTime> sim_time;
    // wall clock of the initial generation call
    std::chrono::milliseconds sva_generation_time{0};
    // initial assertions that ever appeared in failing-verdict evidence or
    // were retired during a repair merge
    std::uint32_t raw_error_count = 0;
    // size of the initial suite
    std::uint32_t raw_total = 0;
};

// Computes a RunReport from an in-memory trace and outcome.
// Throws EmptyTrace when the trace has no iteration records.
RunReport summarize(const Trace& trace, const PipelineOutcome& outcome,
                    std::uint32_t baseline_count);

// Reads trace.json / outcome.json / timing.json from an artifact bundle
// directory and computes the same report `summarize` would have produced.
RunReport load_report(const std::string& bundle_dir);

// Σ raw_error_count / Σ raw_total over all reports.
// Throws EmptyInput when `reports` is empty or Σ raw_total is zero.
double raw_error_rate(const std::vector<RunReport>& reports);

// Formats a fraction as a percentage with one decimal, e.g. 0.30 -> "30.0%".
std::string format_percent(double fraction);

// Fixed-width table with columns Module / OT Assert. / LLM Assert. /
// #Prompts / Sim. Time / SVA Gen. Time plus a raw-error-rate footer.
// Byte-stable for identical inputs.
std::string render_table(const std::vector<RunReport>& reports);

// Machine-readable variant: a JSON array of report objects.
std::string render_reports_json(const std::vector<RunReport>& reports);

} // namespace chiraag
