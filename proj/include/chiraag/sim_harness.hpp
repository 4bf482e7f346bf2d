#pragma once

#include "chiraag/log_triage.hpp"
#include "chiraag/sim_log.hpp"
#include "chiraag/sva_parse.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chiraag {

// The design-side inputs of a run: RTL sources, one testbench, and the
// top-level module the bind template targets.
struct DesignBundle {
    std::vector<std::string> design_files;
    std::string testbench_file;
    std::string testcase_description;
    std::string top_module;
};

// Stateless recipe for invoking one simulator. Implementations must be
// shareable across concurrent runs.
class SimulatorAdapter {
public:
    virtual ~SimulatorAdapter() = default;
    virtual std::string identity() const = 0;
    // Runs compile + run phases inside workspace and captures everything.
    // iteration selects the canned log for replay adapters and is ignored by
    // external ones.
    virtual SimulationLog run(const std::string& workspace, const std::string& top_module,
                              std::chrono::milliseconds timeout,
                              std::uint32_t iteration) const = 0;
};

// Spawns the configured compile/run argument vectors. {{workspace}} and
// {{top}} placeholders are substituted per invocation. Output of both phases
// is concatenated with "### PHASE: compile|run" separator lines (injected
// only when the phase produced output). The process tree is killed on
// timeout with a 2 s grace period.
class ExternalAdapter : public SimulatorAdapter {
public:
    ExternalAdapter(std::vector<std::string> compile_cmd, std::vector<std::string> run_cmd,
                    std::string identity = "external");
    std::string identity() const override;
    SimulationLog run(const std::string& workspace, const std::string& top_module,
                      std::chrono::milliseconds timeout,
                      std::uint32_t iteration) const override;

private:
    std::vector<std::string> compile_cmd_; // empty = skip compile phase
    std::vector<std::string> run_cmd_;
    std::string identity_;
};

// Returns iter<N>.log from a replay directory, byte for byte. An optional
// iter<N>.exit sidecar supplies the exit code (default 0). The hermetic test
// path.
class ReplayAdapter : public SimulatorAdapter {
public:
    explicit ReplayAdapter(std::string replay_dir);
    std::string identity() const override;
    SimulationLog run(const std::string& workspace, const std::string& top_module,
                      std::chrono::milliseconds timeout,
                      std::uint32_t iteration) const override;

private:
    std::string replay_dir_;
};

// Creates workspace_dir (fresh; rtl/, tb/, generated_assertions.sv) from
// copies of the bundle plus the suite rendered through the bind template
// ({{top}} and {{assertions}} placeholders). Never mutates its inputs.
// Throws IoFailure on unreadable inputs, BindTemplateMissing when the
// template file is absent.
std::string compose_workspace(const DesignBundle& bundle, const AssertionSuite& suite,
                              const std::string& bind_template_path,
                              const std::string& workspace_dir);

// Runs the adapter inside the workspace and persists raw_text to
// <workspace>/sim.log. Throws SimulatorNotFound / SimulationTimeout /
// CrashWithoutOutput.
SimulationLog run_simulation(const std::string& workspace, const SimulatorAdapter& adapter,
                             const std::string& top_module,
                             std::chrono::milliseconds timeout, std::uint32_t iteration = 0);

// Final simulation time per the pack's time pattern; last match wins.
std::optional<SimTime> report_sim_time(const SimulationLog& log, const PatternPack& pack);

} // namespace chiraag
