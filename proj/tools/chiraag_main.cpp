#include "chiraag/errors.hpp"
#include "chiraag/llm_gateway.hpp"
#include "chiraag/log_triage.hpp"
#include "chiraag/orchestrator.hpp"
#include "chiraag/report.hpp"
#include "chiraag/sim_log.hpp"
#include "chiraag/spec_format.hpp"
#include "chiraag/sva_parse.hpp"
#include "chiraag/util.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace chiraag;

namespace {

constexpr int kExitUsage = 4;

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    bool verbose = false;
};

int cmd_format(const GlobalArgs& args) {
    if (args.config_path.empty()) {
        std::cerr << "format: --config is required" << std::endl;
        return kExitUsage;
    }
    RunConfig config = load_run_config(args.config_path);

    SpecDocument doc;
    doc.source_path = config.spec_path;
    doc.body = read_file(config.spec_path);
    doc.design_name = config.design_name;

    FormattedSpec spec = to_formatted(extract(doc, config.heading_pattern), config.label_map);
    const std::string serialized = serialize_spec(spec);

    if (args.out_dir.empty()) {
        std::cout << serialized;
        return 0;
    }
    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    const std::string path =
        (fs::path(args.out_dir) / (config.design_name + ".spec.json")).string();
    write_file(path, serialized);
    std::cout << path << std::endl;
    return 0;
}

int cmd_generate(const GlobalArgs& args) {
    if (args.config_path.empty()) {
        std::cerr << "generate: --config is required" << std::endl;
        return kExitUsage;
    }
    RunConfig config = load_run_config(args.config_path);
    if (!args.out_dir.empty()) {
        config.output_dir = fs::absolute(args.out_dir).lexically_normal().string();
    }

    PipelineResult result = run_pipeline(config);
    const PipelineOutcome& outcome = result.outcome;

    std::cout << config.design_name << ": " << to_string(outcome.status) << " ("
              << outcome.final_suite.assertions.size() << " assertions, "
              << result.trace.prompt_count << " prompts";
    std::optional<SimTime> sim_time;
    for (const IterationRecord& rec : result.trace.records) {
        if (rec.sim_time) sim_time = rec.sim_time;
    }
    if (sim_time) {
        std::cout << ", sim time " << sim_time->to_string();
    }
    std::cout << ")" << std::endl;

    for (std::size_t i = 0; i < outcome.evidence.size() && i < 5; ++i) {
        std::cout << "evidence: " << outcome.evidence[i].text << std::endl;
    }
    if (outcome.evidence.size() > 5) {
        std::cout << "evidence: …" << (outcome.evidence.size() - 5) << " more" << std::endl;
    }
    if (outcome.error) {
        std::cerr << "error: " << *outcome.error << std::endl;
    }
    std::cout << "artifacts: " << config.output_dir << std::endl;
    return exit_code_for(outcome.status);
}

int cmd_triage(const std::string& log_path, const std::string& pack_path, int exit_code,
               bool verbose) {
    PatternPack pack = load_pack(pack_path);
    SimulationLog log;
    log.raw_text = read_file(log_path);
    log.exit_code = exit_code;

    const std::vector<LogMessage> messages = parse_log(log, pack);
    const TriageVerdict verdict = classify(messages, exit_code);

    switch (verdict.kind) {
        case TriageVerdict::Kind::NoError:
            std::cout << "NoError" << std::endl;
            return 0;
        case TriageVerdict::Kind::SimulationFailure:
            if (*verdict.failure_kind == TriageVerdict::FailureKind::MissingSignal) {
                std::string signals;
                for (const LogMessage& m : verdict.messages) {
                    if (m.signal && signals.find(*m.signal) == std::string::npos) {
                        if (!signals.empty()) signals += ", ";
                        signals += *m.signal;
                    }
                }
                std::cout << "SimulationFailure(missing_signal): " << signals << std::endl;
            } else {
                std::cout << "SimulationFailure(timing): " << verdict.messages.size()
                          << " message(s)" << std::endl;
            }
            break;
        case TriageVerdict::Kind::SyntaxError:
        case TriageVerdict::Kind::TestcaseFailure:
            std::cout << to_string(verdict.kind) << ": " << verdict.messages.size()
                      << " message(s)" << std::endl;
            break;
    }
    if (verbose) {
        std::cout << feedback_excerpt(verdict, verdict.messages.size()) << std::endl;
    }
    return 1;
}

int cmd_lint(const std::string& sva_path) {
    AssertionSuite suite =
        load_sva_file(sva_path, fs::path(sva_path).stem().string());
    const std::vector<SuiteDiagnostics> findings = validate_suite(suite);
    if (findings.empty()) {
        return 0;
    }
    for (const SuiteDiagnostics& entry : findings) {
        for (const SyntaxDiagnostic& d : entry.diagnostics) {
            std::cout << sva_path << ": " << entry.assertion_name << ": "
                      << render_diagnostic(d) << std::endl;
        }
    }
    return 1;
}

int cmd_report(const std::vector<std::string>& bundle_dirs, const std::string& format) {
    std::vector<RunReport> reports;
    reports.reserve(bundle_dirs.size());
    for (const std::string& dir : bundle_dirs) {
        reports.push_back(load_report(dir));
    }
    if (format == "json") {
        std::cout << render_reports_json(reports);
    } else {
        std::cout << render_table(reports);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chiraag: natural-language hardware specs to validated SVA suites"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalArgs args;
    app.add_option("--config", args.config_path, "run configuration file (.run.json)");
    app.add_option("--out", args.out_dir, "output directory override");
    app.add_flag("--verbose", args.verbose, "print extra detail");

    app.add_subcommand("format",
                       "structure a raw specification into the seven-label JSON format");
    app.add_subcommand("generate",
                       "run the full generate/validate/simulate/repair pipeline");

    auto* triage_cmd =
        app.add_subcommand("triage", "classify an existing simulation log against a pack");
    std::string triage_log;
    std::string triage_pack;
    int triage_exit_code = 0;
    triage_cmd->add_option("log", triage_log, "simulation log file")
        ->required()
        ->check(CLI::ExistingFile);
    triage_cmd->add_option("--pack", triage_pack, "pattern pack (.pack.json)")
        ->required()
        ->check(CLI::ExistingFile);
    triage_cmd->add_option("--exit-code", triage_exit_code,
                           "exit code the simulator reported (default 0)");

    auto* lint_cmd = app.add_subcommand("lint", "validate a .sva file; print diagnostics");
    std::string lint_path;
    lint_cmd->add_option("file", lint_path, "assertion file (.sva)")
        ->required()
        ->check(CLI::ExistingFile);

    auto* report_cmd = app.add_subcommand(
        "report",
        "aggregate completed runs into a performance table\n"
        "columns: OT Assert. = baseline assertions declared in the run config;\n"
        "LLM Assert. = final suite size; #Prompts = provider calls excluding\n"
        "format retries (the initial generation counts); Sim. Time = simulator-\n"
        "reported simulation time; SVA Gen. Time = wall time of the initial\n"
        "generation call");
    std::vector<std::string> report_bundles;
    std::string report_format = "table";
    report_cmd->add_option("bundles", report_bundles, "artifact bundle directories")
        ->required()
        ->check(CLI::ExistingDirectory);
    report_cmd->add_option("--format", report_format, "output format")
        ->check(CLI::IsMember({"table", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << std::endl << app.help() << std::endl;
        return kExitUsage;
    }

    try {
        if (app.got_subcommand("format")) return cmd_format(args);
        if (app.got_subcommand("generate")) return cmd_generate(args);
        if (app.got_subcommand("triage")) {
            return cmd_triage(triage_log, triage_pack, triage_exit_code, args.verbose);
        }
        if (app.got_subcommand("lint")) return cmd_lint(lint_path);
        if (app.got_subcommand("report")) return cmd_report(report_bundles, report_format);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << std::endl;
        return kExitUsage;
    } catch (const ChiraagError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return kExitUsage;
}
