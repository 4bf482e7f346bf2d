#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chiraag/errors.hpp"
#include "chiraag/log_triage.hpp"
#include "chiraag/sim_harness.hpp"
#include "chiraag/util.hpp"

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

using namespace chiraag;
namespace fs = std::filesystem;

namespace {

const char* kBindTemplate = DATA_DIR "/bind/direct_include.sv.tmpl";
const char* kReplayDir = FIXTURES_DIR "/rv_timer/logs";

constexpr std::chrono::milliseconds kTimeout{5000};

std::string fresh_dir() {
    static int counter = 0;
    const std::string path =
        "/tmp/chiraag_sim_test_" + std::to_string(getpid()) + "_" + std::to_string(counter++);
    fs::remove_all(path);
    return path;
}

DesignBundle demo_bundle(const std::string& root) {
    fs::create_directories(root);
    write_file(root + "/adder.sv", "module adder;\nendmodule\n");
    write_file(root + "/carry.sv", "module carry;\nendmodule\n");
    write_file(root + "/adder_tb.sv", "module adder_tb;\nendmodule\n");

    DesignBundle bundle;
    bundle.design_files = {root + "/adder.sv", root + "/carry.sv"};
    bundle.testbench_file = root + "/adder_tb.sv";
    bundle.testcase_description = "drives all input pairs";
    bundle.top_module = "adder_top";
    return bundle;
}

AssertionSuite listing_suite() {
    return load_sva_file(FIXTURES_DIR "/published_listings.sva", "listings");
}

} // namespace

TEST_CASE("compose_workspace lays out rtl, tb, and the rendered bind unit") {
    const std::string root = fresh_dir();
    const DesignBundle bundle = demo_bundle(root);
    const AssertionSuite suite = listing_suite();
    const std::string ws = root + "/ws";

    CHECK(compose_workspace(bundle, suite, kBindTemplate, ws) == ws);

    CHECK(read_file(ws + "/rtl/adder.sv") == "module adder;\nendmodule\n");
    CHECK(read_file(ws + "/rtl/carry.sv") == "module carry;\nendmodule\n");
    CHECK(read_file(ws + "/tb/adder_tb.sv") == "module adder_tb;\nendmodule\n");

    const std::string bind_unit = read_file(ws + "/generated_assertions.sv");
    CHECK(bind_unit.find("bind adder_top chiraag_sva_unit chiraag_sva_unit_i ();") !=
          std::string::npos);
    CHECK(bind_unit.find("{{top}}") == std::string::npos);
    CHECK(bind_unit.find("{{assertions}}") == std::string::npos);
    for (const Assertion& a : suite.assertions) {
        CHECK(bind_unit.find(a.source_text) != std::string::npos);
    }

    // inputs are copied, never touched
    CHECK(read_file(root + "/adder.sv") == "module adder;\nendmodule\n");
    CHECK(read_file(root + "/adder_tb.sv") == "module adder_tb;\nendmodule\n");
}

TEST_CASE("an empty suite still produces a complete bind unit") {
    const std::string root = fresh_dir();
    const DesignBundle bundle = demo_bundle(root);
    AssertionSuite empty;
    empty.design_name = "adder";

    compose_workspace(bundle, empty, kBindTemplate, root + "/ws");
    const std::string bind_unit = read_file(root + "/ws/generated_assertions.sv");
    CHECK(bind_unit.find("module chiraag_sva_unit;") != std::string::npos);
    CHECK(bind_unit.find("property") == std::string::npos);
}

TEST_CASE("workspace composition failure modes") {
    const std::string root = fresh_dir();
    DesignBundle bundle = demo_bundle(root);

    SUBCASE("a missing bind template is its own error") {
        CHECK_THROWS_AS(
            compose_workspace(bundle, listing_suite(), root + "/absent.tmpl", root + "/ws"),
            BindTemplateMissing);
    }

    SUBCASE("an unreadable design file reports its path") {
        bundle.design_files.push_back(root + "/ghost.sv");
        try {
            compose_workspace(bundle, listing_suite(), kBindTemplate, root + "/ws");
            FAIL_CHECK("expected IoFailure");
        } catch (const IoFailure& e) {
            CHECK(e.path == root + "/ghost.sv");
        }
    }

    SUBCASE("an existing workspace is never overwritten") {
        fs::create_directories(root + "/ws");
        CHECK_THROWS_AS(compose_workspace(bundle, listing_suite(), kBindTemplate, root + "/ws"),
                        IoFailure);
    }
}

TEST_CASE("the external adapter captures both phases with separators") {
    const ExternalAdapter adapter({"/bin/echo", "compiling", "{{top}}"},
                                  {"/bin/echo", "running in", "{{workspace}}"});
    CHECK(adapter.identity() == "external");

    const std::string ws = fresh_dir();
    fs::create_directories(ws);
    const SimulationLog log = adapter.run(ws, "adder_top", kTimeout, 0);

    CHECK(log.exit_code == 0);
    CHECK(log.raw_text == "### PHASE: compile\ncompiling adder_top\n"
                          "### PHASE: run\nrunning in " + ws + "\n");
}

TEST_CASE("an empty compile command skips straight to the run phase") {
    const ExternalAdapter adapter({}, {"/bin/echo", "run only"});
    const std::string ws = fresh_dir();
    fs::create_directories(ws);
    const SimulationLog log = adapter.run(ws, "top", kTimeout, 0);
    CHECK(log.exit_code == 0);
    CHECK(log.raw_text == "### PHASE: run\nrun only\n");
}

TEST_CASE("an empty run command is a configuration error") {
    CHECK_THROWS_AS(ExternalAdapter({"/bin/echo", "x"}, {}), ConfigError);
}

TEST_CASE("a silent nonzero exit is captured as-is") {
    const ExternalAdapter adapter({}, {"/bin/false"});
    const std::string ws = fresh_dir();
    fs::create_directories(ws);
    const SimulationLog log = adapter.run(ws, "top", kTimeout, 0);
    CHECK(log.exit_code == 1);
    CHECK(log.raw_text.empty());
}

TEST_CASE("a failing compile phase short-circuits the run phase") {
    const ExternalAdapter adapter({"/bin/sh", "-c", "echo compile broke >&2; exit 3"},
                                  {"/bin/echo", "must not run"});
    const std::string ws = fresh_dir();
    fs::create_directories(ws);
    const SimulationLog log = adapter.run(ws, "top", kTimeout, 0);
    CHECK(log.exit_code == 3);
    CHECK(log.raw_text.find("compile broke") != std::string::npos); // stderr captured
    CHECK(log.raw_text.find("must not run") == std::string::npos);
    CHECK(log.raw_text.find("### PHASE: run") == std::string::npos);
}

TEST_CASE("a hung simulator is terminated and reported with partial output") {
    const ExternalAdapter adapter({}, {"/bin/sh", "-c", "echo partial; sleep 30"});
    const std::string ws = fresh_dir();
    fs::create_directories(ws);

    const auto start = std::chrono::steady_clock::now();
    try {
        adapter.run(ws, "top", std::chrono::milliseconds(300), 0);
        FAIL_CHECK("expected SimulationTimeout");
    } catch (const SimulationTimeout& e) {
        CHECK(std::string(e.what()).find("timed out during run") != std::string::npos);
        CHECK(e.partial_output.find("partial") != std::string::npos);
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;
    CHECK(std::chrono::duration_cast<std::chrono::seconds>(elapsed).count() < 4);
}

TEST_CASE("a missing simulator binary has a dedicated error") {
    const ExternalAdapter adapter({}, {"/no/such/simulator", "arg"});
    const std::string ws = fresh_dir();
    fs::create_directories(ws);
    try {
        adapter.run(ws, "top", kTimeout, 0);
        FAIL_CHECK("expected SimulatorNotFound");
    } catch (const SimulatorNotFound& e) {
        CHECK(std::string(e.what()).find("/no/such/simulator") != std::string::npos);
    }
}

TEST_CASE("a crash without any output is surfaced, not mistaken for a log") {
    const ExternalAdapter adapter({}, {"/bin/sh", "-c", "kill -SEGV $$"});
    const std::string ws = fresh_dir();
    fs::create_directories(ws);
    CHECK_THROWS_AS(adapter.run(ws, "top", kTimeout, 0), CrashWithoutOutput);
}

TEST_CASE("a crash that did produce output keeps the log and the signal exit code") {
    const ExternalAdapter adapter({}, {"/bin/sh", "-c", "echo dying; kill -SEGV $$"});
    const std::string ws = fresh_dir();
    fs::create_directories(ws);
    const SimulationLog log = adapter.run(ws, "top", kTimeout, 0);
    CHECK(log.exit_code == 128 + 11);
    CHECK(log.raw_text.find("dying") != std::string::npos);
}

TEST_CASE("the replay adapter returns the canned iteration byte for byte") {
    const ReplayAdapter adapter(kReplayDir);
    CHECK(adapter.identity() == "replay");

    const std::string ws = fresh_dir();
    fs::create_directories(ws);

    const SimulationLog third = adapter.run(ws, "rv_timer", kTimeout, 3);
    CHECK(third.raw_text == read_file(std::string(kReplayDir) + "/iter3.log"));
    CHECK(third.exit_code == 1); // from the iter3.exit sidecar

    const SimulationLog last = adapter.run(ws, "rv_timer", kTimeout, 11);
    CHECK(last.raw_text == read_file(std::string(kReplayDir) + "/iter11.log"));
    CHECK(last.exit_code == 0); // no sidecar: clean exit

    CHECK_THROWS_AS(adapter.run(ws, "rv_timer", kTimeout, 99), IoFailure);
}

TEST_CASE("a non-integer exit sidecar is a configuration error") {
    const std::string dir = fresh_dir();
    fs::create_directories(dir);
    write_file(dir + "/iter0.log", "fine\n");
    write_file(dir + "/iter0.exit", "not a number\n");
    const ReplayAdapter adapter(dir);
    CHECK_THROWS_AS(adapter.run(dir, "top", kTimeout, 0), ConfigError);
}

TEST_CASE("run_simulation persists the captured log next to the workspace") {
    const std::string ws = fresh_dir();
    fs::create_directories(ws);
    const ReplayAdapter adapter(kReplayDir);

    const SimulationLog log = run_simulation(ws, adapter, "rv_timer", kTimeout, 11);
    CHECK(read_file(ws + "/sim.log") == log.raw_text);
    CHECK(log.sim_time_reported.has_value() == false); // filled in by triage, not here
}

TEST_CASE("run_simulation persists partial output even when the simulator hangs") {
    const std::string ws = fresh_dir();
    fs::create_directories(ws);
    const ExternalAdapter adapter({}, {"/bin/sh", "-c", "echo got this far; sleep 30"});

    CHECK_THROWS_AS(run_simulation(ws, adapter, "top", std::chrono::milliseconds(300), 0),
                    SimulationTimeout);
    CHECK(read_file(ws + "/sim.log").find("got this far") != std::string::npos);
}

TEST_CASE("report_sim_time reads the final reported time through the pack") {
    const PatternPack pack = load_pack(DATA_DIR "/packs/generic.pack.json");

    SimulationLog log;
    log.raw_text = read_file(std::string(kReplayDir) + "/iter11.log");
    const auto time = report_sim_time(log, pack);
    REQUIRE(time.has_value());
    CHECK(time->to_string() == "80ns");

    SimulationLog silent;
    silent.raw_text = "no time here\n";
    CHECK_FALSE(report_sim_time(silent, pack).has_value());
}
