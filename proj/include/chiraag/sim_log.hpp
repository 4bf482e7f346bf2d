#pragma once

#include <chrono>
#include <optional>
#include <string>

namespace chiraag {

// Final simulation time as reported by the simulator itself (e.g. the value
// printed by $finish). Kept as the matched strings so reports can reproduce
// the tool's own notation exactly.
struct SimTime {
    std::string value;
    std::string unit;

    bool operator==(const SimTime&) const = default;

    std::string to_string() const { return value + unit; }
};

// Everything captured from one simulator invocation. raw_text is the
// interleaved stdout+stderr stream exactly as emitted, unmodified.
struct SimulationLog {
    std::string raw_text;
    int exit_code = 0;
    std::chrono::milliseconds wall_time{0};
    std::optional<SimTime> sim_time_reported;
};

} // namespace chiraag
