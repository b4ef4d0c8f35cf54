#pragma once

// Concrete monitor programs and the id-based factory used by scenarios and
// the command line.
//
// Ids:
//   trivial_yes                      reports YES every iteration
//   pattern:<p>:<mode>:<k>           fixture; process p reports NO on
//                                    every k-th iteration (every), at
//                                    iteration k only (once), before
//                                    iteration k (until), or never (yes)
//   wec                              weak decider for the weak eventual counter
//   sec                              predictive weak decider for the strong one
//   lin:<register|ledger|counter>    predictive linearizability monitor
//   ledger_probe                     announce-and-compare ledger candidate
//   stabilized:<sd|wad|wod>:<inner>  stabilization of another monitor

#include "drv/monitor.hpp"
#include "drv/sequential_spec.hpp"
#include "drv/sketch.hpp"

#include <memory>
#include <string>

namespace drv
{
    using MonitorPtr = std::shared_ptr<const MonitorProgram>;

    enum class Stabilization : std::uint8_t
    {
        SD,
        WAD,
        WOD,
    };
    std::string_view to_string(Stabilization s) noexcept;

    enum class PatternMode : std::uint8_t
    {
        Every,
        Once,
        Until,
        Yes,
    };

    MonitorPtr trivial_yes();
    MonitorPtr pattern_monitor(int proc, PatternMode mode, std::size_t k);
    MonitorPtr wec_monitor();
    MonitorPtr sec_monitor();
    MonitorPtr lin_monitor(const SequentialSpec& spec, std::size_t cap = 4096);
    MonitorPtr ledger_probe();
    MonitorPtr stabilize(Stabilization kind, MonitorPtr inner);
    inline MonitorPtr stabilize_sd(MonitorPtr inner) { return stabilize(Stabilization::SD, std::move(inner)); }
    inline MonitorPtr stabilize_wad(MonitorPtr inner) { return stabilize(Stabilization::WAD, std::move(inner)); }
    inline MonitorPtr stabilize_wod(MonitorPtr inner) { return stabilize(Stabilization::WOD, std::move(inner)); }

    // Throws ConfigError for an unknown id.
    MonitorPtr make_monitor(const std::string& id);

    // Register contents written by the triple-collecting monitors:
    //   {"t": [{"k": iteration, "v": inv, "w": resp, "c": view counts}, ...],
    //    "inv": per-process invocation payload lists of the latest view}
    // The history such a monitor builds from one snapshot of its array.
    // Operation keys are k * n + (p - 1).
    Sketch history_from_triples(const Json& snapshot, int n);
} // namespace drv
