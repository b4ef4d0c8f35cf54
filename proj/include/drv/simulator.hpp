#pragma once

// The deterministic step-level simulator.

#include "drv/adversary.hpp"
#include "drv/execution.hpp"
#include "drv/monitor.hpp"
#include "drv/schedule.hpp"

#include <memory>

namespace drv
{
    struct RunOptions
    {
        int n = 2;
        std::size_t horizon = 1000; // total steps
        std::uint64_t seed = 0;     // recorded in the trace header
    };

    // Runs `monitor` against `adversary` under `schedule` for at most
    // `horizon` steps. Throws WaitFreeViolation if a block overruns its
    // declared bound.
    Execution run(std::shared_ptr<const MonitorProgram> monitor, Adversary& adversary, const Schedule& schedule,
                  const RunOptions& options);

    // Re-runs the same monitor with the picks and responses of `e`, stepping
    // processes in the given order (one entry per step).
    Execution replay(const Execution& e, const std::vector<int>& order);

    // Moves step j right before step i (1-based, i < j). Legal when no step
    // in i..j-1 belongs to j's process or conflicts with j on shared memory.
    Execution swap_adjacent_events(const Execution& e, std::size_t i, std::size_t j);

    // Exchanges the adjacent step ranges [a, b) and [b, c) (1-based).
    Execution swap_blocks(const Execution& e, std::size_t a, std::size_t b, std::size_t c);
} // namespace drv
