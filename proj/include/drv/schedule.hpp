#pragma once

// Schedules choose which process takes the next step. Bursts run one
// process until it reaches a loop boundary, which is how atomic blocks and
// the constructions over words are expressed.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace drv
{
    struct Word;

    enum class Until : std::uint8_t
    {
        Step,     // exactly one step
        PreDone,  // next step would be the send
        Sent,     // invocation handed to the inner adversary
        Received, // response delivered to the monitor
        Reported, // verdict reported, back at the top of the loop
    };
    std::string_view to_string(Until u) noexcept;

    struct Burst
    {
        int proc = 1;
        Until until = Until::Step;
        friend bool operator==(const Burst&, const Burst&) = default;
    };

    enum class Policy : std::uint8_t
    {
        RoundRobin,     // one step per process in turn
        Random,         // uniformly random process per step
        RandomBurst,    // random process runs to a random boundary
        Tight,          // rounds: every process sends, then every process reports
        TightSequential,// each process sends then reports, in turn
        Explicit,       // a fixed process sequence, one step each
        Stop,           // no further steps
    };
    std::string_view to_string(Policy p) noexcept;
    Policy parse_policy(std::string_view name);

    struct Schedule
    {
        Policy policy = Policy::RoundRobin;
        std::uint64_t seed = 0;
        // Bursts executed first; then `policy` takes over.
        std::vector<Burst> script;
        // Step-level process sequence for Policy::Explicit.
        std::vector<int> sequence;
        // Crash injection: a process takes no steps once the run reaches
        // the given step count.
        std::map<int, std::size_t> crash_after;

        static Schedule round_robin() { return {Policy::RoundRobin, 0, {}, {}, {}}; }
        static Schedule random(std::uint64_t seed) { return {Policy::Random, seed, {}, {}, {}}; }
        static Schedule random_burst(std::uint64_t seed) { return {Policy::RandomBurst, seed, {}, {}, {}}; }
        static Schedule tight() { return {Policy::Tight, 0, {}, {}, {}}; }
        static Schedule tight_sequential() { return {Policy::TightSequential, 0, {}, {}, {}}; }
        static Schedule explicit_steps(std::vector<int> procs) { return {Policy::Explicit, 0, {}, std::move(procs), {}}; }
        static Schedule scripted(std::vector<Burst> bursts, Policy tail = Policy::Stop)
        {
            return {tail, 0, std::move(bursts), {}, {}};
        }
    };

    // The sequential construction over a word: every invocation runs its
    // process to the send, every response runs it through its report.
    std::vector<Burst> bursts_from_word(const Word& word);
    Schedule from_word(const Word& word);

    // `rounds` rounds in which all processes send and then all report.
    Schedule tight_schedule(int n, std::size_t rounds);
} // namespace drv
