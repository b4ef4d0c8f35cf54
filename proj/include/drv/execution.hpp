#pragma once

// Executions recorded by the simulator: the step sequence, per-process local
// state traces, report sequences, and the text trace format.

#include "drv/shared_memory.hpp"
#include "drv/word.hpp"

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace drv
{
    class MonitorProgram;

    enum class Verdict : std::uint8_t
    {
        Yes,
        No,
    };
    std::string_view to_string(Verdict v) noexcept;

    enum class StepKind : std::uint8_t
    {
        Local,
        Write,
        Read,
        Snapshot,
        Send,
        Receive,
        Report,
    };
    std::string_view to_string(StepKind k) noexcept;
    std::optional<StepKind> parse_step_kind(std::string_view s) noexcept;

    // Position of a process in its loop. The At* phases are the timed
    // wrapper's lines between sending and receiving.
    enum class Phase : std::uint8_t
    {
        Pick,
        Pre,
        Send,
        At1,
        At2,
        At3,
        At4,
        At5,
        At6,
        Receive,
        Post,
        Report,
    };
    std::string_view to_string(Phase p) noexcept;

    // A process-local operation identifier: the k-th operation (0-based) of
    // a process. Views are sets of tags, so they never depend on global
    // positions a process cannot observe.
    struct OpTag
    {
        int proc = 1;
        std::size_t k = 0;
        friend auto operator<=>(const OpTag&, const OpTag&) = default;
    };

    // Per-process prefix lengths: the view containing ops (p, 0..counts[p-1]-1).
    using ViewCounts = std::vector<std::size_t>;

    struct StepRecord
    {
        std::size_t index = 0; // 1-based
        int proc = 1;
        StepKind kind = StepKind::Local;
        Phase phase = Phase::Pick;
        std::size_t iteration = 0;
        std::string detail;
        std::string target;              // register or array for shared steps
        std::optional<Symbol> symbol;    // SEND/RECEIVE symbol of x(E)
        std::optional<Verdict> verdict;  // REPORT
        std::optional<std::string> payload; // picked invocation or inner response
        std::optional<ViewCounts> view;  // timed RECEIVE
        OpTag tag;
    };

    struct Report
    {
        std::size_t step = 0; // 1-based step index
        std::size_t iteration = 0;
        Verdict verdict = Verdict::Yes;
    };

    struct Execution
    {
        int n = 2;
        std::uint64_t seed = 0;
        std::size_t horizon = 0;
        bool timed = false;
        std::shared_ptr<const MonitorProgram> monitor;
        std::vector<StepRecord> steps;
        // local_traces[p-1]: canonical serialized local states of p, starting
        // with its initial state, one entry per own step that changed it.
        std::vector<std::vector<std::string>> local_traces;
        std::vector<std::vector<Report>> reports;
        std::map<OpTag, Uid> tag_uid; // invocation uid in x(E)
        SharedMemory memory;          // final shared memory

        std::size_t step_count(int proc) const;
        std::vector<int> process_sequence() const;
    };

    Word input_word(const Execution& e);
    const std::vector<std::string>& local_trace(const Execution& e, int proc);

    struct Indistinguishability
    {
        std::vector<bool> per_process;
        bool global = true;
    };
    Indistinguishability indistinguishable(const Execution& a, const Execution& b);
    bool indistinguishable(const Execution& a, const Execution& b, int proc);

    // Every process takes at least floor(T / (c n)) steps.
    bool is_fair(const Execution& e, std::size_t c = 2);

    // View of a timed RECEIVE, as invocation uids of x(E), ascending.
    std::vector<Uid> view_uids(const Execution& e, const ViewCounts& view);

    void write_trace(std::ostream& out, const Execution& e);
    std::string format_trace(const Execution& e);
    void write_trace_file(const std::string& path, const Execution& e);

    struct TraceReport
    {
        bool ok = true;
        std::size_t line = 0;
        std::string reason;
        int n = 0;
        std::size_t steps = 0;
    };
    TraceReport validate_trace(std::istream& in);
    TraceReport validate_trace_file(const std::string& path);
} // namespace drv
