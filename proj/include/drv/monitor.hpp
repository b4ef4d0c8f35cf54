#pragma once

// Monitor programs in the generic loop shape: pick, a pre-exchange block,
// send, receive, a post-exchange block and a report block. Each block is a
// bounded script of requests the simulator executes one step at a time.

#include "drv/execution.hpp"
#include "drv/shared_memory.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace drv
{
    enum class Block : std::uint8_t
    {
        Pre,
        Post,
        Report,
    };
    std::string_view to_string(Block b) noexcept;

    struct Request
    {
        enum class Kind : std::uint8_t
        {
            Local,
            Write,
            Read,
            Snapshot,
            Report,
        };
        Kind kind = Kind::Local;
        std::string target; // register for Write/Read, array for Snapshot
        Json value;         // Write
        Verdict verdict = Verdict::Yes;
        std::string detail; // Local: short description for the trace

        static Request local(std::string detail) { return {Kind::Local, {}, {}, Verdict::Yes, std::move(detail)}; }
        static Request write(std::string reg, Json v) { return {Kind::Write, std::move(reg), std::move(v), Verdict::Yes, {}}; }
        static Request read(std::string reg) { return {Kind::Read, std::move(reg), {}, Verdict::Yes, {}}; }
        static Request snapshot(std::string array) { return {Kind::Snapshot, std::move(array), {}, Verdict::Yes, {}}; }
        static Request report(Verdict v) { return {Kind::Report, {}, {}, v, {}}; }
    };

    // What a process knows about its current iteration.
    struct MonitorContext
    {
        int proc = 1;
        int n = 2;
        std::size_t iteration = 0;
        const std::string* v = nullptr;  // picked invocation
        const std::string* w = nullptr;  // response, once received
        const Json* view = nullptr;      // {"c": counts, "inv": payload lists}, timed only
    };

    class MonitorProgram
    {
    public:
        virtual ~MonitorProgram() = default;

        virtual std::string id() const = 0;
        virtual void declare(SharedMemory& memory, int n) const = 0;
        virtual Json initial_locals(int proc, int n) const = 0;

        // The request at position pc of the block, or nothing when the block
        // is over. The report block must end with a Report request.
        virtual std::optional<Request> next(Block block, std::size_t pc, const Json& locals,
                                            const MonitorContext& ctx) const = 0;

        // Applies the effect of the request just executed. `result` holds the
        // value read or snapshotted, null otherwise.
        virtual void absorb(Block block, std::size_t pc, Json& locals, const MonitorContext& ctx,
                            const Json& result) const = 0;

        virtual std::size_t step_bound(Block block, int n) const = 0;
        virtual bool requires_views() const { return false; }
    };
} // namespace drv
