#pragma once

// Black-box adversaries: they choose each process's next invocation and
// answer it. Timing is owned by the schedule, not by the adversary.

#include "drv/execution.hpp"
#include "drv/sequential_spec.hpp"
#include "drv/word.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace drv
{
    class Adversary
    {
    public:
        virtual ~Adversary() = default;

        // Invocation for the k-th operation (0-based) of proc.
        virtual std::string pick(int proc, std::size_t k) = 0;
        // The invocation reaches the black box.
        virtual void on_send(int proc, std::size_t k, const std::string& invocation);
        // The black box answers the invocation.
        virtual std::string respond(int proc, std::size_t k, const std::string& invocation) = 0;
        // Timed adversaries run the announce/snapshot wrapper around the box.
        virtual bool timed() const { return false; }
        virtual std::string describe() const = 0;
    };

    struct ScriptedOp
    {
        std::string inv;
        std::string resp;
        friend bool operator==(const ScriptedOp&, const ScriptedOp&) = default;
    };

    using TailGenerator = std::function<ScriptedOp(int proc, std::size_t k)>;

    struct AdversaryScript
    {
        int n = 2;
        // ops[p-1]: the scripted operations of process p, in order.
        std::vector<std::vector<ScriptedOp>> ops;
        // Operations past the scripted ones; absent means the script ends.
        TailGenerator tail;

        // Per-process operations of a word; a pending invocation gets an
        // empty planned response.
        static AdversaryScript from_word(const Word& word);
        // Invocations and responses must belong to the object's alphabet.
        void validate(const SequentialSpec& spec) const;
        std::optional<ScriptedOp> op(int proc, std::size_t k) const;
    };

    class ScriptedAdversary : public Adversary
    {
    public:
        explicit ScriptedAdversary(AdversaryScript script);
        std::string pick(int proc, std::size_t k) override;
        void on_send(int proc, std::size_t k, const std::string& invocation) override;
        std::string respond(int proc, std::size_t k, const std::string& invocation) override;
        std::string describe() const override { return "scripted"; }

    private:
        ScriptedOp require(int proc, std::size_t k) const;
        AdversaryScript script_;
    };

    struct ObjectMode
    {
        bool faulty = false;
        std::size_t fault_after = 0; // correct responses before faults start
        static ObjectMode faithful() { return {}; }
        static ObjectMode faulty_after(std::size_t k) { return {true, k}; }
    };

    struct ObjectOptions
    {
        // Counter only: total incs the picker issues before switching to reads.
        std::optional<std::size_t> inc_budget;
        // Probability weight of the observing operation (read/get) in picks.
        double observe_ratio = 0.5;
    };

    // A concrete black box over a sequential object. Faithful mode applies
    // each operation to the object when it answers it, so its histories are
    // linearizable. Faulty mode starts answering every read/get wrongly once
    // `fault_after` correct responses have been given.
    class ObjectAdversary : public Adversary
    {
    public:
        ObjectAdversary(SequentialSpec spec, ObjectMode mode, std::uint64_t seed, ObjectOptions options = {});
        std::string pick(int proc, std::size_t k) override;
        std::string respond(int proc, std::size_t k, const std::string& invocation) override;
        std::string describe() const override;

        const std::string& state() const noexcept { return state_; }
        std::size_t faults() const noexcept { return faults_; }

    private:
        std::string wrong_response(const std::string& invocation);

        SequentialSpec spec_;
        ObjectMode mode_;
        ObjectOptions options_;
        std::mt19937_64 pick_rng_;
        std::mt19937_64 fault_rng_;
        std::string state_;
        std::size_t answered_ = 0;
        std::size_t faults_ = 0;
        std::size_t incs_picked_ = 0;
    };

    // The timed adversary: the same black box, with every interaction
    // wrapped in the announce, snapshot and view code. The simulator runs
    // the wrapper lines as steps of the calling process.
    class TimedAdversary : public Adversary
    {
    public:
        explicit TimedAdversary(std::unique_ptr<Adversary> inner);
        std::string pick(int proc, std::size_t k) override { return inner_->pick(proc, k); }
        void on_send(int proc, std::size_t k, const std::string& inv) override { inner_->on_send(proc, k, inv); }
        std::string respond(int proc, std::size_t k, const std::string& inv) override
        {
            return inner_->respond(proc, k, inv);
        }
        bool timed() const override { return true; }
        std::string describe() const override { return "timed(" + inner_->describe() + ")"; }
        Adversary& inner() { return *inner_; }

    private:
        std::unique_ptr<Adversary> inner_;
    };

    std::unique_ptr<Adversary> timed_wrap(std::unique_ptr<Adversary> inner);

    // Reproduces the picks and inner responses recorded in an execution, so
    // a reordering of its steps can be re-run. Asking for anything the
    // execution did not contain throws ScriptMismatch.
    class ReplayAdversary : public Adversary
    {
    public:
        explicit ReplayAdversary(const Execution& e);
        std::string pick(int proc, std::size_t k) override;
        std::string respond(int proc, std::size_t k, const std::string& invocation) override;
        bool timed() const override { return timed_; }
        std::string describe() const override { return "replay"; }

    private:
        bool timed_;
        std::map<OpTag, std::string> picks_;
        std::map<OpTag, std::string> responses_;
    };
} // namespace drv
