#include "drv/adversary.hpp"
#include "drv/errors.hpp"
#include "drv/monitors.hpp"
#include "drv/oracles.hpp"
#include "drv/simulator.hpp"
#include "support/words.hpp"

#include <doctest.h>

#include <sstream>

using namespace drv;
using testing_words::W;

namespace
{
    // Reports YES after one write of its iteration number; declares a
    // report bound it overruns on purpose when `liar` is set.
    class WriterMonitor : public MonitorProgram
    {
    public:
        explicit WriterMonitor(bool liar) : liar_(liar) {}
        std::string id() const override { return "writer"; }
        void declare(SharedMemory& memory, int n) const override { memory.declare_array("M", n, 0); }
        Json initial_locals(int, int) const override { return Json::object(); }
        std::optional<Request> next(Block block, std::size_t pc, const Json&, const MonitorContext& ctx) const override
        {
            if (block != Block::Report)
            {
                return std::nullopt;
            }
            if (pc == 0)
            {
                return Request::write(SharedMemory::entry("M", ctx.proc), static_cast<int>(ctx.iteration));
            }
            if (pc == 1)
            {
                return Request::snapshot("M");
            }
            return Request::report(Verdict::Yes);
        }
        void absorb(Block, std::size_t, Json&, const MonitorContext&, const Json&) const override {}
        std::size_t step_bound(Block block, int) const override
        {
            return block == Block::Report ? (liar_ ? 2 : 3) : 0;
        }

    private:
        bool liar_;
    };

    Execution faithful_run(MonitorPtr m, const Schedule& s, std::size_t horizon, std::uint64_t seed = 1)
    {
        ObjectAdversary adv(SequentialSpec::register_object(), ObjectMode::faithful(), seed);
        return run(std::move(m), adv, s, {2, horizon, seed});
    }
} // namespace

TEST_SUITE("simulator")
{
    TEST_CASE("shared memory")
    {
        SharedMemory m;
        m.declare_register("r", 0);
        m.declare_array("A", 3, Json::array());
        CHECK(m.has("r"));
        CHECK(m.is_array("A"));
        CHECK(m.array_size("A") == 3);
        m.write("r", 7);
        m.write(SharedMemory::entry("A", 2), "x");
        CHECK(m.read("r") == 7);
        auto snap = m.snapshot("A");
        REQUIRE(snap.size() == 3);
        CHECK(snap[1] == "x");
        CHECK(snap[0] == Json::array());
        CHECK_THROWS(m.read("nope"));

        auto w2 = parse_access(SharedMemory::entry("A", 2), true, false);
        auto w3 = parse_access(SharedMemory::entry("A", 3), true, false);
        auto snapshot = parse_access("A", false, true);
        auto rr = parse_access("r", false, false);
        CHECK_FALSE(conflicts(w2, w3));
        CHECK(conflicts(w2, snapshot));
        CHECK_FALSE(conflicts(snapshot, snapshot));
        CHECK_FALSE(conflicts(rr, rr));
        CHECK(conflicts(rr, parse_access("r", true, false)));
    }

    TEST_CASE("runs are deterministic and well formed")
    {
        auto a = faithful_run(trivial_yes(), Schedule::random(5), 300);
        auto b = faithful_run(trivial_yes(), Schedule::random(5), 300);
        CHECK(a.steps.size() == 300);
        CHECK(format_trace(a) == format_trace(b));
        CHECK(validate_word(input_word(a)).ok);
        CHECK(a.step_count(1) + a.step_count(2) == 300);
        CHECK(a.reports[0].size() + a.reports[1].size() > 0);

        std::istringstream in(format_trace(a));
        auto v = validate_trace(in);
        CHECK(v.ok);
        CHECK(v.steps == 300);
        CHECK(v.n == 2);

        std::istringstream broken(format_trace(a) + "garbage line\n");
        auto bad = validate_trace(broken);
        CHECK_FALSE(bad.ok);
        CHECK(bad.line > 0);
    }

    TEST_CASE("faithful object histories are linearizable")
    {
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
        {
            auto e = faithful_run(trivial_yes(), Schedule::random(seed), 200, seed);
            CHECK(lin_check(input_word(e), SequentialSpec::register_object(), 100000).status != Status::Out);
        }
    }

    TEST_CASE("bursts stop at loop boundaries")
    {
        auto e = faithful_run(trivial_yes(), Schedule::scripted({{1, Until::Sent}}), 100);
        REQUIRE_FALSE(e.steps.empty());
        CHECK(e.steps.back().kind == StepKind::Send);
        auto x = input_word(e);
        REQUIRE(x.size() == 1);
        CHECK(x[0].kind == Kind::Inv);

        auto full = faithful_run(trivial_yes(),
                                 Schedule::scripted({{1, Until::PreDone}, {1, Until::Reported}, {2, Until::Step}}), 100);
        CHECK(full.steps.back().proc == 2);
        CHECK(full.reports[0].size() == 1);
        CHECK(input_word(full).size() == 2);

        // A process already at its boundary takes no steps.
        auto idle = faithful_run(trivial_yes(), Schedule::scripted({{1, Until::Reported}}), 100);
        CHECK(idle.steps.empty());
    }

    TEST_CASE("the sequential construction reproduces its word")
    {
        auto word = W("1<write:1 2<read 1>ok 2>val:1 2<write:2 2>ok");
        AdversaryScript script = AdversaryScript::from_word(word);
        ScriptedAdversary adv(script);
        auto e = run(trivial_yes(), adv, from_word(word), {2, 1000, 0});
        CHECK(input_word(e) == word);

        // Running past the script is a mismatch.
        ScriptedAdversary short_adv(script);
        CHECK_THROWS_AS(run(trivial_yes(), short_adv, Schedule::round_robin(), {2, 1000, 0}), ScriptMismatch);
    }

    TEST_CASE("tight rounds")
    {
        auto e = faithful_run(trivial_yes(), tight_schedule(2, 3), 1000);
        auto x = input_word(e);
        REQUIRE(x.size() == 12);
        for (std::size_t r = 0; r < 3; ++r)
        {
            CHECK(x[4 * r].kind == Kind::Inv);
            CHECK(x[4 * r + 1].kind == Kind::Inv);
            CHECK(x[4 * r + 2].kind == Kind::Resp);
            CHECK(x[4 * r + 3].kind == Kind::Resp);
        }
    }

    TEST_CASE("wait-free bounds are enforced")
    {
        auto ok = faithful_run(std::make_shared<WriterMonitor>(false), Schedule::round_robin(), 120);
        CHECK(ok.reports[0].size() > 3);
        CHECK_THROWS_AS(faithful_run(std::make_shared<WriterMonitor>(true), Schedule::round_robin(), 120),
                        WaitFreeViolation);
    }

    TEST_CASE("crashed processes stop")
    {
        auto s = Schedule::round_robin();
        s.crash_after[2] = 10;
        auto e = faithful_run(trivial_yes(), s, 200);
        CHECK(e.steps.size() == 200);
        CHECK(e.step_count(2) <= 10);
        CHECK_FALSE(is_fair(e));
        CHECK(is_fair(faithful_run(trivial_yes(), Schedule::round_robin(), 200)));
    }

    TEST_CASE("reordering independent steps")
    {
        auto e = faithful_run(std::make_shared<WriterMonitor>(false), Schedule::round_robin(), 40);
        auto order = e.process_sequence();
        auto again = replay(e, order);
        CHECK(format_trace(again) == format_trace(e));

        // Find an adjacent pair of different processes with no shared conflict.
        bool swapped = false;
        for (std::size_t i = 1; i < e.steps.size() && !swapped; ++i)
        {
            const auto& a = e.steps[i - 1];
            const auto& b = e.steps[i];
            if (a.proc == b.proc || a.kind == StepKind::Send || b.kind == StepKind::Send ||
                a.kind == StepKind::Receive || b.kind == StepKind::Receive)
            {
                continue;
            }
            bool shared = a.kind == StepKind::Write || a.kind == StepKind::Snapshot || b.kind == StepKind::Write ||
                          b.kind == StepKind::Snapshot;
            if (shared)
            {
                continue;
            }
            auto f = swap_adjacent_events(e, i, i + 1);
            CHECK(f.steps[i - 1].proc == b.proc);
            CHECK(indistinguishable(e, f).global);
            swapped = true;
        }
        CHECK(swapped);

        // A write followed by another process's snapshot of the same array cannot move.
        for (std::size_t i = 1; i < e.steps.size(); ++i)
        {
            const auto& a = e.steps[i - 1];
            const auto& b = e.steps[i];
            if (a.proc != b.proc && a.kind == StepKind::Write && b.kind == StepKind::Snapshot)
            {
                CHECK_THROWS_AS(swap_adjacent_events(e, i, i + 1), IllegalReorder);
                break;
            }
        }
        // Two steps of one process never exchange.
        CHECK_THROWS_AS(swap_adjacent_events(e, 1, 3), IllegalReorder);
    }

    TEST_CASE("replay adversary refuses unseen operations")
    {
        auto e = faithful_run(trivial_yes(), Schedule::round_robin(), 30);
        ReplayAdversary r(e);
        CHECK_NOTHROW(r.pick(1, 0));
        CHECK_THROWS_AS(r.pick(1, 999), ScriptMismatch);
    }

    TEST_CASE("timed wrapper records views")
    {
        ObjectAdversary box(SequentialSpec::register_object(), ObjectMode::faithful(), 3);
        auto timed = timed_wrap(std::make_unique<ObjectAdversary>(box));
        auto e = run(trivial_yes(), *timed, Schedule::random(3), {2, 400, 3});
        CHECK(e.timed);
        std::size_t views = 0;
        for (const auto& s : e.steps)
        {
            if (s.kind == StepKind::Receive)
            {
                REQUIRE(s.view);
                ++views;
                // A view contains the operation's own invocation.
                auto uids = view_uids(e, *s.view);
                CHECK(std::find(uids.begin(), uids.end(), e.tag_uid.at(s.tag)) != uids.end());
            }
        }
        CHECK(views > 5);
    }

    TEST_CASE("schedule names")
    {
        CHECK(parse_policy(to_string(Policy::RandomBurst)) == Policy::RandomBurst);
        CHECK_THROWS_AS(parse_policy("sideways"), ConfigError);
        CHECK(bursts_from_word(W("1<read 1>val:0")).size() == 2);
    }
}
