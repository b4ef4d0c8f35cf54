#include "drv/adversary.hpp"
#include "drv/errors.hpp"
#include "drv/monitors.hpp"
#include "drv/simulator.hpp"

#include <doctest.h>

using namespace drv;

namespace
{
    Execution run_with(MonitorPtr m, SequentialSpec spec, ObjectMode mode, bool timed, std::uint64_t seed,
                       std::size_t horizon, ObjectOptions options = {})
    {
        auto box = std::make_unique<ObjectAdversary>(spec, mode, seed, options);
        std::unique_ptr<Adversary> adv = timed ? timed_wrap(std::move(box)) : std::move(box);
        return run(std::move(m), *adv, Schedule::random(seed), {2, horizon, seed});
    }

    Execution plain(MonitorPtr m, std::size_t horizon = 400)
    {
        return run_with(std::move(m), SequentialSpec::register_object(), ObjectMode::faithful(), false, 1, horizon);
    }

    std::size_t nos(const Execution& e, int proc)
    {
        std::size_t c = 0;
        for (const auto& r : e.reports[static_cast<std::size_t>(proc - 1)])
        {
            c += r.verdict == Verdict::No;
        }
        return c;
    }

    // NOs stop in the first half of the run and every process ends on YES.
    bool settles(const Execution& e)
    {
        for (const auto& reports : e.reports)
        {
            if (reports.empty() || reports.back().verdict == Verdict::No)
            {
                return false;
            }
            for (const auto& r : reports)
            {
                if (r.verdict == Verdict::No && r.step > e.steps.size() / 2)
                {
                    return false;
                }
            }
        }
        return true;
    }

    // After its first NO, a process reports only NO.
    bool sticky(const Execution& e, int proc)
    {
        bool seen = false;
        for (const auto& r : e.reports[static_cast<std::size_t>(proc - 1)])
        {
            if (seen && r.verdict == Verdict::Yes)
            {
                return false;
            }
            seen = seen || r.verdict == Verdict::No;
        }
        return true;
    }
} // namespace

TEST_SUITE("monitors")
{
    TEST_CASE("factory ids")
    {
        for (std::string id : {"trivial_yes", "wec", "sec", "lin:register", "lin:ledger", "lin:counter", "ledger_probe",
                               "pattern:2:once:4", "stabilized:sd:wec", "stabilized:wad:stabilized:wod:trivial_yes"})
        {
            CHECK(make_monitor(id)->id() == id);
        }
        CHECK(make_monitor("lin:register")->requires_views());
        CHECK_FALSE(make_monitor("wec")->requires_views());
        for (std::string bad : {"", "lin:queue", "stabilized:sd", "stabilized:xx:wec", "pattern:1:often:2",
                                "pattern:1:every:0", "pattern:a:every:1"})
        {
            CHECK_THROWS_AS(make_monitor(bad), ConfigError);
        }
    }

    TEST_CASE("pattern fixtures")
    {
        auto e = plain(pattern_monitor(1, PatternMode::Every, 3));
        REQUIRE(e.reports[0].size() > 6);
        for (const auto& r : e.reports[0])
        {
            CHECK((r.verdict == Verdict::No) == (r.iteration % 3 == 0));
        }
        CHECK(nos(e, 2) == 0);

        auto until = plain(pattern_monitor(2, PatternMode::Until, 4));
        CHECK(nos(until, 2) == 4);
        CHECK(nos(plain(pattern_monitor(1, PatternMode::Yes, 0)), 1) == 0);
    }

    TEST_CASE("strong stabilization spreads a single NO")
    {
        auto e = plain(stabilize_sd(pattern_monitor(1, PatternMode::Once, 2)));
        CHECK(nos(e, 1) > 0);
        CHECK(nos(e, 2) > 0);
        CHECK(sticky(e, 1));
        CHECK(sticky(e, 2));
        CHECK(nos(plain(stabilize_sd(trivial_yes())), 1) == 0);
    }

    TEST_CASE("weak stabilizations")
    {
        // Finitely many inner NOs: the count stops growing, reports settle on YES.
        auto wad = plain(stabilize_wad(pattern_monitor(1, PatternMode::Until, 3)), 600);
        CHECK(nos(wad, 1) + nos(wad, 2) > 0);
        CHECK(wad.reports[0].back().verdict == Verdict::Yes);
        CHECK(wad.reports[1].back().verdict == Verdict::Yes);

        // Inner NO forever from one process: that counter keeps growing.
        auto grow = plain(stabilize_wad(pattern_monitor(1, PatternMode::Every, 1)), 600);
        CHECK(grow.reports[1].back().verdict == Verdict::No);

        // WOD answers YES while some process's counter stands still.
        auto wod = plain(stabilize_wod(pattern_monitor(1, PatternMode::Every, 1)), 600);
        CHECK(nos(wod, 2) == 0);
        CHECK(nos(plain(stabilize_wod(trivial_yes())), 1) == 0);
    }

    TEST_CASE("counter monitors")
    {
        ObjectOptions budget{5, 0.5};
        for (std::uint64_t seed = 1; seed <= 3; ++seed)
        {
            auto ok = run_with(wec_monitor(), SequentialSpec::counter(), ObjectMode::faithful(), false, seed, 600, budget);
            CHECK(settles(ok));
            auto strong =
                run_with(sec_monitor(), SequentialSpec::counter(), ObjectMode::faithful(), true, seed, 600, budget);
            CHECK(settles(strong));

            auto bad = run_with(wec_monitor(), SequentialSpec::counter(), ObjectMode::faulty_after(2), false, seed, 600,
                                budget);
            CHECK(nos(bad, 1) + nos(bad, 2) > 0);
        }
    }

    TEST_CASE("linearizability monitor")
    {
        for (std::uint64_t seed = 1; seed <= 3; ++seed)
        {
            auto ok = run_with(lin_monitor(SequentialSpec::register_object()), SequentialSpec::register_object(),
                               ObjectMode::faithful(), true, seed, 400);
            CHECK(nos(ok, 1) + nos(ok, 2) == 0);

            auto bad = run_with(lin_monitor(SequentialSpec::register_object()), SequentialSpec::register_object(),
                                ObjectMode::faulty_after(2), true, seed, 400);
            CHECK(nos(bad, 1) + nos(bad, 2) > 0);
            CHECK(sticky(bad, 1));
            CHECK(sticky(bad, 2));
        }
        // Views are required.
        CHECK_THROWS(plain(lin_monitor(SequentialSpec::register_object())));
    }

    TEST_CASE("ledger probe")
    {
        // Without overlap every announced record has been applied before a get.
        ObjectAdversary box(SequentialSpec::ledger(), ObjectMode::faithful(), 2);
        auto e = run(ledger_probe(), box, Schedule::tight_sequential(), {2, 400, 2});
        CHECK(nos(e, 1) + nos(e, 2) == 0);
        auto bad = run_with(ledger_probe(), SequentialSpec::ledger(), ObjectMode::faulty_after(1), false, 2, 400);
        CHECK(nos(bad, 1) + nos(bad, 2) > 0);
    }

    TEST_CASE("history from triples")
    {
        Json r1 = {{"t", Json::array({{{"k", 0}, {"v", "write:1"}, {"w", "ok"}, {"c", {1, 0}}}})},
                   {"inv", {{"write:1"}, Json::array()}}};
        Json r2 = {{"t", Json::array({{{"k", 0}, {"v", "read"}, {"w", "val:1"}, {"c", {1, 1}}}})},
                   {"inv", {{"write:1"}, {"read"}}}};
        auto s = history_from_triples(Json::array({r1, r2}), 2);
        CHECK(render(s.word) == "1<write:1 1>ok 2<read 2>val:1");
    }
}
