#include "drv/adversary.hpp"
#include "drv/analysis.hpp"
#include "drv/errors.hpp"
#include "drv/monitors.hpp"
#include "drv/simulator.hpp"
#include "support/words.hpp"

#include <doctest.h>

using namespace drv;
using testing_words::W;

namespace
{
    Execution run_monitor(MonitorPtr m, std::size_t horizon = 600, bool timed = false)
    {
        auto box = std::make_unique<ObjectAdversary>(SequentialSpec::register_object(), ObjectMode::faithful(), 4);
        std::unique_ptr<Adversary> adv = timed ? timed_wrap(std::move(box)) : std::move(box);
        return run(std::move(m), *adv, Schedule::round_robin(), {2, horizon, 4});
    }

    // Same operations per process, ignoring uids.
    bool same_projection(const Word& a, const Word& b, int p)
    {
        auto x = project(a, p);
        auto y = project(b, p);
        if (x.size() != y.size())
        {
            return false;
        }
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            if (x[i].kind != y[i].kind || x[i].payload != y[i].payload)
            {
                return false;
            }
        }
        return true;
    }
} // namespace

TEST_SUITE("analysis")
{
    TEST_CASE("window statistics")
    {
        auto e = run_monitor(pattern_monitor(1, PatternMode::Until, 3), 600);
        auto s = verdict_stats(e, 50);
        CHECK(s.steps == 600);
        REQUIRE(s.procs.size() == 2);
        // 12 whole windows, the later 6 are tracked.
        CHECK(s.procs[0].window_no.size() == 6);
        CHECK(s.procs[0].no == 3);
        CHECK(s.procs[0].last_no.has_value());
        CHECK_FALSE(s.procs[0].final_no());
        CHECK(s.procs[1].no == 0);
        CHECK(s.total_no() == 3);

        auto odd = verdict_stats(e, 70); // 8 windows -> 4
        CHECK(odd.procs[0].window_no.size() == 4);
        auto seven = verdict_stats(e, 85); // 7 windows -> 4
        CHECK(seven.procs[0].window_no.size() == 4);
    }

    TEST_CASE("strong decidability")
    {
        auto yes = run_monitor(trivial_yes());
        CHECK(eval_sd(yes, Membership::In).pass);
        CHECK_FALSE(eval_sd(yes, Membership::Out).pass);

        auto one = run_monitor(pattern_monitor(2, PatternMode::Once, 5));
        CHECK_FALSE(eval_sd(one, Membership::In).pass);
        CHECK(eval_sd(one, Membership::Out).pass);
        CHECK(eval_sd(one, Membership::Out).no_counts == std::vector<std::size_t>{0, 1});
    }

    TEST_CASE("weak decidability")
    {
        auto early = run_monitor(pattern_monitor(1, PatternMode::Until, 3));
        CHECK(eval_wd(early, Membership::In, 50).pass);
        // Only one process complains, so OUT is not witnessed.
        auto always1 = run_monitor(pattern_monitor(1, PatternMode::Every, 1));
        CHECK_FALSE(eval_wd(always1, Membership::Out, 50).pass);
        CHECK_FALSE(eval_wd(always1, Membership::In, 50).pass);

        // Stabilized so that both processes report NO from some point on.
        auto both = run_monitor(stabilize_sd(pattern_monitor(1, PatternMode::Once, 0)));
        auto r = eval_wd(both, Membership::Out, 50);
        CHECK(r.pass);
        CHECK_FALSE(r.branch.empty());
        CHECK_FALSE(format(r).empty());

        CHECK_THROWS_AS(eval_wd(both, Membership::In, 201), ConfigError);
    }

    TEST_CASE("predictive notions fall back to the plain clauses")
    {
        auto yes = run_monitor(trivial_yes(), 600, true);
        CHECK(eval_psd(yes, Membership::In, LanguageId::LIN_REG).pass);
        CHECK(eval_pwd(yes, Membership::In, 50, LanguageId::LIN_REG).pass);
        CHECK_FALSE(eval_psd(yes, Membership::Out, LanguageId::LIN_REG).pass);

        // A faithful box gives a linearizable sketch, so a NO is not excused.
        auto no = run_monitor(pattern_monitor(1, PatternMode::Once, 2), 600, true);
        CHECK_FALSE(eval_psd(no, Membership::In, LanguageId::LIN_REG).pass);
    }

    TEST_CASE("notion names")
    {
        for (auto n : {Notion::SD, Notion::WD, Notion::PSD, Notion::PWD})
        {
            CHECK(parse_notion(to_string(n)) == n);
        }
        CHECK_THROWS_AS(parse_notion("XD"), ConfigError);
    }

    TEST_CASE("scripted continuation")
    {
        auto alpha = W("1<write:1 1>ok 2<write:2 2>ok");
        auto beta = scripted_beta(LanguageId::LIN_REG, alpha, 2);
        CHECK(render(beta) == "1<read 1>val:2 2<read 2>val:2 1<read 1>val:2 2<read 2>val:2");
        CHECK(prefix_membership(LanguageId::LIN_REG, alpha, beta) == Membership::In);
        CHECK(prefix_membership(LanguageId::LIN_REG, W("2<write:2 2>ok 1<write:1 1>ok"), beta) == Membership::Out);
    }

    TEST_CASE("real-time obliviousness")
    {
        for (auto id : {LanguageId::LIN_REG, LanguageId::SC_REG, LanguageId::LIN_LED, LanguageId::SC_LED,
                        LanguageId::EC_LED, LanguageId::SEC_COUNT})
        {
            auto r = rt_oblivious_check(id, 6);
            CHECK_FALSE(r.oblivious);
            REQUIRE(r.witness);
            const auto& w = *r.witness;
            // alpha' is a shuffle of alpha: same projections.
            for (int p = 1; p <= 2; ++p)
            {
                CHECK(same_projection(w.alpha, w.alpha_prime, p));
            }
            CHECK(prefix_membership(id, w.alpha, w.beta) == Membership::In);
            CHECK(prefix_membership(id, w.alpha_prime, w.beta) == Membership::Out);
        }
        auto wec = rt_oblivious_check(LanguageId::WEC_COUNT, 6);
        CHECK(wec.oblivious);
        CHECK_FALSE(wec.witness);
        CHECK(wec.prefixes > 0);
        CHECK_THROWS_AS(rt_oblivious_check(LanguageId::LIN_REG, 13), ConfigError);
    }

    TEST_CASE("ledger shuffle example")
    {
        for (int n : {2, 3, 4})
        {
            auto ex = ledger_shuffle_example(n);
            CHECK(ex.holds());
            CHECK(ex.results.size() == 3);
            CHECK(same_projection(ex.alpha, ex.alpha_prime, 1));
            CHECK_FALSE(history_equivalent(ex.alpha, ex.alpha_prime));
        }
    }
}
