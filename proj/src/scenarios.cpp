#include "drv/scenarios.hpp"

#include "drv/adversary.hpp"
#include "drv/errors.hpp"
#include "drv/monitors.hpp"
#include "drv/simulator.hpp"
#include "drv/sketch.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace drv
{
    void ScenarioResult::fact(std::string key, std::string value)
    {
        facts.emplace_back(std::move(key), std::move(value));
    }

    bool ScenarioResult::check(std::string name, bool ok, std::string detail)
    {
        assertions.push_back(Assertion{std::move(name), ok, std::move(detail)});
        return ok;
    }

    bool ScenarioResult::passed() const
    {
        return !assertions.empty() &&
               std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.ok; });
    }

    std::string ScenarioResult::report() const
    {
        std::ostringstream out;
        out << "scenario: " << name << "\n";
        out << "seed: " << seed << "\n";
        for (const auto& [k, v] : facts)
        {
            out << "fact." << k << ": " << v << "\n";
        }
        for (const auto& a : assertions)
        {
            out << "assert." << a.name << ": " << (a.ok ? "PASS" : "FAIL");
            if (!a.detail.empty())
            {
                out << " " << a.detail;
            }
            out << "\n";
        }
        for (const auto& [k, e] : traces)
        {
            out << "trace." << k << ": " << e.steps.size() << " steps\n";
        }
        out << "result: " << (passed() ? "PASS" : "FAIL") << "\n";
        return out.str();
    }

    const std::vector<std::string>& scenario_names()
    {
        static const std::vector<std::string> names = {
            "lemma1_swap",       "wec_word_surgery", "psd_tight_counter", "ecled_staged", "lin_shrink_escape",
            "theorem5_properties", "obliviousness_table", "stabilization", "decider_runs",  "custom"};
        return names;
    }

    namespace
    {
        using OpFn = std::function<ScriptedOp(int proc, std::size_t k)>;

        std::string safe(std::string id)
        {
            std::replace(id.begin(), id.end(), ':', '_');
            return id;
        }

        std::unique_ptr<Adversary> scripted(int n, OpFn ops, bool timed)
        {
            AdversaryScript script;
            script.n = n;
            script.ops.resize(static_cast<std::size_t>(n));
            script.tail = std::move(ops);
            std::unique_ptr<Adversary> adv = std::make_unique<ScriptedAdversary>(std::move(script));
            return timed ? timed_wrap(std::move(adv)) : std::move(adv);
        }

        // The first keep[p-1] operations of p come from `before`; later ones
        // from `after`, which sees the index relative to the splice point.
        OpFn spliced(OpFn before, std::vector<std::size_t> keep, OpFn after)
        {
            return [before = std::move(before), keep = std::move(keep), after = std::move(after)](int p, std::size_t k) {
                auto c = keep[static_cast<std::size_t>(p - 1)];
                return k < c ? before(p, k) : after(p, k - c);
            };
        }

        std::string verdicts(const Execution& e, int p)
        {
            std::string s;
            for (const auto& r : e.reports[static_cast<std::size_t>(p - 1)])
            {
                s += r.verdict == Verdict::No ? 'N' : 'Y';
            }
            return s;
        }

        bool same_verdicts(const Execution& a, const Execution& b)
        {
            for (int p = 1; p <= a.n; ++p)
            {
                if (verdicts(a, p) != verdicts(b, p))
                {
                    return false;
                }
            }
            return true;
        }

        std::string no_counts(const Execution& e)
        {
            std::string s;
            for (int p = 1; p <= e.n; ++p)
            {
                auto v = verdicts(e, p);
                s += (p > 1 ? "," : "") + std::to_string(std::count(v.begin(), v.end(), 'N'));
            }
            return "[" + s + "]";
        }

        bool same_step(const StepRecord& a, const StepRecord& b)
        {
            return a.proc == b.proc && a.kind == b.kind && a.phase == b.phase && a.detail == b.detail &&
                   a.payload == b.payload && a.verdict == b.verdict;
        }

        // The first len steps of `a` are the first len steps of `b`.
        bool prefix_of(const Execution& a, std::size_t len, const Execution& b)
        {
            if (len > a.steps.size() || len > b.steps.size())
            {
                return false;
            }
            for (std::size_t i = 0; i < len; ++i)
            {
                if (!same_step(a.steps[i], b.steps[i]))
                {
                    return false;
                }
            }
            return true;
        }

        std::vector<std::size_t> picks_in(const Execution& e, std::size_t len)
        {
            std::vector<std::size_t> out(static_cast<std::size_t>(e.n), 0);
            for (std::size_t i = 0; i < len && i < e.steps.size(); ++i)
            {
                if (e.steps[i].phase == Phase::Pick)
                {
                    ++out[static_cast<std::size_t>(e.steps[i].proc - 1)];
                }
            }
            return out;
        }

        std::size_t symbols_within(const Execution& e, std::size_t len)
        {
            return static_cast<std::size_t>(std::count_if(e.steps.begin(), e.steps.begin() + static_cast<std::ptrdiff_t>(std::min(len, e.steps.size())),
                                                          [](const StepRecord& s) { return s.symbol.has_value(); }));
        }

        std::optional<std::size_t> first_no_step(const Execution& e)
        {
            for (const auto& s : e.steps)
            {
                if (s.verdict == Verdict::No)
                {
                    return s.index;
                }
            }
            return std::nullopt;
        }

        // Shortest prefix, longer than `after`, ending with a report of
        // process `last` where every process has reported NO at least k times.
        std::optional<std::size_t> prefix_with_nos(const Execution& e, std::size_t k, std::size_t after, int last)
        {
            std::vector<std::size_t> nos(static_cast<std::size_t>(e.n), 0);
            for (const auto& s : e.steps)
            {
                if (s.kind != StepKind::Report)
                {
                    continue;
                }
                if (s.verdict == Verdict::No)
                {
                    ++nos[static_cast<std::size_t>(s.proc - 1)];
                }
                if (s.index > after && s.proc == last &&
                    std::all_of(nos.begin(), nos.end(), [k](std::size_t c) { return c >= k; }))
                {
                    return s.index;
                }
            }
            return std::nullopt;
        }

        Membership horizon_membership(LanguageId id, const Word& word, std::size_t window, std::size_t steps,
                                      std::string* reason = nullptr)
        {
            std::size_t w = std::max<std::size_t>(1, word.size() * window / std::max<std::size_t>(1, steps));
            auto v = membership_at_horizon(id, word, HorizonParams{std::min(w, word.size()), 100000});
            if (reason)
            {
                *reason = v.reason;
            }
            return v.membership;
        }

        Membership horizon_membership(LanguageId id, const Execution& e, std::size_t window,
                                      std::string* reason = nullptr)
        {
            return horizon_membership(id, input_word(e), window, e.steps.size(), reason);
        }

        bool expect_membership(ScenarioResult& out, const std::string& name, LanguageId id, const Execution& e,
                               std::size_t window, Membership want)
        {
            std::string why;
            bool ok = horizon_membership(id, e, window, &why) == want;
            return out.check(name, ok, why);
        }

        bool tight(const Execution& e)
        {
            return history_equivalent(sketch(e).word, input_word(e));
        }

        std::vector<std::string> candidates_or(const ScenarioConfig& cfg, std::vector<std::string> fallback)
        {
            return cfg.candidates.empty() ? fallback : cfg.candidates;
        }

        MonitorPtr candidate(const std::string& id, bool timed)
        {
            auto m = make_monitor(id);
            if (m->requires_views() && !timed)
            {
                throw ConfigError("monitor '" + id + "' needs a timed scenario");
            }
            return m;
        }

        // ---- lemma1_swap ----

        void lemma1_swap(ScenarioResult& out, const ScenarioConfig& cfg)
        {
            const std::size_t rounds = cfg.rounds.value_or(8);
            auto ids = candidates_or(cfg, {"trivial_yes", "pattern:2:every:1", "pattern:1:until:3",
                                           "stabilized:sd:trivial_yes", "stabilized:wad:pattern:1:until:3"});
            OpFn ops = [](int p, std::size_t k) {
                auto v = std::to_string(k + 1);
                return p == 1 ? ScriptedOp{"write:" + v, "ok"} : ScriptedOp{"read", "val:" + v};
            };
            std::vector<Burst> be, bf;
            for (std::size_t r = 0; r < rounds; ++r)
            {
                be.insert(be.end(), {{1, Until::PreDone}, {2, Until::PreDone}, {1, Until::Received},
                                     {2, Until::Received}, {1, Until::Reported}, {2, Until::Reported}});
                bf.insert(bf.end(), {{1, Until::PreDone}, {2, Until::PreDone}, {2, Until::Received},
                                     {1, Until::Received}, {1, Until::Reported}, {2, Until::Reported}});
            }
            out.fact("rounds", std::to_string(rounds));
            bool first = true;
            for (const auto& id : ids)
            {
                auto mon = candidate(id, false);
                RunOptions opt{2, 1u << 20, cfg.seed};
                auto adv_e = scripted(2, ops, false);
                auto e = run(mon, *adv_e, Schedule::scripted(be), opt);
                auto adv_f = scripted(2, ops, false);
                auto direct = run(mon, *adv_f, Schedule::scripted(bf), opt);

                // Items (3) and (4) of every round: p1's send and receive,
                // then p2's, as adjacent two-step blocks.
                auto f = e;
                std::size_t swaps = 0;
                for (std::size_t i = 0; i + 3 < e.steps.size(); ++i)
                {
                    const auto& s = e.steps;
                    if (s[i].proc == 1 && s[i].kind == StepKind::Send && s[i + 1].kind == StepKind::Receive &&
                        s[i + 1].proc == 1 && s[i + 2].proc == 2 && s[i + 2].kind == StepKind::Send &&
                        s[i + 3].proc == 2 && s[i + 3].kind == StepKind::Receive)
                    {
                        f = swap_blocks(f, i + 1, i + 3, i + 5);
                        ++swaps;
                    }
                }
                auto xe = input_word(e);
                auto xf = input_word(f);
                if (first)
                {
                    out.check("x(E) in LIN_REG", prefix_check(LanguageId::LIN_REG, xe, 100000).status == Status::In);
                    out.check("x(E) in SC_REG", prefix_check(LanguageId::SC_REG, xe, 100000).status == Status::In);
                    auto lf = prefix_check(LanguageId::LIN_REG, xf, 100000);
                    auto sf = prefix_check(LanguageId::SC_REG, xf, 100000);
                    out.check("x(F) out of LIN_REG", lf.status == Status::Out, lf.reason);
                    out.check("x(F) out of SC_REG", sf.status == Status::Out, sf.reason);
                    out.words.emplace_back("lemma1_E", xe);
                    out.words.emplace_back("lemma1_F", xf);
                    first = false;
                }
                out.check(id + ": swaps applied in every round", swaps == rounds, std::to_string(swaps));
                out.check(id + ": swapped run equals the run under the swapped schedule",
                          f.local_traces == direct.local_traces && input_word(f) == input_word(direct));
                auto ind = indistinguishable(e, f);
                out.check(id + ": E and F indistinguishable to every process", ind.global);
                out.check(id + ": identical verdict sequences", same_verdicts(e, f));
                auto sd_e = eval_sd(e, Membership::In);
                auto sd_f = eval_sd(f, Membership::Out);
                out.check(id + ": not SD-correct on both E and F", !(sd_e.pass && sd_f.pass),
                          "E " + std::string(sd_e.pass ? "pass" : "fail") + ", F " + (sd_f.pass ? "pass" : "fail"));
                std::size_t window = std::max<std::size_t>(1, e.steps.size() / 4);
                auto wd_e = eval_wd(e, Membership::In, window);
                auto wd_f = eval_wd(f, Membership::Out, window);
                out.check(id + ": not WD-correct on both E and F", !(wd_e.pass && wd_f.pass),
                          "E " + std::string(wd_e.pass ? "pass" : "fail") + ", F " + (wd_f.pass ? "pass" : "fail"));
                out.fact(id + ".verdicts.p1", verdicts(e, 1));
                out.fact(id + ".verdicts.p2", verdicts(e, 2));
                out.traces.emplace_back("E_" + safe(id), std::move(e));
                out.traces.emplace_back("F_" + safe(id), std::move(f));
            }
        }

        // ---- counter word surgery (untimed and tight timed) ----

        void word_surgery(ScenarioResult& out, const ScenarioConfig& cfg, bool timed)
        {
            const std::size_t horizon = cfg.horizon.value_or(1200);
            const std::size_t window = cfg.window.value_or(200);
            auto ids = candidates_or(cfg, timed ? std::vector<std::string>{"trivial_yes", "wec", "sec",
                                                                           "stabilized:sd:sec"}
                                                : std::vector<std::string>{"trivial_yes", "wec", "stabilized:sd:wec",
                                                                           "stabilized:wad:wec"});
            OpFn x = [](int p, std::size_t k) {
                return p == 1 && k == 0 ? ScriptedOp{"inc", "ok"} : ScriptedOp{"read", "val:0"};
            };
            OpFn fixed = [](int, std::size_t) { return ScriptedOp{"read", "val:1"}; };
            const RunOptions opt{2, horizon, cfg.seed};
            bool first = true;
            bool saved_prime = false;
            for (const auto& id : ids)
            {
                auto mon = candidate(id, timed);
                auto adv = scripted(2, x, timed);
                auto e = run(mon, *adv, Schedule::tight_sequential(), opt);
                std::string why;
                auto m = horizon_membership(LanguageId::WEC_COUNT, e, window, &why);
                if (first)
                {
                    out.check("x(E) out of WEC_COUNT", m == Membership::Out, why);
                    out.words.emplace_back("x", input_word(e).prefix(40));
                }
                auto sd_e = eval_sd(e, Membership::Out);
                out.fact(id + ".E.no", no_counts(e));
                auto f = first_no_step(e);
                if (!f)
                {
                    out.check(id + ": never reports NO on the OUT run E, so SD fails on E", !sd_e.pass, format(sd_e));
                    out.traces.emplace_back("E_" + safe(id), std::move(e));
                    first = false;
                    continue;
                }
                out.fact(id + ".F.length", std::to_string(*f));
                auto adv2 = scripted(2, spliced(x, picks_in(e, *f), fixed), timed);
                auto e2 = run(mon, *adv2, Schedule::tight_sequential(), opt);
                out.check(id + ": F is a prefix of E'", prefix_of(e, *f, e2));
                auto m2 = horizon_membership(LanguageId::WEC_COUNT, e2, window, &why);
                out.check(id + ": x(E') in WEC_COUNT", m2 == Membership::In, why);
                auto sd2 = eval_sd(e2, Membership::In);
                out.check(id + ": SD fails on E'", !sd2.pass, format(sd2));
                out.fact(id + ".WD.E", format(eval_wd(e, Membership::Out, window)));
                out.fact(id + ".WD.E'", format(eval_wd(e2, Membership::In, window)));
                if (timed)
                {
                    auto m3 = horizon_membership(LanguageId::SEC_COUNT, e2, window, &why);
                    out.check(id + ": x(E') in SEC_COUNT", m3 == Membership::In, why);
                    out.check(id + ": E' is tight (sketch equals input)", tight(e2));
                    for (auto lang : {LanguageId::WEC_COUNT, LanguageId::SEC_COUNT})
                    {
                        auto psd = eval_psd(e2, Membership::In, lang);
                        out.check(id + ": PSD for " + std::string(to_string(lang)) + " fails on E'", !psd.pass,
                                  format(psd));
                    }
                }
                if (!saved_prime)
                {
                    out.words.emplace_back("x_prime", input_word(e2).prefix(40));
                    saved_prime = true;
                }
                first = false;
                out.traces.emplace_back("E_" + safe(id), std::move(e));
                out.traces.emplace_back("Eprime_" + safe(id), std::move(e2));
            }
        }

        // ---- EC_LED staged construction ----

        void ecled_staged(ScenarioResult& out, const ScenarioConfig& cfg)
        {
            const std::size_t horizon = cfg.horizon.value_or(1200);
            const std::size_t window = cfg.window.value_or(200);
            const auto L = LanguageId::EC_LED;
            auto ids = candidates_or(cfg, {"trivial_yes", "lin:ledger", "ledger_probe"});
            OpFn x = [](int p, std::size_t k) {
                return p == 1 && k == 0 ? ScriptedOp{"append:a", "ok"} : ScriptedOp{"get", "list:"};
            };
            auto gets = [](std::string list) {
                return OpFn([list](int, std::size_t) { return ScriptedOp{"get", list}; });
            };
            OpFn with_b = [](int p, std::size_t k) {
                return p == 1 && k == 0 ? ScriptedOp{"append:b", "ok"} : ScriptedOp{"get", "list:a"};
            };
            const RunOptions opt{2, horizon, cfg.seed};
            auto go = [&](const MonitorPtr& mon, const OpFn& ops) {
                auto adv = scripted(2, ops, true);
                return run(mon, *adv, Schedule::tight_sequential(), opt);
            };
            bool first = true;
            bool saved_stages = false;
            for (const auto& id : ids)
            {
                auto mon = candidate(id, true);
                auto e = go(mon, x);
                expect_membership(out, id + ": x(E) out of EC_LED", L, e, window, Membership::Out);
                out.check(id + ": E is tight", tight(e));
                if (first)
                {
                    out.words.emplace_back("ecled_x", input_word(e).prefix(40));
                }
                auto e1 = prefix_with_nos(e, 1, 0, 2);
                if (!e1)
                {
                    auto pwd = eval_pwd(e, Membership::Out, window, L);
                    out.check(id + ": refuted at stage 0 (PWD fails on E)", !pwd.pass, format(pwd));
                    out.traces.emplace_back("E_" + safe(id), std::move(e));
                    first = false;
                    continue;
                }
                out.fact(id + ".stage1.prefix", std::to_string(*e1) + " steps; NO counts over E " + no_counts(e));

                auto x1 = spliced(x, picks_in(e, *e1), gets("list:a"));
                auto f1 = go(mon, x1);
                out.check(id + ": E' is a prefix of F1", prefix_of(e, *e1, f1));
                expect_membership(out, id + ": x(F1) in EC_LED", L, f1, window, Membership::In);
                out.check(id + ": F1 is tight", tight(f1));
                auto pwd1 = eval_pwd(f1, Membership::In, window, L);
                if (!pwd1.pass)
                {
                    out.check(id + ": refuted at stage 1 (PWD fails on F1)", true, format(pwd1));
                    out.traces.emplace_back("F1_" + safe(id), std::move(f1));
                    first = false;
                    continue;
                }
                std::size_t last_no = *e1;
                for (const auto& r : f1.reports)
                {
                    for (const auto& rep : r)
                    {
                        if (rep.verdict == Verdict::No)
                        {
                            last_no = std::max(last_no, rep.step);
                        }
                    }
                }
                std::optional<std::size_t> fprime;
                for (const auto& s : f1.steps)
                {
                    if (s.kind == StepKind::Report && s.proc == 2 && s.index >= last_no)
                    {
                        fprime = s.index;
                        break;
                    }
                }
                if (!out.check(id + ": F' ends after the last NO of F1", fprime.has_value()))
                {
                    continue;
                }
                auto x2 = spliced(x1, picks_in(f1, *fprime), with_b);
                auto h = go(mon, x2);
                out.check(id + ": F' is a prefix of H", prefix_of(f1, *fprime, h));
                expect_membership(out, id + ": x(H) out of EC_LED", L, h, window, Membership::Out);
                out.check(id + ": H is tight", tight(h));
                auto e2 = prefix_with_nos(h, 2, *fprime, 2);
                if (!e2)
                {
                    auto pwd = eval_pwd(h, Membership::Out, window, L);
                    out.check(id + ": refuted at stage 2 (PWD fails on H)", !pwd.pass, format(pwd));
                    out.traces.emplace_back("H_" + safe(id), std::move(h));
                    first = false;
                    continue;
                }
                out.fact(id + ".stage2.prefix", std::to_string(*e2) + " steps; NO counts over H " + no_counts(h));
                auto f2 = go(mon, spliced(x2, picks_in(h, *e2), gets("list:a.b")));
                out.check(id + ": E'' is a prefix of F2", prefix_of(h, *e2, f2));
                expect_membership(out, id + ": x(F2) in EC_LED", L, f2, window, Membership::In);
                out.check(id + ": F2 is tight", tight(f2));
                auto nos = picks_in(f2, 0);
                for (int p = 1; p <= 2; ++p)
                {
                    for (const auto& r : f2.reports[static_cast<std::size_t>(p - 1)])
                    {
                        nos[static_cast<std::size_t>(p - 1)] += r.step <= *e2 && r.verdict == Verdict::No;
                    }
                }
                out.check(id + ": every process reports NO at least twice within E''",
                          nos[0] >= 2 && nos[1] >= 2, "[" + std::to_string(nos[0]) + "," + std::to_string(nos[1]) + "]");
                out.fact(id + ".stages", "2");
                out.fact(id + ".PWD.F2", format(eval_pwd(f2, Membership::In, window, L)));
                if (!saved_stages)
                {
                    saved_stages = true;
                    out.words.emplace_back("ecled_x1", input_word(f1).prefix(symbols_within(f1, *e1) + 16));
                    out.words.emplace_back("ecled_h", input_word(h).prefix(symbols_within(h, *e2) + 16));
                    out.words.emplace_back("ecled_x2", input_word(f2).prefix(symbols_within(f2, *e2) + 16));
                }
                first = false;
                out.traces.emplace_back("F1_" + safe(id), std::move(f1));
                out.traces.emplace_back("H_" + safe(id), std::move(h));
                out.traces.emplace_back("F2_" + safe(id), std::move(f2));
            }
        }

        // ---- predictive escape on a shrunk history ----

        void lin_shrink_escape(ScenarioResult& out, const ScenarioConfig& cfg)
        {
            const std::size_t horizon = cfg.horizon.value_or(400);
            OpFn ops = [](int p, std::size_t) {
                return p == 1 ? ScriptedOp{"write:1", "ok"} : ScriptedOp{"read", "val:1"};
            };
            auto adv = scripted(2, ops, true);
            // p1 sends its write but is delayed before announcing it; p2
            // completes a whole read meanwhile.
            auto schedule = Schedule::scripted({{1, Until::PreDone}, {1, Until::Step}, {2, Until::PreDone}, {2, Until::Reported}},
                                               Policy::RoundRobin);
            auto e = run(make_monitor("lin:register"), *adv, schedule, RunOptions{2, horizon, cfg.seed});
            auto x = input_word(e);
            auto lx = prefix_check(LanguageId::LIN_REG, x, 100000);
            out.check("x(E) in LIN_REG", lx.status == Status::In, lx.reason);
            out.check("some process reports NO", first_no_step(e).has_value(), no_counts(e));
            auto tr = tight_replay(e);
            auto ls = lin_check(tr.sketch.word, SequentialSpec::register_object(), 100000);
            out.check("sketch(E) out of LIN_REG", ls.status == Status::Out, ls.reason);
            out.check("tight replay indistinguishable from E", tr.indistinguishable);
            out.check("tight replay input equals sketch(E)", tr.word_matches);
            auto psd = eval_psd(e, Membership::In, LanguageId::LIN_REG);
            out.check("PSD passes through the escape branch", psd.pass && psd.branch == "in-escape", format(psd));
            out.words.emplace_back("shrink_x", x.prefix(12));
            out.words.emplace_back("shrink_sketch", tr.sketch.word.prefix(12));
            out.traces.emplace_back("E", std::move(e));
            out.traces.emplace_back("tight_replay", std::move(tr.replayed));
        }

        // ---- sketch properties over seeded timed runs ----

        Schedule mixed_schedule(std::size_t i, std::uint64_t seed)
        {
            switch (i % 4)
            {
            case 0:
                return Schedule::random(seed);
            case 1:
                return Schedule::random_burst(seed);
            case 2:
                return Schedule::round_robin();
            default:
                return Schedule::tight();
            }
        }

        void theorem5_properties(ScenarioResult& out, const ScenarioConfig& cfg)
        {
            const std::size_t seeds = cfg.seeds.value_or(100);
            const std::size_t horizon = cfg.horizon.value_or(600);
            const int n = cfg.n.value_or(3);
            auto spec = SequentialSpec::register_object();
            auto mon = make_monitor("lin:register");
            std::size_t prec = 0, indist = 0, word = 0, incomparable = 0, missing = 0, views = 0, nos = 0;
            for (std::size_t i = 0; i < seeds; ++i)
            {
                auto seed = cfg.seed + i;
                auto adv = timed_wrap(std::make_unique<ObjectAdversary>(spec, ObjectMode::faithful(), seed));
                auto e = run(mon, *adv, mixed_schedule(i, seed), RunOptions{n, horizon, seed});
                auto tr = tight_replay(e);
                prec += precedence_violations(input_word(e), tr.sketch.word).size();
                indist += tr.indistinguishable ? 0 : 1;
                word += tr.word_matches ? 0 : 1;
                incomparable += incomparable_view_pairs(e);
                missing += views_missing_predecessors(e);
                for (const auto& s : e.steps)
                {
                    views += s.view ? 1 : 0;
                }
                nos += first_no_step(e) ? 1 : 0;
                if (i == 0)
                {
                    out.traces.emplace_back("E_seed" + std::to_string(seed), std::move(e));
                    out.traces.emplace_back("tight_replay_seed" + std::to_string(seed), std::move(tr.replayed));
                }
            }
            out.fact("runs", std::to_string(seeds));
            out.fact("views", std::to_string(views));
            out.fact("runs_with_no", std::to_string(nos));
            out.check("precedence preserved by every sketch", prec == 0, std::to_string(prec) + " violations");
            out.check("every tight replay indistinguishable", indist == 0, std::to_string(indist) + " failures");
            out.check("every tight replay has the sketch as input", word == 0, std::to_string(word) + " failures");
            out.check("views pairwise comparable", incomparable == 0, std::to_string(incomparable) + " pairs");
            out.check("views contain every preceding invocation", missing == 0, std::to_string(missing) + " misses");
            auto eq = lin_equivalence_scenario(spec, std::min<std::size_t>(seeds, 20), 240, 2);
            out.check("faithful box: wrapped histories linearizable", eq.faithful_violations == 0,
                      std::to_string(eq.faithful_runs) + " runs");
            out.check("faulty box: wrapped tight histories not linearizable", eq.faulty_detected == eq.faulty_runs,
                      std::to_string(eq.faulty_detected) + "/" + std::to_string(eq.faulty_runs));
        }

        // ---- obliviousness table ----

        void obliviousness_table(ScenarioResult& out, const ScenarioConfig& cfg)
        {
            const std::size_t k = cfg.max_len.value_or(8);
            for (auto id : kAllLanguages)
            {
                auto r = rt_oblivious_check(id, k);
                std::string name(to_string(id));
                bool expect = id == LanguageId::WEC_COUNT;
                out.fact(name + ".prefixes", std::to_string(r.prefixes));
                out.fact(name + ".shuffles", std::to_string(r.shuffles));
                if (r.witness)
                {
                    out.fact(name + ".alpha", render(r.witness->alpha));
                    out.fact(name + ".alpha_prime", render(r.witness->alpha_prime));
                    out.fact(name + ".beta", render(r.witness->beta));
                    out.fact(name + ".reason", r.witness->reason);
                    out.words.emplace_back("oblivious_" + name + "_alpha", r.witness->alpha);
                    out.words.emplace_back("oblivious_" + name + "_alpha_prime", r.witness->alpha_prime);
                }
                out.check(name + (expect ? " oblivious" : " has a witness"), r.oblivious == expect,
                          r.witness ? "alpha'=" + render(r.witness->alpha_prime) : "none found");
            }
            for (int n : {2, 3})
            {
                auto ex = ledger_shuffle_example(n);
                std::string detail;
                for (const auto& [id, m] : ex.results)
                {
                    detail += std::string(to_string(id)) + ":" + std::string(to_string(m.first)) + "/" +
                              std::string(to_string(m.second)) + " ";
                }
                out.check("ledger shuffle example n=" + std::to_string(n), ex.holds(), detail);
                if (n == 2)
                {
                    out.words.emplace_back("ledger_alpha", ex.alpha);
                    out.words.emplace_back("ledger_alpha_prime", ex.alpha_prime);
                    out.words.emplace_back("ledger_beta", ex.beta);
                }
            }
            // The write/read prefix of the register swap construction.
            Word alpha{2, {}};
            alpha.push(1, Kind::Inv, "write:1").push(1, Kind::Resp, "ok").push(2, Kind::Inv, "read").push(2, Kind::Resp, "val:1");
            auto beta = scripted_beta(LanguageId::LIN_REG, alpha);
            auto all = shuffles({project(alpha, 1), project(alpha, 2)}, 100);
            std::size_t out_count = 0;
            bool read_first = false;
            for (const auto& w : all)
            {
                if (prefix_membership(LanguageId::LIN_REG, w, beta) == Membership::Out)
                {
                    ++out_count;
                    read_first = read_first || w[0].proc == 2;
                }
            }
            out.check("write/read prefix: " + std::to_string(all.size()) + " shuffles, read-first ones OUT",
                      all.size() == 6 && read_first, std::to_string(out_count) + " OUT");
        }

        // ---- stabilization wrappers on verdict fixtures ----

        void stabilization(ScenarioResult& out, const ScenarioConfig& cfg)
        {
            const std::size_t horizon = cfg.horizon.value_or(1000);
            const std::size_t window = cfg.window.value_or(100);
            const int n = cfg.n.value_or(2);
            auto spec = SequentialSpec::register_object();
            auto go = [&](const std::string& id, const Schedule& schedule, std::size_t h) {
                ObjectAdversary adv(spec, ObjectMode::faithful(), cfg.seed);
                return run(make_monitor(id), adv, schedule, RunOptions{n, h, cfg.seed});
            };
            auto keep = [&](const std::string& id, Execution e) { out.traces.emplace_back(safe(id), std::move(e)); };

            {
                const std::string id = "stabilized:sd:pattern:1:once:3";
                auto e = go(id, Schedule::round_robin(), horizon);
                bool ok = true;
                for (int p = 1; p <= n; ++p)
                {
                    auto v = verdicts(e, p);
                    auto first = v.find('N');
                    ok = ok && first != std::string::npos && v.find('Y', first) == std::string::npos;
                }
                out.check(id + ": every process reports NO forever after its first NO", ok);
                keep(id, std::move(e));
            }
            {
                const std::string id = "stabilized:sd:pattern:1:yes:0";
                auto e = go(id, Schedule::round_robin(), horizon);
                auto inner = go("pattern:1:yes:0", Schedule::round_robin(), horizon);
                out.check(id + ": no NO, as the inner monitor", !first_no_step(e) && !first_no_step(inner));
                keep(id, std::move(e));
            }
            auto windows = [&](const std::string& id, bool want_every_no) {
                auto e = go(id, Schedule::round_robin(), horizon);
                auto stats = verdict_stats(e, window);
                bool ok = true;
                for (const auto& p : stats.procs)
                {
                    ok = ok && (want_every_no ? p.no_in_every_window() : !p.final_no() && p.yes > 0);
                }
                out.check(id + (want_every_no ? ": every process NO in every trailing window"
                                              : ": no NO in the final window"),
                          ok, no_counts(e));
                keep(id, std::move(e));
            };
            windows("stabilized:wad:pattern:1:every:1", true);
            windows("stabilized:wad:pattern:1:until:5", false);
            windows("stabilized:wod:pattern:1:until:5", false);
            windows("stabilized:wod:pattern:1:every:1", false);
            {
                auto a = go("pattern:1:once:3", Schedule::tight_sequential(), horizon);
                auto b = go("stabilized:sd:pattern:1:once:3", Schedule::tight_sequential(), horizon);
                auto xa = input_word(a), xb = input_word(b);
                auto len = std::min(xa.size(), xb.size());
                out.check("stabilization keeps the input word", len > 0 && xa.prefix(len) == xb.prefix(len),
                          std::to_string(len) + " symbols compared");
            }
        }

        // ---- seeded runs of the positive deciders ----

        void decider_runs(ScenarioResult& out, const ScenarioConfig& cfg)
        {
            const std::size_t seeds = cfg.seeds.value_or(20);
            const std::size_t horizon = cfg.horizon.value_or(2000);
            const std::size_t window = cfg.window.value_or(200);
            const int n = cfg.n.value_or(3);
            struct Family
            {
                std::string name;
                std::string monitor;
                ObjectKind object;
                bool timed;
                Notion notion;
                LanguageId language;
            };
            const std::vector<Family> families = {
                {"wd_wec", "wec", ObjectKind::Counter, false, Notion::WD, LanguageId::WEC_COUNT},
                {"psd_lin_register", "lin:register", ObjectKind::Register, true, Notion::PSD, LanguageId::LIN_REG},
                {"psd_lin_ledger", "lin:ledger", ObjectKind::Ledger, true, Notion::PSD, LanguageId::LIN_LED},
                {"pwd_sec", "sec", ObjectKind::Counter, true, Notion::PWD, LanguageId::SEC_COUNT},
                {"pwd_wec", "wec", ObjectKind::Counter, true, Notion::PWD, LanguageId::WEC_COUNT},
            };
            for (const auto& fam : families)
            {
                auto spec = SequentialSpec::make(fam.object);
                auto mon = make_monitor(fam.monitor);
                for (bool faulty : {false, true})
                {
                    std::size_t passes = 0, expected_membership = 0;
                    std::map<std::string, std::size_t> branches;
                    for (std::size_t i = 0; i < seeds; ++i)
                    {
                        auto seed = cfg.seed + i;
                        ObjectOptions options;
                        if (fam.object == ObjectKind::Counter)
                        {
                            options.inc_budget = 8;
                        }
                        auto mode = faulty ? ObjectMode::faulty_after(6) : ObjectMode::faithful();
                        std::unique_ptr<Adversary> adv = std::make_unique<ObjectAdversary>(spec, mode, seed, options);
                        if (fam.timed)
                        {
                            adv = timed_wrap(std::move(adv));
                        }
                        auto e = run(mon, *adv, Schedule::random(seed), RunOptions{n, horizon, seed});
                        auto m = horizon_membership(fam.language, e, window);
                        expected_membership += (m == (faulty ? Membership::Out : Membership::In)) ? 1 : 0;
                        DecidabilityReport r;
                        switch (fam.notion)
                        {
                        case Notion::SD:
                            r = eval_sd(e, m);
                            break;
                        case Notion::WD:
                            r = eval_wd(e, m, window);
                            break;
                        case Notion::PSD:
                            r = eval_psd(e, m, fam.language);
                            break;
                        case Notion::PWD:
                            r = eval_pwd(e, m, window, fam.language);
                            break;
                        }
                        passes += r.pass ? 1 : 0;
                        ++branches[r.branch];
                        if (i == 0)
                        {
                            out.traces.emplace_back(fam.name + (faulty ? "_faulty" : "_faithful"), std::move(e));
                        }
                    }
                    std::string label = fam.name + (faulty ? ".faulty" : ".faithful");
                    std::string b;
                    for (const auto& [k, v] : branches)
                    {
                        b += k + "=" + std::to_string(v) + " ";
                    }
                    out.fact(label + ".branches", b);
                    out.check(label + ": inputs have the intended membership", expected_membership == seeds,
                              std::to_string(expected_membership) + "/" + std::to_string(seeds));
                    out.check(label + ": " + std::string(to_string(fam.notion)) + " passes on every run",
                              passes == seeds, std::to_string(passes) + "/" + std::to_string(seeds));
                }
            }
        }

        // ---- a single configured run ----

        void custom(ScenarioResult& out, const ScenarioConfig& cfg)
        {
            const std::size_t horizon = cfg.horizon.value_or(1000);
            const std::size_t window = cfg.window.value_or(std::max<std::size_t>(1, horizon / 10));
            auto mon = make_monitor(cfg.monitor);
            std::unique_ptr<Adversary> adv;
            std::optional<Word> script_word;
            std::optional<ObjectKind> object;
            int n = cfg.n.value_or(2);
            if (cfg.adversary == "scripted")
            {
                if (cfg.word_file.empty())
                {
                    throw ConfigError("scripted adversary needs a word file");
                }
                script_word = read_word_file(cfg.word_file);
                n = script_word->n;
                adv = std::make_unique<ScriptedAdversary>(AdversaryScript::from_word(*script_word));
            }
            else if (cfg.adversary == "object" || cfg.adversary == "faulty")
            {
                object = parse_object_kind(cfg.object);
                ObjectOptions options;
                if (object == ObjectKind::Counter)
                {
                    options.inc_budget = 8;
                }
                adv = std::make_unique<ObjectAdversary>(
                    SequentialSpec::make(*object),
                    cfg.adversary == "faulty" ? ObjectMode::faulty_after(cfg.fault_after) : ObjectMode::faithful(),
                    cfg.seed, options);
            }
            else
            {
                throw ConfigError("unknown adversary '" + cfg.adversary + "'");
            }
            if (cfg.timed)
            {
                adv = timed_wrap(std::move(adv));
            }
            Schedule schedule;
            if (cfg.schedule == "word")
            {
                // Follow the word's own event order, then stop.
                if (!script_word)
                {
                    throw ConfigError("schedule 'word' needs a scripted adversary");
                }
                schedule = from_word(*script_word);
            }
            else
            {
                schedule.policy = parse_policy(cfg.schedule);
                schedule.seed = cfg.seed;
            }
            if (cfg.schedule != "word" && (schedule.policy == Policy::Explicit || schedule.policy == Policy::Stop))
            {
                throw ConfigError("schedule '" + cfg.schedule + "' needs a script");
            }
            auto e = run(mon, *adv, schedule, RunOptions{n, horizon, cfg.seed});
            if (cfg.schedule == "word")
            {
                out.check("run input equals the scripted word", history_equivalent(input_word(e), *script_word));
            }
            LanguageId language;
            if (cfg.language)
            {
                language = *cfg.language;
            }
            else
            {
                throw ConfigError("custom scenario needs an evaluation language");
            }
            std::string why = "configured";
            auto m = cfg.membership ? *cfg.membership : horizon_membership(language, e, window, &why);
            out.fact("membership", std::string(to_string(m)) + " (" + why + ")");
            out.fact("no_counts", no_counts(e));
            DecidabilityReport r;
            switch (cfg.notion)
            {
            case Notion::SD:
                r = eval_sd(e, m);
                break;
            case Notion::WD:
                r = eval_wd(e, m, window);
                break;
            case Notion::PSD:
                r = eval_psd(e, m, language);
                break;
            case Notion::PWD:
                r = eval_pwd(e, m, window, language);
                break;
            }
            out.check(std::string(to_string(cfg.notion)) + " holds on the run", r.pass, format(r));
            out.traces.emplace_back("E", std::move(e));
        }
    } // namespace

    ScenarioResult run_scenario(const ScenarioConfig& config)
    {
        ScenarioResult out;
        out.name = config.name;
        out.seed = config.seed;
        if (config.name == "lemma1_swap")
        {
            lemma1_swap(out, config);
        }
        else if (config.name == "wec_word_surgery")
        {
            word_surgery(out, config, false);
        }
        else if (config.name == "psd_tight_counter")
        {
            word_surgery(out, config, true);
        }
        else if (config.name == "ecled_staged")
        {
            ecled_staged(out, config);
        }
        else if (config.name == "lin_shrink_escape")
        {
            lin_shrink_escape(out, config);
        }
        else if (config.name == "theorem5_properties")
        {
            theorem5_properties(out, config);
        }
        else if (config.name == "obliviousness_table")
        {
            obliviousness_table(out, config);
        }
        else if (config.name == "stabilization")
        {
            stabilization(out, config);
        }
        else if (config.name == "decider_runs")
        {
            decider_runs(out, config);
        }
        else if (config.name == "custom")
        {
            custom(out, config);
        }
        else
        {
            throw ConfigError("unknown scenario '" + config.name + "'");
        }
        return out;
    }
} // namespace drv
