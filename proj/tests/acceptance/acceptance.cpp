// Acceptance suite: one PASS/FAIL line per criterion. With an argument N
// only criterion N runs. Exit status is 0 when every criterion run passed.

#include "drv/analysis.hpp"
#include "drv/errors.hpp"
#include "drv/oracles.hpp"
#include "drv/scenarios.hpp"
#include "drv/sketch.hpp"
#include "support/brute_oracle.hpp"
#include "support/enumerate.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace drv;

namespace
{
    struct Outcome
    {
        bool pass = false;
        std::string detail;
    };

    std::string join(const std::vector<std::string>& parts, const std::string& sep = "; ")
    {
        std::string out;
        for (const auto& p : parts)
        {
            out += (out.empty() ? "" : sep) + p;
        }
        return out;
    }

    ScenarioResult scenario(const std::string& name, std::function<void(ScenarioConfig&)> tweak = {})
    {
        ScenarioConfig cfg;
        cfg.name = name;
        if (tweak)
        {
            tweak(cfg);
        }
        return run_scenario(cfg);
    }

    std::vector<std::string> failed_assertions(const ScenarioResult& r)
    {
        std::vector<std::string> out;
        for (const auto& a : r.assertions)
        {
            if (!a.ok)
            {
                out.push_back(r.name + ": " + a.name + " " + a.detail);
            }
        }
        return out;
    }

    const Assertion* find_assertion(const ScenarioResult& r, const std::string& name)
    {
        for (const auto& a : r.assertions)
        {
            if (a.name == name)
            {
                return &a;
            }
        }
        return nullptr;
    }

    const Execution* find_trace(const ScenarioResult& r, const std::string& name)
    {
        for (const auto& [n, e] : r.traces)
        {
            if (n == name)
            {
                return &e;
            }
        }
        return nullptr;
    }

    // ---- 1: oracle equivalence ----

    struct Tier
    {
        std::string label;
        brute::Object object;
        SequentialSpec spec;
        std::vector<enumerate::OpType> complete;
        std::vector<std::string> pending;
        enumerate::Symmetry symmetry;
        std::size_t max_ops;
    };

    std::vector<std::map<std::string, std::string>> renamings(const std::vector<std::string>& values)
    {
        std::vector<std::map<std::string, std::string>> out;
        auto perm = values;
        while (std::next_permutation(perm.begin(), perm.end()))
        {
            std::map<std::string, std::string> m;
            for (std::size_t i = 0; i < values.size(); ++i)
            {
                m[values[i]] = perm[i];
            }
            out.push_back(m);
        }
        return out;
    }

    std::vector<Tier> oracle_tiers()
    {
        std::vector<Tier> tiers;

        Tier reg{"register, values {0,1,2}", brute::Object::Register, SequentialSpec::register_object(), {}, {}, {}, 6};
        for (std::string v : {"0", "1", "2"})
        {
            reg.complete.push_back({"write:" + v, "ok"});
            reg.complete.push_back({"read", "val:" + v});
            reg.pending.push_back("write:" + v);
        }
        reg.pending.push_back("read");
        // The initial value 0 is distinguished; 1 and 2 are interchangeable.
        reg.symmetry = {true, {{{"1", "2"}, {"2", "1"}}}};
        tiers.push_back(reg);

        Tier led3{"ledger, records {0,1,2}, gets of distinct lists up to length 2",
                  brute::Object::Ledger, SequentialSpec::ledger(), {}, {}, {}, 5};
        std::vector<std::string> r3{"0", "1", "2"};
        for (const auto& v : r3)
        {
            led3.complete.push_back({"append:" + v, "ok"});
            led3.pending.push_back("append:" + v);
        }
        led3.complete.push_back({"get", "list:"});
        for (const auto& a : r3)
        {
            led3.complete.push_back({"get", "list:" + a});
            for (const auto& b : r3)
            {
                if (a != b)
                {
                    led3.complete.push_back({"get", "list:" + a + "." + b});
                }
            }
        }
        led3.pending.push_back("get");
        led3.symmetry = {true, renamings(r3)};
        tiers.push_back(led3);

        return tiers;
    }

    Outcome criterion1()
    {
        std::vector<std::string> parts;
        bool pass = true;
        for (const auto& t : oracle_tiers())
        {
            auto t0 = std::chrono::steady_clock::now();
            std::size_t words = 0, lin_out = 0, sc_out = 0, disagreements = 0;
            std::string first_bad;
            enumerate::for_each_word(
                t.complete, t.pending, t.max_ops,
                [&](const Word& w) {
                    ++words;
                    bool lin = lin_check(w, t.spec, 100).status == Status::In;
                    bool sc = sc_check(w, t.spec, 100).status == Status::In;
                    bool lin_ref = brute::linearizable(t.object, w);
                    bool sc_ref = brute::sc_prefixes(t.object, w);
                    lin_out += !lin;
                    sc_out += !sc;
                    if (lin != lin_ref || sc != sc_ref)
                    {
                        if (disagreements++ == 0)
                        {
                            first_bad = render(w);
                        }
                    }
                },
                t.symmetry);
            auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            // Both verdicts must occur, or the tier tests nothing.
            bool ok = disagreements == 0 && lin_out > 0 && lin_out < words && sc_out > 0 && sc_out < words;
            pass = pass && ok;
            std::ostringstream s;
            s << t.label << ", <= " << t.max_ops << " ops: " << words << " words, " << disagreements
              << " disagreements (lin OUT " << lin_out << ", sc OUT " << sc_out << ", " << static_cast<int>(secs)
              << " s)";
            if (!first_bad.empty())
            {
                s << " first: " << first_bad;
            }
            parts.push_back(s.str());
        }
        return {pass, join(parts)};
    }

    // ---- 2: decidability matrix ----

    Outcome criterion2()
    {
        std::vector<std::string> bad, done;
        for (const std::string name : {"lemma1_swap", "wec_word_surgery", "psd_tight_counter", "ecled_staged"})
        {
            auto r = scenario(name);
            auto f = failed_assertions(r);
            bad.insert(bad.end(), f.begin(), f.end());
            if (!r.passed())
            {
                bad.push_back(name + " did not pass");
            }
            done.push_back(name + (r.passed() ? " ok" : " FAIL"));
        }
        // The staged construction must get through two stages.
        auto staged = scenario("ecled_staged");
        std::string stages;
        for (const auto& [k, v] : staged.facts)
        {
            if (k == "ledger_probe.stages")
            {
                stages = v;
            }
        }
        if (stages != "2")
        {
            bad.push_back("ecled_staged reached " + (stages.empty() ? std::string("no") : stages) + " stages");
        }
        auto runs = scenario("decider_runs", [](ScenarioConfig& c) {
            c.seeds = 20;
            c.horizon = 2000;
            c.window = 200;
        });
        auto f = failed_assertions(runs);
        bad.insert(bad.end(), f.begin(), f.end());
        done.push_back("decider_runs x20 at horizon 2000 window 200" + std::string(runs.passed() ? " ok" : " FAIL"));
        done.push_back("ecled stages " + stages);
        return {bad.empty() && runs.passed(), join(done, ", ") + (bad.empty() ? "" : " | " + join(bad))};
    }

    // ---- 3: the swap construction ----

    Outcome criterion3()
    {
        auto r = scenario("lemma1_swap");
        std::vector<std::string> bad = failed_assertions(r);
        auto reg = SequentialSpec::register_object();
        std::size_t pairs = 0;
        for (const auto& [name, e] : r.traces)
        {
            if (name.rfind("E_", 0) != 0)
            {
                continue;
            }
            const Execution* f = find_trace(r, "F_" + name.substr(2));
            if (!f)
            {
                bad.push_back("no F trace for " + name);
                continue;
            }
            ++pairs;
            auto xe = input_word(e);
            auto xf = input_word(*f);
            // Every prefix of x(E) is linearizable; x(F) is not.
            bool e_in = true;
            for (std::size_t len = 1; len <= xe.size(); ++len)
            {
                e_in = e_in && lin_check(xe.prefix(len), reg, 10000).status == Status::In;
            }
            if (!e_in)
            {
                bad.push_back(name + ": x(E) has a non-linearizable prefix");
            }
            if (lin_check(xf, reg, 10000).status != Status::Out)
            {
                bad.push_back(name + ": x(F) is not out");
            }
            for (int p = 1; p <= e.n; ++p)
            {
                if (local_trace(e, p) != local_trace(*f, p))
                {
                    bad.push_back(name + ": local trace of process " + std::to_string(p) + " differs");
                }
                const auto& re = e.reports[static_cast<std::size_t>(p - 1)];
                const auto& rf = f->reports[static_cast<std::size_t>(p - 1)];
                bool same = re.size() == rf.size();
                for (std::size_t i = 0; same && i < re.size(); ++i)
                {
                    same = re[i].verdict == rf[i].verdict;
                }
                if (!same)
                {
                    bad.push_back(name + ": verdicts of process " + std::to_string(p) + " differ");
                }
            }
        }
        bool pass = r.passed() && pairs > 0 && bad.empty();
        return {pass, std::to_string(pairs) + " monitor pairs (E, F) checked" + (bad.empty() ? "" : " | " + join(bad))};
    }

    // ---- 4 and 5: the sketch properties over 100 timed runs ----

    const ScenarioResult& theorem5()
    {
        static const ScenarioResult r = scenario("theorem5_properties", [](ScenarioConfig& c) {
            c.seeds = 100;
            c.n = 3;
            c.horizon = 600;
        });
        return r;
    }

    Outcome require_assertions(const ScenarioResult& r, const std::vector<std::string>& names)
    {
        std::vector<std::string> parts;
        bool pass = true;
        for (const auto& n : names)
        {
            const auto* a = find_assertion(r, n);
            pass = pass && a && a->ok;
            parts.push_back(n + ": " + (a ? (a->ok ? "ok " : "FAIL ") + a->detail : "missing"));
        }
        std::string runs;
        for (const auto& [k, v] : r.facts)
        {
            if (k == "runs" || k == "views")
            {
                runs += k + "=" + v + " ";
            }
        }
        return {pass, runs + join(parts)};
    }

    Outcome criterion4()
    {
        return require_assertions(theorem5(), {"precedence preserved by every sketch", "every tight replay indistinguishable",
                                               "every tight replay has the sketch as input"});
    }

    Outcome criterion5()
    {
        return require_assertions(theorem5(), {"views pairwise comparable"});
    }

    // ---- 6: stabilization ----

    Outcome criterion6()
    {
        auto r = scenario("stabilization", [](ScenarioConfig& c) { c.horizon = 1000; });
        auto bad = failed_assertions(r);
        return {r.passed(), std::to_string(r.assertions.size()) + " postconditions at horizon 1000" +
                                (bad.empty() ? "" : " | " + join(bad))};
    }

    // ---- 7: the escape branch ----

    Outcome criterion7()
    {
        auto r = scenario("lin_shrink_escape");
        const auto* a = find_assertion(r, "PSD passes through the escape branch");
        bool escape = a && a->ok && a->detail.find("branch=in-escape") != std::string::npos;
        auto bad = failed_assertions(r);
        return {r.passed() && escape,
                (a ? a->detail : std::string("escape assertion missing")) + (bad.empty() ? "" : " | " + join(bad))};
    }

    // ---- 8: obliviousness ----

    // The ledger shape: an append of process 1 that preceded an operation
    // of another process in alpha is moved after it in alpha'.
    bool ledger_shape(const ObliviousWitness& w)
    {
        auto p1 = project(w.alpha, 1);
        for (const auto& v : precedence_violations(w.alpha, w.alpha_prime))
        {
            if (v.before.first == 1 && v.after.first != 1 && 2 * v.before.second < p1.size() &&
                p1[2 * v.before.second].payload.rfind("append:", 0) == 0)
            {
                return true;
            }
        }
        return false;
    }

    Outcome criterion8()
    {
        std::vector<std::string> parts;
        bool pass = true;
        for (auto id : kAllLanguages)
        {
            auto r = rt_oblivious_check(id, 8);
            bool want_oblivious = id == LanguageId::WEC_COUNT;
            bool ok = r.oblivious == want_oblivious && r.witness.has_value() == !want_oblivious;
            if (r.witness)
            {
                const auto& w = *r.witness;
                ok = ok && prefix_membership(id, w.alpha, w.beta) == Membership::In &&
                     prefix_membership(id, w.alpha_prime, w.beta) == Membership::Out;
                if (id == LanguageId::LIN_LED || id == LanguageId::SC_LED || id == LanguageId::EC_LED)
                {
                    ok = ok && ledger_shape(w);
                }
            }
            pass = pass && ok;
            parts.push_back(std::string(to_string(id)) + (r.witness ? " witness" : " oblivious") + (ok ? "" : " FAIL"));
        }
        for (int n : {2, 3})
        {
            auto ex = ledger_shuffle_example(n);
            pass = pass && ex.holds();
            parts.push_back("ledger example n=" + std::to_string(n) + (ex.holds() ? " ok" : " FAIL"));
        }
        return {pass, "K=8: " + join(parts, ", ")};
    }

    // ---- 9: determinism ----

    std::string fingerprint(const ScenarioResult& r)
    {
        std::string s = r.report();
        for (const auto& [name, e] : r.traces)
        {
            s += "\n#trace " + name + "\n" + format_trace(e);
        }
        for (const auto& [name, w] : r.words)
        {
            s += "\n#word " + name + "\n" + format_word(w);
        }
        return s;
    }

    Outcome criterion9()
    {
        std::vector<ScenarioConfig> configs;
        for (const auto& name : scenario_names())
        {
            if (name == "custom")
            {
                continue;
            }
            ScenarioConfig c;
            c.name = name;
            c.seed = 11;
            configs.push_back(c);
        }
        for (const auto& entry : std::filesystem::directory_iterator(std::string(DRV_SOURCE_DIR) + "/scenarios"))
        {
            auto c = load_scenario_file(entry.path().string());
            if (c.name == "custom")
            {
                configs.push_back(c);
            }
        }
        std::vector<std::string> differing;
        std::size_t traces = 0;
        for (const auto& c : configs)
        {
            auto a = run_scenario(c);
            auto b = run_scenario(c);
            traces += a.traces.size();
            if (fingerprint(a) != fingerprint(b))
            {
                differing.push_back(c.name);
            }
        }
        return {differing.empty(), std::to_string(configs.size()) + " scenario configurations, " +
                                       std::to_string(traces) + " traces compared" +
                                       (differing.empty() ? "" : " | differing: " + join(differing, ", "))};
    }

    struct Criterion
    {
        const char* title;
        Outcome (*run)();
    };

    const Criterion kCriteria[] = {
        {"oracle equivalence against exhaustive search", criterion1},
        {"decidability matrix scenarios and seeded evaluations", criterion2},
        {"swap construction gives indistinguishable runs of opposite membership", criterion3},
        {"sketch precedence and tight replay over 100 timed runs", criterion4},
        {"views form a chain", criterion5},
        {"stabilization postconditions", criterion6},
        {"predictive escape branch", criterion7},
        {"real-time obliviousness", criterion8},
        {"deterministic traces", criterion9},
    };
} // namespace

int main(int argc, char** argv)
{
    std::size_t first = 1, last = std::size(kCriteria);
    if (argc > 1)
    {
        char* end = nullptr;
        auto k = std::strtoul(argv[1], &end, 10);
        if (*end != '\0' || k < 1 || k > std::size(kCriteria))
        {
            std::cerr << "usage: " << argv[0] << " [1-" << std::size(kCriteria) << "]\n";
            return 64;
        }
        first = last = k;
    }
    bool all = true;
    for (std::size_t k = first; k <= last; ++k)
    {
        const auto& c = kCriteria[k - 1];
        Outcome o;
        try
        {
            o = c.run();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " " << c.title << ": " << o.detail
                  << std::endl;
    }
    return all ? 0 : 1;
}
