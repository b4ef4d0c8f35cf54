#include "drv/analysis.hpp"

#include "drv/errors.hpp"
#include "drv/sketch.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace drv
{
    bool VerdictStats::Process::no_in_every_window() const
    {
        return !window_no.empty() && std::all_of(window_no.begin(), window_no.end(), [](bool b) { return b; });
    }

    std::size_t VerdictStats::total_no() const
    {
        std::size_t total = 0;
        for (const auto& p : procs)
        {
            total += p.no;
        }
        return total;
    }

    VerdictStats verdict_stats(const Execution& e, std::size_t window)
    {
        if (window == 0)
        {
            throw ConfigError("window must be positive");
        }
        VerdictStats stats;
        stats.steps = e.steps.size();
        stats.window = window;
        const std::size_t whole = stats.steps / window;
        const std::size_t trailing = std::max<std::size_t>(1, (whole + 1) / 2);
        for (const auto& reports : e.reports)
        {
            VerdictStats::Process p;
            p.window_no.assign(trailing, false);
            for (const auto& r : reports)
            {
                if (r.verdict == Verdict::Yes)
                {
                    ++p.yes;
                    continue;
                }
                ++p.no;
                p.last_no = r.step;
                // Steps stats.steps - (j+1)*window + 1 .. stats.steps - j*window form window j.
                std::size_t back = stats.steps - r.step;
                std::size_t j = back / window;
                if (j < trailing)
                {
                    p.window_no[j] = true;
                }
            }
            stats.procs.push_back(std::move(p));
        }
        return stats;
    }

    std::string_view to_string(Notion n) noexcept
    {
        switch (n)
        {
        case Notion::SD:
            return "SD";
        case Notion::WD:
            return "WD";
        case Notion::PSD:
            return "PSD";
        case Notion::PWD:
            return "PWD";
        }
        return "?";
    }

    Notion parse_notion(std::string_view s)
    {
        for (auto n : {Notion::SD, Notion::WD, Notion::PSD, Notion::PWD})
        {
            if (to_string(n) == s)
            {
                return n;
            }
        }
        throw ConfigError("unknown notion '" + std::string(s) + "'");
    }

    std::string format(const DecidabilityReport& r)
    {
        std::ostringstream out;
        out << to_string(r.notion) << " " << to_string(r.membership) << " " << (r.pass ? "pass" : "fail")
            << " branch=" << r.branch << " no=[";
        for (std::size_t i = 0; i < r.no_counts.size(); ++i)
        {
            out << (i ? "," : "") << r.no_counts[i];
        }
        out << "]";
        if (!r.evidence.empty())
        {
            out << " " << r.evidence;
        }
        return out.str();
    }

    namespace
    {
        std::vector<std::size_t> no_counts(const Execution& e)
        {
            std::vector<std::size_t> out;
            for (const auto& reports : e.reports)
            {
                out.push_back(static_cast<std::size_t>(std::count_if(
                    reports.begin(), reports.end(), [](const Report& r) { return r.verdict == Verdict::No; })));
            }
            return out;
        }

        DecidabilityReport base(Notion notion, const Execution& e, Membership m)
        {
            DecidabilityReport r;
            r.notion = notion;
            r.membership = m;
            r.no_counts = no_counts(e);
            return r;
        }

        bool any_no(const DecidabilityReport& r)
        {
            return std::any_of(r.no_counts.begin(), r.no_counts.end(), [](std::size_t c) { return c > 0; });
        }

        void require_horizon(const Execution& e, std::size_t window)
        {
            if (window == 0 || e.steps.size() < 3 * window)
            {
                throw ConfigError("run of " + std::to_string(e.steps.size()) + " steps is shorter than three windows of " +
                                  std::to_string(window));
            }
        }

        // Outcome of the predictive escape: sketch outside the language and
        // a tight replay realizing it.
        struct Escape
        {
            bool sketch_out = false;
            bool witness = false;
            std::string evidence;
        };

        Escape escape(const Execution& e, LanguageId language, std::optional<std::size_t> window)
        {
            Escape out;
            if (!e.timed)
            {
                out.evidence = "run has no views";
                return out;
            }
            TightReplay tr;
            try
            {
                tr = tight_replay(e);
            }
            catch (const IncomparableViews& ex)
            {
                out.evidence = std::string("sketch failed: ") + ex.what();
                return out;
            }
            const auto& s = tr.sketch.word;
            if (window && !s.empty())
            {
                // The step window scaled to the sketch's length.
                std::size_t w = std::max<std::size_t>(1, s.size() * *window / std::max<std::size_t>(1, e.steps.size()));
                auto v = membership_at_horizon(language, s, HorizonParams{std::min(w, s.size()), 100000});
                out.sketch_out = v.membership == Membership::Out;
                out.evidence = "sketch " + std::string(to_string(v.membership)) + " (" + v.reason + ")";
            }
            else
            {
                auto v = prefix_check(language, s, 100000);
                out.sketch_out = v.status == Status::Out;
                out.evidence = "sketch " + std::string(to_string(v.status)) + (v.reason.empty() ? "" : " (" + v.reason + ")");
            }
            out.witness = tr.indistinguishable && tr.word_matches;
            out.evidence += std::string("; tight replay ") + (tr.indistinguishable ? "indistinguishable" : "distinguishable") +
                            ", input " + (tr.word_matches ? "equals" : "differs from") + " sketch";
            return out;
        }
    } // namespace

    DecidabilityReport eval_sd(const Execution& e, Membership m)
    {
        auto r = base(Notion::SD, e, m);
        bool no = any_no(r);
        if (m == Membership::In)
        {
            r.pass = !no;
            r.branch = no ? "in-with-no" : "in-zero-no";
        }
        else
        {
            r.pass = no;
            r.branch = no ? "out-some-no" : "out-zero-no";
        }
        return r;
    }

    DecidabilityReport eval_wd(const Execution& e, Membership m, std::size_t window)
    {
        require_horizon(e, window);
        auto r = base(Notion::WD, e, m);
        auto stats = verdict_stats(e, window);
        std::size_t final_no = 0, every = 0;
        for (const auto& p : stats.procs)
        {
            final_no += p.final_no() ? 1 : 0;
            every += p.no_in_every_window() ? 1 : 0;
        }
        r.evidence = "window=" + std::to_string(window) + " trailing=" +
                     std::to_string(stats.procs.empty() ? 0 : stats.procs.front().window_no.size()) +
                     " final-window-no=" + std::to_string(final_no) + " no-in-every-window=" + std::to_string(every);
        if (m == Membership::In)
        {
            r.pass = final_no == 0;
            r.branch = r.pass ? "in-finite-no" : "in-late-no";
        }
        else
        {
            r.pass = every == stats.procs.size();
            r.branch = r.pass ? "out-infinite-no" : "out-missing-no";
        }
        return r;
    }

    DecidabilityReport eval_psd(const Execution& e, Membership m, LanguageId language)
    {
        auto r = eval_sd(e, m);
        r.notion = Notion::PSD;
        if (m == Membership::Out || r.pass)
        {
            return r;
        }
        auto esc = escape(e, language, std::nullopt);
        r.evidence = esc.evidence;
        r.pass = esc.sketch_out && esc.witness;
        r.branch = r.pass ? "in-escape" : "in-with-no";
        return r;
    }

    DecidabilityReport eval_pwd(const Execution& e, Membership m, std::size_t window, LanguageId language)
    {
        auto r = eval_wd(e, m, window);
        r.notion = Notion::PWD;
        if (m == Membership::Out || r.pass)
        {
            return r;
        }
        auto stats = verdict_stats(e, window);
        bool some_every = std::any_of(stats.procs.begin(), stats.procs.end(),
                                      [](const VerdictStats::Process& p) { return p.no_in_every_window(); });
        auto esc = escape(e, language, window);
        r.evidence += "; " + esc.evidence;
        r.pass = some_every && esc.sketch_out && esc.witness;
        r.branch = r.pass ? "in-escape" : "in-late-no";
        return r;
    }

    // ---- real-time obliviousness ----

    namespace
    {
        struct OpType
        {
            std::string inv;
            std::string resp;
        };

        std::vector<OpType> op_domain(LanguageId id)
        {
            switch (object_of(id))
            {
            case ObjectKind::Register:
                return {{"write:0", "ok"}, {"write:1", "ok"}, {"read", "val:0"}, {"read", "val:1"}};
            case ObjectKind::Counter:
                return {{"inc", "ok"}, {"read", "val:0"}, {"read", "val:1"}, {"read", "val:2"}};
            case ObjectKind::Ledger:
                return {{"append:a", "ok"}, {"append:b", "ok"}, {"get", "list:"},   {"get", "list:a"},
                        {"get", "list:b"},  {"get", "list:a.b"}, {"get", "list:b.a"}};
            }
            return {};
        }

        Word local_word(int proc, const std::vector<std::size_t>& ops, const std::vector<OpType>& domain)
        {
            Word w{2, {}};
            for (auto i : ops)
            {
                w.push(proc, Kind::Inv, domain[i].inv);
                w.push(proc, Kind::Resp, domain[i].resp);
            }
            return w;
        }

        // All sequences of length len over [0, base), in lexicographic order.
        template <typename F>
        void for_each_sequence(std::size_t len, std::size_t base, F&& f)
        {
            std::vector<std::size_t> seq(len, 0);
            for (;;)
            {
                f(seq);
                std::size_t i = len;
                while (i > 0 && ++seq[i - 1] == base)
                {
                    seq[--i] = 0;
                }
                if (i == 0)
                {
                    return;
                }
            }
        }
    } // namespace

    Word scripted_beta(LanguageId id, const Word& alpha, std::size_t rounds)
    {
        auto spec = SequentialSpec::make(object_of(id));
        auto ops = match_operations(alpha);
        std::sort(ops.begin(), ops.end(), [](const Operation& a, const Operation& b) {
            auto ra = a.resp_pos.value_or(SIZE_MAX), rb = b.resp_pos.value_or(SIZE_MAX);
            return ra != rb ? ra < rb : a.inv_pos < b.inv_pos;
        });
        auto state = spec.initial();
        for (const auto& op : ops)
        {
            state = spec.apply(state, op.inv_payload).state;
        }
        const std::string observe = object_of(id) == ObjectKind::Ledger ? "get" : "read";
        auto answer = spec.apply(state, observe).response;
        Word beta{alpha.n, {}};
        for (std::size_t r = 0; r < rounds; ++r)
        {
            for (int p = 1; p <= alpha.n; ++p)
            {
                beta.push(p, Kind::Inv, observe);
                beta.push(p, Kind::Resp, answer);
            }
        }
        return beta;
    }

    Membership prefix_membership(LanguageId id, const Word& alpha, const Word& beta)
    {
        auto word = alpha.concat(beta);
        return membership_at_horizon(id, word, HorizonParams{std::max<std::size_t>(1, beta.size()), 100000})
            .membership;
    }

    ObliviousResult rt_oblivious_check(LanguageId id, std::size_t max_len)
    {
        if (max_len > kMaxObliviousLength)
        {
            throw ConfigError("prefix length " + std::to_string(max_len) + " exceeds the cap of " +
                              std::to_string(kMaxObliviousLength));
        }
        ObliviousResult result;
        result.language = id;
        result.max_len = max_len;
        const auto domain = op_domain(id);

        for (std::size_t m = 1; 2 * m <= max_len; ++m)
        {
            for (std::size_t a = 0; a <= m; ++a)
            {
                bool found = false;
                for_each_sequence(a, domain.size(), [&](const std::vector<std::size_t>& s1) {
                    if (found)
                    {
                        return;
                    }
                    for_each_sequence(m - a, domain.size(), [&](const std::vector<std::size_t>& s2) {
                        if (found)
                        {
                            return;
                        }
                        std::vector<Word> locals{local_word(1, s1, domain), local_word(2, s2, domain)};
                        std::vector<Word> alphas;
                        for_each_shuffle(locals, kMaxObliviousLength, [&](const Word& w) {
                            alphas.push_back(uniquify(w));
                            return true;
                        });
                        std::map<std::pair<std::string, std::string>, Membership> cache;
                        auto member = [&](const Word& x, const Word& beta) {
                            auto key = std::make_pair(render(x), render(beta));
                            auto it = cache.find(key);
                            if (it == cache.end())
                            {
                                it = cache.emplace(key, prefix_membership(id, x, beta)).first;
                            }
                            return it->second;
                        };
                        for (const auto& alpha : alphas)
                        {
                            auto beta = scripted_beta(id, alpha);
                            if (member(alpha, beta) != Membership::In)
                            {
                                continue;
                            }
                            ++result.prefixes;
                            for (const auto& other : alphas)
                            {
                                ++result.shuffles;
                                if (member(other, beta) == Membership::Out)
                                {
                                    auto verdict = membership_at_horizon(
                                        id, other.concat(beta), HorizonParams{beta.size(), 100000});
                                    result.oblivious = false;
                                    result.witness = ObliviousWitness{alpha, other, beta, verdict.reason};
                                    found = true;
                                    return;
                                }
                            }
                        }
                    });
                });
                if (found)
                {
                    return result;
                }
            }
        }
        return result;
    }

    bool LedgerShuffleExample::holds() const
    {
        return !results.empty() && std::all_of(results.begin(), results.end(), [](const auto& r) {
                   return r.second.first == Membership::In && r.second.second == Membership::Out;
               });
    }

    LedgerShuffleExample ledger_shuffle_example(int n)
    {
        if (n < 2 || n > 26)
        {
            throw ConfigError("ledger example needs 2..26 processes");
        }
        auto record = [](int i) { return std::string(1, static_cast<char>('a' + i - 1)); };
        std::vector<std::string> all;
        for (int i = 1; i <= n; ++i)
        {
            all.push_back(record(i));
        }
        auto round = [&](Word& w, int from, const std::vector<std::string>& got) {
            for (int i = from; i <= n; ++i)
            {
                w.push(i, Kind::Inv, "append:" + record(i));
                w.push(i, Kind::Resp, "ok");
            }
            w.push(n, Kind::Inv, "get");
            w.push(n, Kind::Resp, list_payload(got));
        };
        LedgerShuffleExample ex;
        ex.alpha.n = ex.alpha_prime.n = ex.beta.n = n;
        round(ex.alpha, 1, all);
        round(ex.alpha_prime, 2, all);
        ex.alpha_prime.push(1, Kind::Inv, "append:" + record(1));
        ex.alpha_prime.push(1, Kind::Resp, "ok");
        auto twice = all;
        twice.insert(twice.end(), all.begin(), all.end());
        round(ex.beta, 1, twice);
        for (auto id : {LanguageId::LIN_LED, LanguageId::SC_LED, LanguageId::EC_LED})
        {
            ex.results.push_back(
                {id, {prefix_membership(id, ex.alpha, ex.beta), prefix_membership(id, ex.alpha_prime, ex.beta)}});
        }
        return ex;
    }
} // namespace drv
