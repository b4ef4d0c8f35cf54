#include "drv/sketch.hpp"

#include "drv/adversary.hpp"
#include "drv/monitors.hpp"
#include "drv/oracles.hpp"
#include "drv/simulator.hpp"

#include <algorithm>
#include <set>

namespace drv
{
    Sketch build_sketch(std::vector<SketchOp> ops, int n)
    {
        std::sort(ops.begin(), ops.end(), [](const SketchOp& a, const SketchOp& b) { return a.key < b.key; });
        std::map<Uid, const SketchOp*> by_key;
        for (const auto& op : ops)
        {
            if (!by_key.emplace(op.key, &op).second)
            {
                throw InvalidWord("duplicate invocation key " + std::to_string(op.key));
            }
        }

        // Distinct views, smallest first.
        std::vector<std::vector<Uid>> views;
        for (const auto& op : ops)
        {
            if (op.view)
            {
                views.push_back(*op.view);
            }
        }
        std::sort(views.begin(), views.end(), [](const auto& a, const auto& b) {
            return a.size() != b.size() ? a.size() < b.size() : a < b;
        });
        views.erase(std::unique(views.begin(), views.end()), views.end());
        for (std::size_t i = 1; i < views.size(); ++i)
        {
            if (!std::includes(views[i].begin(), views[i].end(), views[i - 1].begin(), views[i - 1].end()))
            {
                throw IncomparableViews("views of sizes " + std::to_string(views[i - 1].size()) + " and " +
                                        std::to_string(views[i].size()) + " are not related by inclusion");
            }
        }

        Sketch out;
        out.word.n = n;
        std::set<Uid> appended;
        auto append_inv = [&](Uid key) {
            auto it = by_key.find(key);
            if (it == by_key.end())
            {
                throw InvalidWord("view names unknown invocation " + std::to_string(key));
            }
            out.word.push(it->second->proc, Kind::Inv, it->second->inv);
            out.keys.push_back(key);
            appended.insert(key);
        };

        const std::vector<Uid>* prev = nullptr;
        for (const auto& view : views)
        {
            for (Uid key : view)
            {
                if (prev && std::binary_search(prev->begin(), prev->end(), key))
                {
                    continue;
                }
                append_inv(key);
            }
            for (const auto& op : ops)
            {
                if (op.view && *op.view == view)
                {
                    if (!appended.count(op.key))
                    {
                        throw InvalidWord("view of operation " + std::to_string(op.key) +
                                          " does not contain its own invocation");
                    }
                    out.word.push(op.proc, Kind::Resp, *op.resp);
                    out.keys.push_back(op.key);
                }
            }
            prev = &view;
        }
        for (const auto& op : ops)
        {
            if (!appended.count(op.key))
            {
                append_inv(op.key);
                ++out.unseen_pending;
            }
        }
        return out;
    }

    Sketch sketch(const Word& word, const std::map<Uid, std::vector<Uid>>& views)
    {
        std::vector<SketchOp> ops;
        for (const auto& op : match_operations(word))
        {
            SketchOp s{op.inv_uid, op.proc, op.inv_payload, op.resp_payload, std::nullopt};
            auto it = views.find(op.inv_uid);
            if (op.complete())
            {
                if (it == views.end())
                {
                    throw InvalidWord("complete operation " + std::to_string(op.inv_uid) + " has no view");
                }
                auto v = it->second;
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
                s.view = std::move(v);
            }
            ops.push_back(std::move(s));
        }
        return build_sketch(std::move(ops), word.n);
    }

    Sketch sketch(const Execution& e)
    {
        if (!e.timed)
        {
            throw Error("sketch needs views from a timed execution");
        }
        std::map<OpTag, SketchOp> ops;
        for (const auto& s : e.steps)
        {
            if (s.kind == StepKind::Send)
            {
                ops[s.tag] = SketchOp{s.symbol->uid, s.proc, s.symbol->payload, std::nullopt, std::nullopt};
            }
            else if (s.kind == StepKind::Receive)
            {
                auto& op = ops.at(s.tag);
                op.resp = s.symbol->payload;
                op.view = view_uids(e, *s.view);
            }
        }
        std::vector<SketchOp> list;
        for (auto& [tag, op] : ops)
        {
            list.push_back(std::move(op));
        }
        return build_sketch(std::move(list), e.n);
    }

    std::vector<PrecedenceViolation> precedence_violations(const Word& x, const Word& s)
    {
        auto keyed = [](const Word& w) {
            std::map<std::pair<int, std::size_t>, Operation> out;
            std::map<int, std::size_t> seen;
            for (auto& op : match_operations(w))
            {
                out.emplace(std::make_pair(op.proc, seen[op.proc]++), op);
            }
            return out;
        };
        auto kx = keyed(x);
        auto ks = keyed(s);
        std::vector<PrecedenceViolation> out;
        for (const auto& [a, xa] : kx)
        {
            for (const auto& [b, xb] : kx)
            {
                if (!(xa.resp_pos && *xa.resp_pos < xb.inv_pos))
                {
                    continue;
                }
                auto sa = ks.find(a);
                auto sb = ks.find(b);
                bool kept = sa != ks.end() && sb != ks.end() && sa->second.resp_pos &&
                            *sa->second.resp_pos < sb->second.inv_pos;
                if (!kept)
                {
                    out.push_back(PrecedenceViolation{a, b});
                }
            }
        }
        return out;
    }

    std::size_t incomparable_view_pairs(const Execution& e)
    {
        std::vector<const ViewCounts*> views;
        for (const auto& s : e.steps)
        {
            if (s.view)
            {
                views.push_back(&*s.view);
            }
        }
        std::size_t bad = 0;
        for (std::size_t i = 0; i < views.size(); ++i)
        {
            for (std::size_t j = i + 1; j < views.size(); ++j)
            {
                const auto& a = *views[i];
                const auto& b = *views[j];
                bool le = true, ge = true;
                for (std::size_t p = 0; p < a.size(); ++p)
                {
                    le = le && a[p] <= b[p];
                    ge = ge && a[p] >= b[p];
                }
                if (!le && !ge)
                {
                    ++bad;
                }
            }
        }
        return bad;
    }

    std::size_t views_missing_predecessors(const Execution& e)
    {
        struct Seen
        {
            std::size_t inv_step;
            std::optional<std::size_t> resp_step;
            Uid inv_uid;
            std::optional<std::vector<Uid>> view;
        };
        std::map<OpTag, Seen> ops;
        for (const auto& s : e.steps)
        {
            if (s.kind == StepKind::Send)
            {
                ops[s.tag] = Seen{s.index, std::nullopt, s.symbol->uid, std::nullopt};
            }
            else if (s.kind == StepKind::Receive && s.view)
            {
                auto& op = ops.at(s.tag);
                op.resp_step = s.index;
                op.view = view_uids(e, *s.view);
            }
        }
        std::size_t misses = 0;
        for (const auto& [tb, b] : ops)
        {
            if (!b.view)
            {
                continue;
            }
            for (const auto& [ta, a] : ops)
            {
                if (a.resp_step && *a.resp_step < b.inv_step &&
                    !std::binary_search(b.view->begin(), b.view->end(), a.inv_uid))
                {
                    ++misses;
                }
            }
        }
        return misses;
    }

    TightReplay tight_replay(const Execution& e)
    {
        if (!e.timed)
        {
            throw Error("tight replay needs a timed execution");
        }
        TightReplay out;
        out.sketch = sketch(e);

        // Steps of each process that are waiting to be placed, and steps
        // already placed ahead of their original position.
        std::map<int, std::vector<std::size_t>> deferred;
        std::vector<bool> placed(e.steps.size(), false);
        std::vector<std::size_t> order;
        auto place = [&](std::size_t i) {
            if (!placed[i])
            {
                placed[i] = true;
                order.push_back(i);
            }
        };
        auto flush = [&](int p) {
            for (auto i : deferred[p])
            {
                place(i);
            }
            deferred[p].clear();
        };
        // The next steps of process p after position i with the given phases.
        auto pull = [&](std::size_t i, std::initializer_list<Phase> phases) {
            std::size_t j = i + 1;
            for (Phase ph : phases)
            {
                while (j < e.steps.size() && e.steps[j].proc != e.steps[i].proc)
                {
                    ++j;
                }
                if (j >= e.steps.size() || e.steps[j].phase != ph)
                {
                    return;
                }
                place(j);
                ++j;
            }
        };

        for (std::size_t i = 0; i < e.steps.size(); ++i)
        {
            if (placed[i])
            {
                continue;
            }
            const auto& s = e.steps[i];
            switch (s.phase)
            {
            case Phase::Send:
            case Phase::At1:
            case Phase::At4:
                deferred[s.proc].push_back(i);
                break;
            case Phase::At2:
                flush(s.proc);
                place(i);
                pull(i, {Phase::At3});
                break;
            case Phase::At5:
                flush(s.proc);
                place(i);
                pull(i, {Phase::At6, Phase::Receive});
                break;
            default:
                place(i);
                break;
            }
        }
        std::vector<std::size_t> rest;
        for (auto& [p, list] : deferred)
        {
            rest.insert(rest.end(), list.begin(), list.end());
        }
        std::sort(rest.begin(), rest.end());
        for (auto i : rest)
        {
            place(i);
        }

        for (auto i : order)
        {
            out.order.push_back(e.steps[i].proc);
        }
        out.replayed = replay(e, out.order);
        out.replay_word = input_word(out.replayed);
        out.indistinguishable = indistinguishable(e, out.replayed).global;
        out.word_matches = history_equivalent(out.replay_word, out.sketch.word);
        return out;
    }

    LinEquivalenceReport lin_equivalence_scenario(const SequentialSpec& spec, std::size_t seeds, std::size_t horizon,
                                                  std::size_t fault_after)
    {
        LinEquivalenceReport report;
        auto monitor = make_monitor("trivial_yes");
        for (std::size_t seed = 0; seed < seeds; ++seed)
        {
            {
                auto adv = timed_wrap(std::make_unique<ObjectAdversary>(spec, ObjectMode::faithful(), seed));
                auto e = run(monitor, *adv, Schedule::random(seed), RunOptions{3, horizon, seed});
                ++report.faithful_runs;
                if (!linearizable(input_word(e), spec, 1u << 20))
                {
                    ++report.faithful_violations;
                }
            }
            {
                auto adv = timed_wrap(
                    std::make_unique<ObjectAdversary>(spec, ObjectMode::faulty_after(fault_after), seed));
                auto e = run(monitor, *adv, Schedule::tight(), RunOptions{3, horizon, seed});
                ++report.faulty_runs;
                if (!linearizable(input_word(e), spec, 1u << 20))
                {
                    ++report.faulty_detected;
                }
            }
        }
        return report;
    }
} // namespace drv
