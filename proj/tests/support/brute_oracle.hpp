#pragma once

// Reference checkers for test code only. They share nothing with the
// library's search: operations are paired by a direct scan, every subset
// of pending operations is tried, and every permutation of the chosen
// operations is generated with std::next_permutation.

#include "drv/word.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace brute
{
    enum class Object
    {
        Register,
        Ledger,
    };

    struct Op
    {
        int proc = 1;
        int seq = 0; // position within its process
        std::size_t inv_pos = 0;
        long resp_pos = -1; // -1 while pending
        bool mutator = false;
        std::string name;   // invocation name
        std::string arg;    // written value or appended record
        std::string result; // response payload
    };

    inline std::vector<Op> pair_up(const drv::Word& w)
    {
        std::vector<Op> ops;
        std::vector<long> open(static_cast<std::size_t>(w.n) + 1, -1);
        std::vector<int> count(static_cast<std::size_t>(w.n) + 1, 0);
        for (std::size_t i = 0; i < w.size(); ++i)
        {
            const auto& s = w[i];
            auto p = static_cast<std::size_t>(s.proc);
            if (s.kind == drv::Kind::Inv)
            {
                Op op;
                op.proc = s.proc;
                op.seq = count[p]++;
                op.inv_pos = i;
                auto colon = s.payload.find(':');
                op.mutator = colon != std::string::npos;
                op.name = s.payload.substr(0, colon);
                if (op.mutator)
                {
                    op.arg = s.payload.substr(colon + 1);
                }
                open[p] = static_cast<long>(ops.size());
                ops.push_back(op);
            }
            else
            {
                auto& op = ops[static_cast<std::size_t>(open[p])];
                op.resp_pos = static_cast<long>(i);
                op.result = s.payload;
                open[p] = -1;
            }
        }
        return ops;
    }

    // Applies a chosen order; pending operations take effect without a
    // response to compare.
    inline bool legal(Object obj, const std::vector<Op>& ops, const std::vector<int>& order)
    {
        std::string reg = "0";
        std::vector<std::string> led;
        for (int idx : order)
        {
            const auto& op = ops[static_cast<std::size_t>(idx)];
            std::string expect;
            if (obj == Object::Register)
            {
                if (op.mutator)
                {
                    reg = op.arg;
                    expect = "ok";
                }
                else
                {
                    expect = "val:" + reg;
                }
            }
            else
            {
                if (op.mutator)
                {
                    led.push_back(op.arg);
                    expect = "ok";
                }
                else
                {
                    expect = "list:";
                    for (std::size_t i = 0; i < led.size(); ++i)
                    {
                        expect += (i ? "." : "") + led[i];
                    }
                }
            }
            if (op.resp_pos >= 0 && op.result != expect)
            {
                return false;
            }
        }
        return true;
    }

    enum class Order
    {
        RealTime,
        Process,
        Any,
    };

    inline bool respects(const std::vector<Op>& ops, const std::vector<int>& order, Order constraint)
    {
        if (constraint == Order::Any)
        {
            return true;
        }
        const bool real_time = constraint == Order::RealTime;
        for (std::size_t i = 0; i < order.size(); ++i)
        {
            for (std::size_t j = i + 1; j < order.size(); ++j)
            {
                const auto& later = ops[static_cast<std::size_t>(order[i])];
                const auto& earlier = ops[static_cast<std::size_t>(order[j])];
                bool must_precede =
                    real_time ? earlier.resp_pos >= 0 && static_cast<std::size_t>(earlier.resp_pos) < later.inv_pos
                              : earlier.proc == later.proc && earlier.seq < later.seq;
                if (must_precede)
                {
                    return false;
                }
            }
        }
        return true;
    }

    // Some completion admits a legal total order respecting the given
    // constraint. Pending operations are either dropped or take effect, or
    // with keep_pending always take effect.
    inline bool admits_order(Object obj, const drv::Word& w, Order constraint, bool keep_pending = false)
    {
        auto ops = pair_up(w);
        std::vector<int> pending;
        for (std::size_t i = 0; i < ops.size(); ++i)
        {
            if (ops[i].resp_pos < 0)
            {
                pending.push_back(static_cast<int>(i));
            }
        }
        const unsigned first_mask = keep_pending ? (1u << pending.size()) - 1 : 0;
        for (unsigned mask = first_mask; mask < (1u << pending.size()); ++mask)
        {
            std::vector<int> chosen;
            for (std::size_t i = 0; i < ops.size(); ++i)
            {
                auto it = std::find(pending.begin(), pending.end(), static_cast<int>(i));
                if (it == pending.end() || (mask >> (it - pending.begin())) & 1u)
                {
                    chosen.push_back(static_cast<int>(i));
                }
            }
            do
            {
                if (respects(ops, chosen, constraint) && legal(obj, ops, chosen))
                {
                    return true;
                }
            } while (std::next_permutation(chosen.begin(), chosen.end()));
        }
        return false;
    }

    inline bool linearizable(Object obj, const drv::Word& w) { return admits_order(obj, w, Order::RealTime); }

    // Every prefix is sequentially consistent.
    inline bool sc_prefixes(Object obj, const drv::Word& w)
    {
        for (std::size_t len = 1; len <= w.size(); ++len)
        {
            if (!admits_order(obj, w.prefix(len), Order::Process))
            {
                return false;
            }
        }
        return true;
    }

    // Shortest prefix that is not linearizable, or 0.
    inline std::size_t first_bad_lin_prefix(Object obj, const drv::Word& w)
    {
        for (std::size_t len = 1; len <= w.size(); ++len)
        {
            if (!admits_order(obj, w.prefix(len), Order::RealTime))
            {
                return len;
            }
        }
        return 0;
    }

    // Every prefix can be completed and permuted into a legal ledger history.
    inline bool ledger_prefixes_consistent(const drv::Word& w)
    {
        for (std::size_t len = 1; len <= w.size(); ++len)
        {
            if (!admits_order(Object::Ledger, w.prefix(len), Order::Any, true))
            {
                return false;
            }
        }
        return true;
    }

    // Every counter read returns at most the number of incs invoked
    // before its response.
    inline bool counter_reads_bounded(const drv::Word& w)
    {
        auto ops = pair_up(w);
        for (const auto& r : ops)
        {
            if (r.name != "read" || r.resp_pos < 0)
            {
                continue;
            }
            long incs = 0;
            for (const auto& i : ops)
            {
                incs += i.name == "inc" && static_cast<long>(i.inv_pos) < r.resp_pos ? 1 : 0;
            }
            if (std::stol(r.result.substr(r.result.find(':') + 1)) > incs)
            {
                return false;
            }
        }
        return true;
    }
} // namespace brute
