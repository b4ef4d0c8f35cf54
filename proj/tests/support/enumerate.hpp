#pragma once

// Exhaustive two-process words. Adjacent invocations (or adjacent
// responses) of different processes can be swapped without changing real
// time or process order, so only the interleaving that lists process 1
// first inside each such run is produced.

#include "drv/word.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace enumerate
{
    struct OpType
    {
        std::string inv;
        std::string resp;
    };

    inline void interleave(int a, int b, int i, int j, int last_proc, int last_kind, std::vector<int>& cur,
                           std::vector<std::vector<int>>& out)
    {
        if (i == a && j == b)
        {
            out.push_back(cur);
            return;
        }
        if (i < a && !(last_kind == i % 2 && last_proc == 2))
        {
            cur.push_back(1);
            interleave(a, b, i + 1, j, 1, i % 2, cur, out);
            cur.pop_back();
        }
        if (j < b)
        {
            cur.push_back(2);
            interleave(a, b, i, j + 1, 2, j % 2, cur, out);
            cur.pop_back();
        }
    }

    // Symbol counts a and b; each local sequence alternates INV, RESP.
    inline std::vector<std::vector<int>> canonical_interleavings(int a, int b)
    {
        std::vector<std::vector<int>> out;
        std::vector<int> cur;
        interleave(a, b, 0, 0, 0, -1, cur, out);
        return out;
    }

    // Replaces every value in a payload (text after ':', split on '.').
    inline std::string rename(const std::string& payload, const std::map<std::string, std::string>& to)
    {
        auto colon = payload.find(':');
        if (colon == std::string::npos)
        {
            return payload;
        }
        std::string out = payload.substr(0, colon + 1);
        std::string rest = payload.substr(colon + 1);
        std::size_t start = 0;
        bool first = true;
        while (start < rest.size())
        {
            auto dot = rest.find('.', start);
            auto v = rest.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            auto it = to.find(v);
            out += (first ? "" : ".") + (it == to.end() ? v : it->second);
            first = false;
            if (dot == std::string::npos)
            {
                break;
            }
            start = dot + 1;
        }
        return out;
    }

    struct Symmetry
    {
        bool swap_procs = false;
        // Value renamings under which the object's semantics is invariant;
        // the identity is implied.
        std::vector<std::map<std::string, std::string>> renamings;
    };

    // Calls visit(word) for every canonical word with at most max_ops
    // operations; the last operation of each process may be pending. An
    // operation assignment is skipped when some symmetry image of it is
    // lexicographically smaller, so each orbit is visited once.
    template <typename Visit>
    void for_each_word(const std::vector<OpType>& complete, const std::vector<std::string>& pending,
                       std::size_t max_ops, Visit&& visit, const Symmetry& sym = {})
    {
        auto index_map = [](const auto& items, auto key, const std::map<std::string, std::string>& to) {
            std::vector<std::size_t> out;
            for (const auto& it : items)
            {
                auto renamed = key(it, to);
                std::size_t j = 0;
                while (j < items.size() && key(items[j], {}) != renamed)
                {
                    ++j;
                }
                if (j == items.size())
                {
                    throw std::logic_error("renaming leaves the operation domain");
                }
                out.push_back(j);
            }
            return out;
        };
        auto op_key = [](const OpType& o, const std::map<std::string, std::string>& to) {
            return rename(o.inv, to) + "/" + rename(o.resp, to);
        };
        auto inv_key = [](const std::string& i, const std::map<std::string, std::string>& to) { return rename(i, to); };
        std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> images;
        for (const auto& r : sym.renamings)
        {
            images.emplace_back(index_map(complete, op_key, r), index_map(pending, inv_key, r));
        }
        std::vector<std::size_t> identity_c(complete.size()), identity_p(pending.size());
        for (std::size_t i = 0; i < complete.size(); ++i)
        {
            identity_c[i] = i;
        }
        for (std::size_t i = 0; i < pending.size(); ++i)
        {
            identity_p[i] = i;
        }
        images.emplace_back(identity_c, identity_p);

        for (std::size_t m = 0; m <= max_ops; ++m)
        {
            for (std::size_t x = sym.swap_procs ? (m + 1) / 2 : 0; x <= m; ++x)
            {
                const std::size_t y = m - x;
                for (int px = 0; px <= (x > 0 ? 1 : 0); ++px)
                {
                    for (int py = 0; py <= (y > 0 ? 1 : 0); ++py)
                    {
                        if (sym.swap_procs && x == y && px < py)
                        {
                            continue;
                        }
                        const bool self_swap = sym.swap_procs && x == y && px == py;
                        // Slot s belongs to process 1 for s < x.
                        std::vector<std::size_t> radix(m);
                        std::vector<bool> is_pending(m, false);
                        for (std::size_t s = 0; s < m; ++s)
                        {
                            is_pending[s] = (px && s + 1 == x) || (py && s + 1 == m);
                            radix[s] = is_pending[s] ? pending.size() : complete.size();
                        }
                        auto canonical = [&](const std::vector<std::size_t>& d) {
                            std::vector<std::size_t> img(m);
                            for (const auto& [cm, pm] : images)
                            {
                                for (int sw = 0; sw <= (self_swap ? 1 : 0); ++sw)
                                {
                                    for (std::size_t s = 0; s < m; ++s)
                                    {
                                        std::size_t src = sw ? (s < x ? s + x : s - x) : s;
                                        img[s] = is_pending[src] ? pm[d[src]] : cm[d[src]];
                                    }
                                    if (img < d)
                                    {
                                        return false;
                                    }
                                }
                            }
                            return true;
                        };
                        const int a = static_cast<int>(2 * x) - px;
                        const int b = static_cast<int>(2 * y) - py;
                        const auto orders = canonical_interleavings(a, b);
                        std::vector<std::size_t> digit(m, 0);
                        while (true)
                        {
                            if (canonical(digit))
                            {
                                std::vector<std::string> local[2];
                                for (std::size_t s = 0; s < m; ++s)
                                {
                                    auto& l = local[s < x ? 0 : 1];
                                    if (is_pending[s])
                                    {
                                        l.push_back(pending[digit[s]]);
                                    }
                                    else
                                    {
                                        l.push_back(complete[digit[s]].inv);
                                        l.push_back(complete[digit[s]].resp);
                                    }
                                }
                                for (const auto& order : orders)
                                {
                                    drv::Word w{2, {}};
                                    std::size_t next[2] = {0, 0};
                                    for (int p : order)
                                    {
                                        auto& k = next[p - 1];
                                        w.push(p, k % 2 == 0 ? drv::Kind::Inv : drv::Kind::Resp, local[p - 1][k]);
                                        ++k;
                                    }
                                    visit(w);
                                }
                            }
                            // Little-endian odometer; lexicographic order of
                            // the digit vector is unrelated to visit order.
                            std::size_t s = 0;
                            while (s < m && ++digit[s] == radix[s])
                            {
                                digit[s] = 0;
                                ++s;
                            }
                            if (s == m)
                            {
                                break;
                            }
                        }
                    }
                }
            }
        }
    }
} // namespace enumerate
