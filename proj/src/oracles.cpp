#include "drv/oracles.hpp"

#include <algorithm>
#include <unordered_set>

namespace drv
{
    std::string_view to_string(LanguageId id) noexcept
    {
        switch (id)
        {
        case LanguageId::LIN_REG:
            return "LIN_REG";
        case LanguageId::SC_REG:
            return "SC_REG";
        case LanguageId::LIN_LED:
            return "LIN_LED";
        case LanguageId::SC_LED:
            return "SC_LED";
        case LanguageId::EC_LED:
            return "EC_LED";
        case LanguageId::WEC_COUNT:
            return "WEC_COUNT";
        case LanguageId::SEC_COUNT:
            return "SEC_COUNT";
        }
        return "?";
    }

    LanguageId parse_language(std::string_view name)
    {
        for (auto id : kAllLanguages)
        {
            if (to_string(id) == name)
            {
                return id;
            }
        }
        throw ConfigError("unknown language '" + std::string(name) + "'");
    }

    ObjectKind object_of(LanguageId id) noexcept
    {
        switch (id)
        {
        case LanguageId::LIN_REG:
        case LanguageId::SC_REG:
            return ObjectKind::Register;
        case LanguageId::LIN_LED:
        case LanguageId::SC_LED:
        case LanguageId::EC_LED:
            return ObjectKind::Ledger;
        case LanguageId::WEC_COUNT:
        case LanguageId::SEC_COUNT:
            return ObjectKind::Counter;
        }
        return ObjectKind::Register;
    }

    std::string_view to_string(Status s) noexcept
    {
        switch (s)
        {
        case Status::In:
            return "IN";
        case Status::Out:
            return "OUT";
        case Status::Unknown:
            return "UNKNOWN";
        }
        return "?";
    }

    std::string_view to_string(Membership m) noexcept
    {
        return m == Membership::In ? "IN" : "OUT";
    }

    namespace
    {
        void require_alphabet(const Word& word, const SequentialSpec& spec)
        {
            for (const auto& s : word.symbols)
            {
                bool ok = s.kind == Kind::Inv ? spec.is_invocation(s.payload) : spec.is_response(s.payload);
                if (!ok)
                {
                    throw InvalidWord("payload '" + s.payload + "' is not in the " + std::string(spec.name()) +
                                      " alphabet");
                }
            }
        }

        // Search over linearization orders. An order is a sequence of
        // per-process prefixes, so (per-process counts, object state) is a
        // complete memo key. Pending operations are optional: linearized with
        // whatever response the object gives, or dropped.
        class OrderSearch
        {
        public:
            OrderSearch(const Word& word, const SequentialSpec& spec, bool real_time)
                : spec_(spec), n_(static_cast<std::size_t>(word.n))
            {
                auto ops = match_operations(word);
                by_proc_.resize(n_);
                for (auto& op : ops)
                {
                    by_proc_[static_cast<std::size_t>(op.proc - 1)].push_back(ops_.size());
                    ops_.push_back(Item{op.proc, op.inv_pos, op.resp_pos, op.inv_payload, op.resp_payload, {}});
                }
                required_.assign(n_, 0);
                for (std::size_t p = 0; p < n_; ++p)
                {
                    for (auto id : by_proc_[p])
                    {
                        if (ops_[id].resp)
                        {
                            ++required_[p];
                        }
                    }
                }
                for (auto& item : ops_)
                {
                    item.need.assign(n_, 0);
                    if (!real_time)
                    {
                        continue;
                    }
                    for (std::size_t q = 0; q < n_; ++q)
                    {
                        std::size_t k = 0;
                        for (std::size_t j = 0; j < by_proc_[q].size(); ++j)
                        {
                            const auto& other = ops_[by_proc_[q][j]];
                            if (other.resp_pos && *other.resp_pos < item.inv_pos)
                            {
                                k = j + 1;
                            }
                        }
                        item.need[q] = k;
                    }
                }
            }

            std::size_t operation_count() const noexcept { return ops_.size(); }

            bool run()
            {
                std::vector<std::size_t> counts(n_, 0);
                return dfs(counts, spec_.initial());
            }

        private:
            struct Item
            {
                int proc;
                std::size_t inv_pos;
                std::optional<std::size_t> resp_pos;
                std::string inv;
                std::optional<std::string> resp;
                std::vector<std::size_t> need;
            };

            bool done(const std::vector<std::size_t>& counts) const
            {
                for (std::size_t p = 0; p < n_; ++p)
                {
                    if (counts[p] < required_[p])
                    {
                        return false;
                    }
                }
                return true;
            }

            bool dfs(std::vector<std::size_t>& counts, const std::string& state)
            {
                if (done(counts))
                {
                    return true;
                }
                std::string key;
                for (auto c : counts)
                {
                    key += std::to_string(c);
                    key += ',';
                }
                key += '|';
                key += state;
                if (failed_.count(key))
                {
                    return false;
                }
                for (std::size_t p = 0; p < n_; ++p)
                {
                    if (counts[p] >= by_proc_[p].size())
                    {
                        continue;
                    }
                    const Item& item = ops_[by_proc_[p][counts[p]]];
                    bool minimal = true;
                    for (std::size_t q = 0; q < n_ && minimal; ++q)
                    {
                        minimal = counts[q] >= item.need[q];
                    }
                    if (!minimal)
                    {
                        continue;
                    }
                    auto out = spec_.apply(state, item.inv);
                    if (item.resp && out.response != *item.resp)
                    {
                        continue;
                    }
                    ++counts[p];
                    bool ok = dfs(counts, out.state);
                    --counts[p];
                    if (ok)
                    {
                        return true;
                    }
                }
                failed_.insert(std::move(key));
                return false;
            }

            const SequentialSpec& spec_;
            std::size_t n_;
            std::vector<Item> ops_;
            std::vector<std::vector<std::size_t>> by_proc_;
            std::vector<std::size_t> required_;
            std::unordered_set<std::string> failed_;
        };

        std::size_t count_invocations(const Word& word)
        {
            return static_cast<std::size_t>(
                std::count_if(word.symbols.begin(), word.symbols.end(), [](const Symbol& s) { return s.kind == Kind::Inv; }));
        }

        void check_cap(const Word& word, std::size_t cap)
        {
            auto ops = count_invocations(word);
            if (ops > cap)
            {
                throw CapExceeded(std::to_string(ops) + " operations exceed the cap of " + std::to_string(cap));
            }
        }

        PrefixVerdict out_at(const Word& word, std::size_t len, std::string reason)
        {
            PrefixVerdict v;
            v.status = Status::Out;
            v.violating_prefix = len;
            v.reason = std::move(reason);
            if (len > 0)
            {
                v.witness.push_back(word[len - 1].uid);
            }
            return v;
        }
    } // namespace

    bool linearizable(const Word& word, const SequentialSpec& spec, std::size_t cap)
    {
        check_cap(word, cap);
        return OrderSearch(word, spec, true).run();
    }

    bool sequentially_consistent(const Word& word, const SequentialSpec& spec, std::size_t cap)
    {
        check_cap(word, cap);
        return OrderSearch(word, spec, false).run();
    }

    PrefixVerdict lin_check(const Word& word, const SequentialSpec& spec, std::size_t cap)
    {
        require_valid(word);
        check_cap(word, cap);
        require_alphabet(word, spec);
        if (linearizable(word, spec, cap))
        {
            return {};
        }
        // Linearizability is prefix-closed, so the shortest bad prefix can be
        // found by bisection.
        std::size_t lo = 0, hi = word.size();
        while (hi - lo > 1)
        {
            auto mid = lo + (hi - lo) / 2;
            if (linearizable(word.prefix(mid), spec, cap))
            {
                lo = mid;
            }
            else
            {
                hi = mid;
            }
        }
        return out_at(word, hi, "no linearization of the first " + std::to_string(hi) + " symbols");
    }

    PrefixVerdict sc_check(const Word& word, const SequentialSpec& spec, std::size_t cap)
    {
        require_valid(word);
        check_cap(word, cap);
        require_alphabet(word, spec);
        // Appending an invocation never breaks consistency (the new pending
        // operation can be dropped), so only prefixes ending in a response
        // need a search.
        for (std::size_t len = 1; len <= word.size(); ++len)
        {
            if (word[len - 1].kind != Kind::Resp)
            {
                continue;
            }
            if (!sequentially_consistent(word.prefix(len), spec, cap))
            {
                return out_at(word, len, "no sequential order respecting process order for the first " +
                                             std::to_string(len) + " symbols");
            }
        }
        return {};
    }

    namespace
    {
        std::int64_t read_value(const std::string& payload)
        {
            auto p = parse_payload(payload);
            return std::stoll(*p.arg);
        }

        PrefixVerdict counter_check(const Word& word, bool strong)
        {
            require_valid(word);
            auto spec = SequentialSpec::counter();
            require_alphabet(word, spec);

            CounterProgress progress;
            std::map<int, std::int64_t> own_incs;
            std::map<int, std::string> pending_inv;
            std::int64_t incs_invoked = 0;
            std::optional<std::size_t> first_bad;
            std::string reason;
            std::vector<Uid> witness;

            auto flag = [&](std::size_t len, std::string why, Uid uid) {
                if (!first_bad || len < *first_bad)
                {
                    first_bad = len;
                    reason = std::move(why);
                    witness = {uid};
                }
            };

            for (std::size_t i = 0; i < word.size(); ++i)
            {
                const auto& s = word[i];
                if (s.kind == Kind::Inv)
                {
                    pending_inv[s.proc] = s.payload;
                    if (s.payload == "inc")
                    {
                        ++incs_invoked;
                    }
                    continue;
                }
                const auto& invocation = pending_inv[s.proc];
                if (invocation == "inc")
                {
                    ++own_incs[s.proc];
                    continue;
                }
                auto value = read_value(s.payload);
                if (value < own_incs[s.proc])
                {
                    progress.prop1 = false;
                    flag(i + 1, "read of process " + std::to_string(s.proc) + " returned " + std::to_string(value) +
                                    " below its own " + std::to_string(own_incs[s.proc]) + " preceding incs",
                         s.uid);
                }
                auto last = progress.last_read.find(s.proc);
                if (last != progress.last_read.end() && value < last->second)
                {
                    progress.prop2 = false;
                    flag(i + 1, "read of process " + std::to_string(s.proc) + " decreased from " +
                                    std::to_string(last->second) + " to " + std::to_string(value),
                         s.uid);
                }
                // Incs invoked before this response precede or overlap the read.
                if (strong && value > incs_invoked)
                {
                    progress.prop4 = false;
                    flag(i + 1, "read of process " + std::to_string(s.proc) + " returned " + std::to_string(value) +
                                    " but only " + std::to_string(incs_invoked) + " incs precede or overlap it",
                         s.uid);
                }
                progress.last_read[s.proc] = value;
            }
            progress.incs_total = incs_invoked;

            PrefixVerdict v;
            v.counter = progress;
            if (first_bad)
            {
                v.status = Status::Out;
                v.violating_prefix = first_bad;
                v.reason = reason;
                v.witness = witness;
            }
            else
            {
                v.status = Status::Unknown;
                v.reason = "eventual clause pending: " + std::to_string(incs_invoked) + " incs so far";
            }
            return v;
        }

        bool is_prefix_of(const std::vector<std::string>& a, const std::vector<std::string>& b)
        {
            return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
        }
    } // namespace

    PrefixVerdict wec_count_check(const Word& word)
    {
        return counter_check(word, false);
    }

    PrefixVerdict sec_count_check(const Word& word)
    {
        return counter_check(word, true);
    }

    PrefixVerdict ec_led_check(const Word& word)
    {
        require_valid(word);
        auto spec = SequentialSpec::ledger();
        require_alphabet(word, spec);

        // Every operation must be completed and any order is allowed, so a
        // prefix is consistent iff the complete gets return a chain of lists
        // whose longest element uses only appended records (as a multiset).
        LedgerProgress progress;
        std::map<std::string, std::int64_t> appended;
        std::map<int, std::string> pending_inv;
        std::vector<std::string> longest;
        for (std::size_t i = 0; i < word.size(); ++i)
        {
            const auto& s = word[i];
            if (s.kind == Kind::Inv)
            {
                pending_inv[s.proc] = s.payload;
                auto p = parse_payload(s.payload);
                if (p.name == "append")
                {
                    ++appended[*p.arg];
                    progress.appended.push_back(*p.arg);
                }
                continue;
            }
            if (parse_payload(pending_inv[s.proc]).name != "get")
            {
                continue;
            }
            auto records = list_records(s.payload);
            progress.latest_get[s.proc] = records;
            if (is_prefix_of(longest, records))
            {
                longest = records;
            }
            else if (!is_prefix_of(records, longest))
            {
                auto v = out_at(word, i + 1, "get of process " + std::to_string(s.proc) +
                                                 " is incomparable with an earlier get");
                v.ledger = progress;
                return v;
            }
            std::map<std::string, std::int64_t> used;
            for (const auto& r : longest)
            {
                if (++used[r] > appended[r])
                {
                    auto v = out_at(word, i + 1, "record '" + r + "' returned by a get was not appended");
                    v.ledger = progress;
                    return v;
                }
            }
        }
        PrefixVerdict v;
        v.status = Status::Unknown;
        v.ledger = progress;
        v.reason = "eventual clause pending: " + std::to_string(progress.appended.size()) + " appends so far";
        return v;
    }

    PrefixVerdict prefix_check(LanguageId id, const Word& word, std::size_t cap)
    {
        auto spec = SequentialSpec::make(object_of(id));
        switch (id)
        {
        case LanguageId::LIN_REG:
        case LanguageId::LIN_LED:
            return lin_check(word, spec, cap);
        case LanguageId::SC_REG:
        case LanguageId::SC_LED:
            return sc_check(word, spec, cap);
        case LanguageId::EC_LED:
            return ec_led_check(word);
        case LanguageId::WEC_COUNT:
            return wec_count_check(word);
        case LanguageId::SEC_COUNT:
            return sec_count_check(word);
        }
        return {};
    }

    HorizonVerdict membership_at_horizon(LanguageId id, const Word& word, const HorizonParams& params)
    {
        if (params.window > word.size())
        {
            throw ConfigError("window " + std::to_string(params.window) + " larger than word of " +
                              std::to_string(word.size()) + " symbols");
        }
        auto verdict = prefix_check(id, word, params.op_cap);
        if (verdict.status == Status::Out)
        {
            return {Membership::Out, verdict.reason};
        }
        const std::size_t start = word.size() - params.window;
        auto ops = match_operations(word);

        if (id == LanguageId::WEC_COUNT || id == LanguageId::SEC_COUNT)
        {
            const auto total = verdict.counter->incs_total;
            for (const auto& op : ops)
            {
                bool in_window = op.inv_pos >= start || (op.resp_pos && *op.resp_pos >= start);
                if (!in_window)
                {
                    continue;
                }
                if (op.inv_payload == "inc")
                {
                    return {Membership::Out, "inc inside the final window: no read-only suffix"};
                }
                if (op.resp_pos && *op.resp_pos >= start && read_value(*op.resp_payload) != total)
                {
                    return {Membership::Out, "read in the final window returned " + *op.resp_payload +
                                                 " instead of the inc total " + std::to_string(total)};
                }
            }
            return {Membership::In, "reads in the final window return the inc total " + std::to_string(total)};
        }

        if (id == LanguageId::EC_LED)
        {
            std::map<std::string, std::int64_t> required;
            for (const auto& op : ops)
            {
                auto p = parse_payload(op.inv_payload);
                if (p.name == "append" && op.inv_pos < start)
                {
                    ++required[*p.arg];
                }
            }
            for (const auto& op : ops)
            {
                if (op.inv_payload != "get" || !op.resp_pos || *op.resp_pos < start)
                {
                    continue;
                }
                std::map<std::string, std::int64_t> have;
                for (const auto& r : list_records(*op.resp_payload))
                {
                    ++have[r];
                }
                for (const auto& [record, count] : required)
                {
                    if (have[record] < count)
                    {
                        return {Membership::Out, "get in the final window misses appended record '" + record + "'"};
                    }
                }
            }
            return {Membership::In, "gets in the final window contain every earlier append"};
        }
        return {Membership::In, "every prefix is consistent"};
    }
} // namespace drv
