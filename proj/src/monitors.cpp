#include "drv/monitors.hpp"

#include "drv/errors.hpp"
#include "drv/oracles.hpp"

#include <algorithm>

namespace drv
{
    std::string_view to_string(Stabilization s) noexcept
    {
        switch (s)
        {
        case Stabilization::SD:
            return "sd";
        case Stabilization::WAD:
            return "wad";
        case Stabilization::WOD:
            return "wod";
        }
        return "?";
    }

    namespace
    {
        std::optional<long long> read_value(const std::string& inv, const std::string* w)
        {
            if (inv != "read" || !w)
            {
                return std::nullopt;
            }
            auto p = parse_payload(*w);
            if (p.name != "val" || !p.arg)
            {
                return std::nullopt;
            }
            try
            {
                return std::stoll(*p.arg);
            }
            catch (const std::exception&)
            {
                return std::nullopt;
            }
        }

        std::string verdict_name(Verdict v) { return std::string(to_string(v)); }

        class TrivialYes final : public MonitorProgram
        {
        public:
            std::string id() const override { return "trivial_yes"; }
            void declare(SharedMemory&, int) const override {}
            Json initial_locals(int, int) const override { return Json::object(); }
            std::optional<Request> next(Block block, std::size_t pc, const Json&, const MonitorContext&) const override
            {
                if (block == Block::Report && pc == 0)
                {
                    return Request::report(Verdict::Yes);
                }
                return std::nullopt;
            }
            void absorb(Block, std::size_t, Json&, const MonitorContext&, const Json&) const override {}
            std::size_t step_bound(Block block, int) const override { return block == Block::Report ? 1 : 0; }
        };

        class Pattern final : public MonitorProgram
        {
        public:
            Pattern(int proc, PatternMode mode, std::size_t k) : proc_(proc), mode_(mode), k_(k)
            {
                if (mode == PatternMode::Every && k == 0)
                {
                    throw ConfigError("pattern period must be positive");
                }
            }

            std::string id() const override
            {
                static constexpr const char* names[] = {"every", "once", "until", "yes"};
                return "pattern:" + std::to_string(proc_) + ":" + names[static_cast<int>(mode_)] + ":" +
                       std::to_string(k_);
            }
            void declare(SharedMemory&, int) const override {}
            Json initial_locals(int, int) const override { return Json::object(); }

            std::optional<Request> next(Block block, std::size_t pc, const Json&,
                                        const MonitorContext& ctx) const override
            {
                if (block != Block::Report || pc != 0)
                {
                    return std::nullopt;
                }
                return Request::report(verdict(ctx.proc, ctx.iteration));
            }
            void absorb(Block, std::size_t, Json&, const MonitorContext&, const Json&) const override {}
            std::size_t step_bound(Block block, int) const override { return block == Block::Report ? 1 : 0; }

        private:
            Verdict verdict(int proc, std::size_t it) const
            {
                if (proc != proc_)
                {
                    return Verdict::Yes;
                }
                bool no = false;
                switch (mode_)
                {
                case PatternMode::Every:
                    no = it % k_ == 0;
                    break;
                case PatternMode::Once:
                    no = it == k_;
                    break;
                case PatternMode::Until:
                    no = it < k_;
                    break;
                case PatternMode::Yes:
                    break;
                }
                return no ? Verdict::No : Verdict::Yes;
            }

            int proc_;
            PatternMode mode_;
            std::size_t k_;
        };

        // Shared state and steps common to the two counter monitors.
        struct CounterCore
        {
            static Json locals()
            {
                return {{"prev_read", 0}, {"prev_incs", 0}, {"count", 0}, {"flag", false}, {"curr_read", 0},
                        {"curr_incs", 0}, {"own", 0},       {"fresh", false}};
            }

            static std::optional<Request> pre(std::size_t pc, const Json& l, const MonitorContext& ctx)
            {
                if (*ctx.v != "inc")
                {
                    return std::nullopt;
                }
                if (pc == 0)
                {
                    return Request::local("count+1");
                }
                if (pc == 1)
                {
                    return Request::write(SharedMemory::entry("INCS", ctx.proc), l["count"]);
                }
                return std::nullopt;
            }

            static void absorb_pre(std::size_t pc, Json& l)
            {
                if (pc == 0)
                {
                    l["count"] = l["count"].get<long long>() + 1;
                }
            }

            static void absorb_incs(Json& l, const MonitorContext& ctx, const Json& snap)
            {
                long long total = 0;
                for (const auto& x : snap)
                {
                    total += x.get<long long>();
                }
                l["curr_incs"] = total;
                l["own"] = snap[static_cast<std::size_t>(ctx.proc - 1)];
                auto r = read_value(*ctx.v, ctx.w);
                l["fresh"] = r.has_value();
                if (r)
                {
                    l["curr_read"] = *r;
                }
            }

            // 0: no clause fired, 1: sticky flag, 2: props 1-2, 3: prop 3.
            static int clause(const Json& l)
            {
                auto curr_read = l["curr_read"].get<long long>();
                auto curr_incs = l["curr_incs"].get<long long>();
                if (l["flag"].get<bool>())
                {
                    return 1;
                }
                if (l["fresh"].get<bool>() &&
                    (curr_read < l["own"].get<long long>() || curr_read < l["prev_read"].get<long long>()))
                {
                    return 2;
                }
                if (curr_read != curr_incs || l["prev_incs"].get<long long>() < curr_incs)
                {
                    return 3;
                }
                return 0;
            }

            static void absorb_report(Json& l)
            {
                if (clause(l) == 2)
                {
                    l["flag"] = true;
                }
                l["prev_read"] = l["curr_read"];
                l["prev_incs"] = l["curr_incs"];
            }
        };

        class WecMonitor final : public MonitorProgram
        {
        public:
            std::string id() const override { return "wec"; }
            void declare(SharedMemory& m, int n) const override { m.declare_array("INCS", n, 0); }
            Json initial_locals(int, int) const override { return CounterCore::locals(); }

            std::optional<Request> next(Block block, std::size_t pc, const Json& l,
                                        const MonitorContext& ctx) const override
            {
                switch (block)
                {
                case Block::Pre:
                    return CounterCore::pre(pc, l, ctx);
                case Block::Post:
                    return pc == 0 ? std::optional(Request::snapshot("INCS")) : std::nullopt;
                case Block::Report:
                    return pc == 0 ? std::optional(Request::report(CounterCore::clause(l) ? Verdict::No : Verdict::Yes))
                                   : std::nullopt;
                }
                return std::nullopt;
            }

            void absorb(Block block, std::size_t pc, Json& l, const MonitorContext& ctx,
                        const Json& result) const override
            {
                if (block == Block::Pre)
                {
                    CounterCore::absorb_pre(pc, l);
                }
                else if (block == Block::Post)
                {
                    CounterCore::absorb_incs(l, ctx, result);
                }
                else
                {
                    CounterCore::absorb_report(l);
                }
            }

            std::size_t step_bound(Block block, int) const override { return block == Block::Pre ? 2 : 1; }
        };

        Json triple(const MonitorContext& ctx)
        {
            return {{"k", ctx.iteration}, {"v", *ctx.v}, {"w", *ctx.w}, {"c", (*ctx.view)["c"]}};
        }

        // Longest known invocation list of every process across a snapshot.
        std::vector<std::vector<std::string>> merged_invocations(const Json& snapshot, int n)
        {
            std::vector<std::vector<std::string>> out(static_cast<std::size_t>(n));
            for (const auto& entry : snapshot)
            {
                if (!entry.is_object() || !entry.contains("inv"))
                {
                    continue;
                }
                const auto& inv = entry["inv"];
                for (std::size_t q = 0; q < out.size() && q < inv.size(); ++q)
                {
                    if (inv[q].size() > out[q].size())
                    {
                        out[q] = inv[q].get<std::vector<std::string>>();
                    }
                }
            }
            return out;
        }

        bool clause_four(const Json& snapshot, int n)
        {
            auto inv = merged_invocations(snapshot, n);
            std::vector<std::vector<long long>> prefix_incs(inv.size());
            for (std::size_t q = 0; q < inv.size(); ++q)
            {
                prefix_incs[q].push_back(0);
                for (const auto& s : inv[q])
                {
                    prefix_incs[q].push_back(prefix_incs[q].back() + (s == "inc" ? 1 : 0));
                }
            }
            for (const auto& entry : snapshot)
            {
                if (!entry.is_object())
                {
                    continue;
                }
                for (const auto& t : entry["t"])
                {
                    auto w = t["w"].get<std::string>();
                    auto r = read_value(t["v"].get<std::string>(), &w);
                    if (!r)
                    {
                        continue;
                    }
                    long long incs = 0;
                    const auto& c = t["c"];
                    for (std::size_t q = 0; q < c.size() && q < prefix_incs.size(); ++q)
                    {
                        auto k = std::min(c[q].get<std::size_t>(), prefix_incs[q].size() - 1);
                        incs += prefix_incs[q][k];
                    }
                    if (*r > incs)
                    {
                        return true;
                    }
                }
            }
            return false;
        }

        class SecMonitor final : public MonitorProgram
        {
        public:
            std::string id() const override { return "sec"; }
            void declare(SharedMemory& m, int n) const override
            {
                m.declare_array("INCS", n, 0);
                m.declare_array("M", n, Json::object({{"t", Json::array()}, {"inv", Json::array()}}));
            }
            Json initial_locals(int, int) const override
            {
                auto l = CounterCore::locals();
                l["s"] = Json::array();
                l["inv"] = Json::array();
                l["c4"] = false;
                return l;
            }

            std::optional<Request> next(Block block, std::size_t pc, const Json& l,
                                        const MonitorContext& ctx) const override
            {
                switch (block)
                {
                case Block::Pre:
                    return CounterCore::pre(pc, l, ctx);
                case Block::Post:
                    switch (pc)
                    {
                    case 0:
                        return Request::snapshot("INCS");
                    case 1:
                        return Request::local("s+=(v,w,view)");
                    case 2:
                        return Request::write(SharedMemory::entry("M", ctx.proc), {{"t", l["s"]}, {"inv", l["inv"]}});
                    case 3:
                        return Request::snapshot("M");
                    default:
                        return std::nullopt;
                    }
                case Block::Report:
                    if (pc != 0)
                    {
                        return std::nullopt;
                    }
                    return Request::report(CounterCore::clause(l) || l["c4"].get<bool>() ? Verdict::No
                                                                                         : Verdict::Yes);
                }
                return std::nullopt;
            }

            void absorb(Block block, std::size_t pc, Json& l, const MonitorContext& ctx,
                        const Json& result) const override
            {
                if (block == Block::Pre)
                {
                    CounterCore::absorb_pre(pc, l);
                    return;
                }
                if (block == Block::Report)
                {
                    CounterCore::absorb_report(l);
                    return;
                }
                switch (pc)
                {
                case 0:
                    CounterCore::absorb_incs(l, ctx, result);
                    break;
                case 1:
                    l["s"].push_back(triple(ctx));
                    l["inv"] = (*ctx.view)["inv"];
                    break;
                case 3:
                    l["c4"] = clause_four(result, ctx.n);
                    break;
                default:
                    break;
                }
            }

            std::size_t step_bound(Block block, int) const override
            {
                switch (block)
                {
                case Block::Pre:
                    return 2;
                case Block::Post:
                    return 4;
                case Block::Report:
                    return 1;
                }
                return 0;
            }
            bool requires_views() const override { return true; }
        };

        class LinMonitor final : public MonitorProgram
        {
        public:
            LinMonitor(SequentialSpec spec, std::size_t cap) : spec_(spec), cap_(cap) {}

            std::string id() const override { return "lin:" + std::string(spec_.name()); }
            void declare(SharedMemory& m, int n) const override
            {
                m.declare_array("M", n, Json::object({{"t", Json::array()}, {"inv", Json::array()}}));
            }
            Json initial_locals(int, int) const override
            {
                return {{"s", Json::array()}, {"inv", Json::array()}, {"ok", true}, {"cap_hit", 0}};
            }

            std::optional<Request> next(Block block, std::size_t pc, const Json& l,
                                        const MonitorContext& ctx) const override
            {
                if (block == Block::Post)
                {
                    switch (pc)
                    {
                    case 0:
                        return Request::local("s+=(v,w,view)");
                    case 1:
                        return Request::write(SharedMemory::entry("M", ctx.proc), {{"t", l["s"]}, {"inv", l["inv"]}});
                    case 2:
                        return Request::snapshot("M");
                    default:
                        return std::nullopt;
                    }
                }
                if (block == Block::Report && pc == 0)
                {
                    return Request::report(l["ok"].get<bool>() ? Verdict::Yes : Verdict::No);
                }
                return std::nullopt;
            }

            void absorb(Block block, std::size_t pc, Json& l, const MonitorContext& ctx,
                        const Json& result) const override
            {
                if (block != Block::Post)
                {
                    return;
                }
                if (pc == 0)
                {
                    l["s"].push_back(triple(ctx));
                    l["inv"] = (*ctx.view)["inv"];
                }
                else if (pc == 2 && l["ok"].get<bool>())
                {
                    // Histories only grow by extension, and a non-linearizable
                    // history stays so under extension: once false, kept false.
                    auto h = history_from_triples(result, ctx.n);
                    try
                    {
                        l["ok"] = linearizable(h.word, spec_, cap_);
                    }
                    catch (const CapExceeded&)
                    {
                        l["cap_hit"] = l["cap_hit"].get<int>() + 1;
                    }
                }
            }

            std::size_t step_bound(Block block, int) const override
            {
                return block == Block::Post ? 3 : block == Block::Report ? 1 : 0;
            }
            bool requires_views() const override { return true; }

        private:
            SequentialSpec spec_;
            std::size_t cap_;
        };

        class LedgerProbe final : public MonitorProgram
        {
        public:
            std::string id() const override { return "ledger_probe"; }
            void declare(SharedMemory& m, int n) const override { m.declare_array("L", n, Json::array()); }
            Json initial_locals(int, int) const override
            {
                return {{"mine", Json::array()}, {"seen", Json::array()}};
            }

            std::optional<Request> next(Block block, std::size_t pc, const Json& l,
                                        const MonitorContext& ctx) const override
            {
                switch (block)
                {
                case Block::Pre:
                    if (parse_payload(*ctx.v).name != "append")
                    {
                        return std::nullopt;
                    }
                    if (pc == 0)
                    {
                        return Request::local("mine+=" + *ctx.v);
                    }
                    return pc == 1 ? std::optional(Request::write(SharedMemory::entry("L", ctx.proc), l["mine"]))
                                   : std::nullopt;
                case Block::Post:
                    return pc == 0 ? std::optional(Request::snapshot("L")) : std::nullopt;
                case Block::Report:
                    return pc == 0 ? std::optional(Request::report(missing(l, ctx) ? Verdict::No : Verdict::Yes))
                                   : std::nullopt;
                }
                return std::nullopt;
            }

            void absorb(Block block, std::size_t pc, Json& l, const MonitorContext& ctx,
                        const Json& result) const override
            {
                if (block == Block::Pre && pc == 0)
                {
                    l["mine"].push_back(*parse_payload(*ctx.v).arg);
                }
                else if (block == Block::Post)
                {
                    l["seen"] = result;
                }
            }

            std::size_t step_bound(Block block, int) const override { return block == Block::Pre ? 2 : 1; }

        private:
            // A get response that lacks a record announced before it was read.
            static bool missing(const Json& l, const MonitorContext& ctx)
            {
                if (*ctx.v != "get" || !ctx.w)
                {
                    return false;
                }
                auto got = list_records(*ctx.w);
                std::sort(got.begin(), got.end());
                std::vector<std::string> announced;
                for (const auto& entry : l["seen"])
                {
                    for (const auto& r : entry)
                    {
                        announced.push_back(r.get<std::string>());
                    }
                }
                std::sort(announced.begin(), announced.end());
                return !std::includes(got.begin(), got.end(), announced.begin(), announced.end());
            }
        };

        int stabilization_depth(const MonitorProgram& m)
        {
            int depth = 0;
            for (auto id = m.id(); id.rfind("stabilized:", 0) == 0; id = id.substr(id.find(':', 11) + 1))
            {
                ++depth;
            }
            return depth;
        }

        class Stabilized final : public MonitorProgram
        {
        public:
            Stabilized(Stabilization kind, MonitorPtr inner)
                : kind_(kind), inner_(std::move(inner)),
                  prefix_(std::string(to_string(kind)) + std::to_string(stabilization_depth(*inner_) + 1) + ".")
            {
            }

            std::string id() const override
            {
                return "stabilized:" + std::string(to_string(kind_)) + ":" + inner_->id();
            }

            void declare(SharedMemory& m, int n) const override
            {
                inner_->declare(m, n);
                if (kind_ == Stabilization::SD)
                {
                    m.declare_register(flag(), false);
                }
                else
                {
                    m.declare_array(array(), n, 0);
                }
            }

            Json initial_locals(int proc, int n) const override
            {
                return {{"in", inner_->initial_locals(proc, n)},
                        {"d", nullptr},
                        {"m", 0},
                        {"flag", false},
                        {"prev", Json(std::vector<long long>(static_cast<std::size_t>(n), 0))},
                        {"snap", nullptr}};
            }

            std::optional<Request> next(Block block, std::size_t pc, const Json& l,
                                        const MonitorContext& ctx) const override
            {
                if (block != Block::Report)
                {
                    return inner_->next(block, pc, l["in"], ctx);
                }
                if (l["d"].is_null())
                {
                    auto req = inner_->next(block, pc, l["in"], ctx);
                    if (!req || req->kind != Request::Kind::Report)
                    {
                        return req;
                    }
                    return Request::local("d=" + verdict_name(req->verdict));
                }
                return tail(pc - l["m"].get<std::size_t>() - 1, l, ctx);
            }

            void absorb(Block block, std::size_t pc, Json& l, const MonitorContext& ctx,
                        const Json& result) const override
            {
                if (block != Block::Report)
                {
                    inner_->absorb(block, pc, l["in"], ctx, result);
                    return;
                }
                if (l["d"].is_null())
                {
                    auto req = inner_->next(block, pc, l["in"], ctx);
                    inner_->absorb(block, pc, l["in"], ctx, result);
                    if (req && req->kind == Request::Kind::Report)
                    {
                        l["d"] = verdict_name(req->verdict);
                        l["m"] = pc;
                    }
                    return;
                }
                auto req = tail(pc - l["m"].get<std::size_t>() - 1, l, ctx);
                if (req->kind == Request::Kind::Read)
                {
                    l["flag"] = result;
                }
                else if (req->kind == Request::Kind::Snapshot)
                {
                    l["snap"] = result;
                }
                else if (req->kind == Request::Kind::Report)
                {
                    if (kind_ != Stabilization::SD)
                    {
                        l["prev"] = l["snap"];
                    }
                    l["d"] = nullptr;
                    l["m"] = 0;
                    l["flag"] = false;
                    l["snap"] = nullptr;
                }
            }

            std::size_t step_bound(Block block, int n) const override
            {
                return inner_->step_bound(block, n) + (block == Block::Report ? 3 : 0);
            }
            bool requires_views() const override { return inner_->requires_views(); }

        private:
            std::string flag() const { return prefix_ + "FLAG"; }
            std::string array() const { return prefix_ + "C"; }

            // The added report code after the inner decision d.
            std::optional<Request> tail(std::size_t e, const Json& l, const MonitorContext& ctx) const
            {
                bool d_no = l["d"].get<std::string>() == "NO";
                if (kind_ == Stabilization::SD)
                {
                    if (e == 0)
                    {
                        return Request::read(flag());
                    }
                    if (l["flag"].get<bool>())
                    {
                        return e == 1 ? std::optional(Request::report(Verdict::No)) : std::nullopt;
                    }
                    if (d_no && e == 1)
                    {
                        return Request::write(flag(), true);
                    }
                    if (e == (d_no ? 2u : 1u))
                    {
                        return Request::report(d_no ? Verdict::No : Verdict::Yes);
                    }
                    return std::nullopt;
                }
                std::size_t base = d_no ? 1 : 0;
                if (d_no && e == 0)
                {
                    auto i = static_cast<std::size_t>(ctx.proc - 1);
                    return Request::write(SharedMemory::entry(array(), ctx.proc), l["prev"][i].get<long long>() + 1);
                }
                if (e == base)
                {
                    return Request::snapshot(array());
                }
                if (e == base + 1)
                {
                    const auto& snap = l["snap"];
                    const auto& prev = l["prev"];
                    bool grew = false, same = false;
                    for (std::size_t j = 0; j < snap.size(); ++j)
                    {
                        grew = grew || snap[j].get<long long>() > prev[j].get<long long>();
                        same = same || snap[j].get<long long>() == prev[j].get<long long>();
                    }
                    if (kind_ == Stabilization::WAD)
                    {
                        return Request::report(grew ? Verdict::No : Verdict::Yes);
                    }
                    return Request::report(same ? Verdict::Yes : Verdict::No);
                }
                return std::nullopt;
            }

            Stabilization kind_;
            MonitorPtr inner_;
            std::string prefix_;
        };

        std::vector<std::string> split(const std::string& s, char sep)
        {
            std::vector<std::string> out;
            std::size_t start = 0;
            for (;;)
            {
                auto pos = s.find(sep, start);
                out.push_back(s.substr(start, pos - start));
                if (pos == std::string::npos)
                {
                    return out;
                }
                start = pos + 1;
            }
        }
    } // namespace

    MonitorPtr trivial_yes() { return std::make_shared<TrivialYes>(); }
    MonitorPtr pattern_monitor(int proc, PatternMode mode, std::size_t k)
    {
        return std::make_shared<Pattern>(proc, mode, k);
    }
    MonitorPtr wec_monitor() { return std::make_shared<WecMonitor>(); }
    MonitorPtr sec_monitor() { return std::make_shared<SecMonitor>(); }
    MonitorPtr lin_monitor(const SequentialSpec& spec, std::size_t cap)
    {
        return std::make_shared<LinMonitor>(spec, cap);
    }
    MonitorPtr ledger_probe() { return std::make_shared<LedgerProbe>(); }
    MonitorPtr stabilize(Stabilization kind, MonitorPtr inner)
    {
        if (!inner)
        {
            throw ConfigError("stabilization needs an inner monitor");
        }
        return std::make_shared<Stabilized>(kind, std::move(inner));
    }

    MonitorPtr make_monitor(const std::string& id)
    {
        if (id == "trivial_yes")
        {
            return trivial_yes();
        }
        if (id == "wec")
        {
            return wec_monitor();
        }
        if (id == "sec")
        {
            return sec_monitor();
        }
        if (id == "ledger_probe")
        {
            return ledger_probe();
        }
        if (id.rfind("lin:", 0) == 0)
        {
            auto object = id.substr(4);
            for (auto kind : {ObjectKind::Register, ObjectKind::Ledger, ObjectKind::Counter})
            {
                if (to_string(kind) == object)
                {
                    return lin_monitor(SequentialSpec::make(kind));
                }
            }
            throw ConfigError("unknown object '" + object + "' in monitor id '" + id + "'");
        }
        if (id.rfind("stabilized:", 0) == 0)
        {
            auto rest = id.substr(11);
            auto colon = rest.find(':');
            if (colon == std::string::npos)
            {
                throw ConfigError("monitor id '" + id + "' lacks an inner monitor");
            }
            auto kind = rest.substr(0, colon);
            for (auto k : {Stabilization::SD, Stabilization::WAD, Stabilization::WOD})
            {
                if (to_string(k) == kind)
                {
                    return stabilize(k, make_monitor(rest.substr(colon + 1)));
                }
            }
            throw ConfigError("unknown stabilization '" + kind + "'");
        }
        if (id.rfind("pattern:", 0) == 0)
        {
            auto parts = split(id, ':');
            if (parts.size() != 4)
            {
                throw ConfigError("pattern id must be pattern:<p>:<mode>:<k>");
            }
            static const std::map<std::string, PatternMode> modes = {
                {"every", PatternMode::Every}, {"once", PatternMode::Once},
                {"until", PatternMode::Until}, {"yes", PatternMode::Yes}};
            auto mode = modes.find(parts[2]);
            if (mode == modes.end())
            {
                throw ConfigError("unknown pattern mode '" + parts[2] + "'");
            }
            try
            {
                return pattern_monitor(std::stoi(parts[1]), mode->second, std::stoul(parts[3]));
            }
            catch (const std::logic_error&)
            {
                throw ConfigError("bad number in monitor id '" + id + "'");
            }
        }
        throw ConfigError("unknown monitor '" + id + "'");
    }

    Sketch history_from_triples(const Json& snapshot, int n)
    {
        auto inv = merged_invocations(snapshot, n);
        auto key = [n](int p, std::size_t k) { return static_cast<Uid>(k) * static_cast<Uid>(n) + (p - 1); };
        std::map<Uid, SketchOp> ops;
        for (std::size_t j = 0; j < snapshot.size(); ++j)
        {
            const auto& entry = snapshot[j];
            if (!entry.is_object())
            {
                continue;
            }
            int p = static_cast<int>(j) + 1;
            for (const auto& t : entry["t"])
            {
                auto k = t["k"].get<std::size_t>();
                std::vector<Uid> view;
                const auto& c = t["c"];
                for (std::size_t q = 0; q < c.size(); ++q)
                {
                    for (std::size_t i = 0; i < c[q].get<std::size_t>(); ++i)
                    {
                        view.push_back(key(static_cast<int>(q) + 1, i));
                    }
                }
                std::sort(view.begin(), view.end());
                ops[key(p, k)] = SketchOp{key(p, k), p, t["v"].get<std::string>(), t["w"].get<std::string>(),
                                          std::move(view)};
            }
        }
        // Invocations seen in views but with no triple yet are pending.
        for (std::size_t q = 0; q < inv.size(); ++q)
        {
            for (std::size_t i = 0; i < inv[q].size(); ++i)
            {
                auto k = key(static_cast<int>(q) + 1, i);
                if (!ops.count(k))
                {
                    ops[k] = SketchOp{k, static_cast<int>(q) + 1, inv[q][i], std::nullopt, std::nullopt};
                }
            }
        }
        std::vector<SketchOp> list;
        for (auto& [k, op] : ops)
        {
            list.push_back(std::move(op));
        }
        return build_sketch(std::move(list), n);
    }
} // namespace drv
