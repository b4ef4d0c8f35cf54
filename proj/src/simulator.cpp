#include "drv/simulator.hpp"

#include "drv/errors.hpp"

#include <algorithm>
#include <random>

namespace drv
{
    namespace
    {
        const std::string kWrapperArray = "AT.M";

        struct Process
        {
            Phase phase = Phase::Pick;
            std::size_t iteration = 0;
            std::size_t pc = 0;
            std::string v;
            std::string w;
            bool received = false;
            Json view;   // null unless timed and received
            Json locals;
            Json wrap;   // timed wrapper state
            std::optional<Verdict> last;
            std::optional<StepKind> last_kind;

            std::string serialize() const
            {
                Json j = {
                    {"phase", to_string(phase)},
                    {"it", iteration},
                    {"pc", pc},
                    {"v", v},
                    {"w", received ? Json(w) : Json()},
                    {"view", view},
                    {"locals", locals},
                    {"wrap", wrap},
                    {"last", last ? Json(std::string(to_string(*last))) : Json()},
                };
                return j.dump();
            }
        };

        class Simulator
        {
        public:
            Simulator(std::shared_ptr<const MonitorProgram> monitor, Adversary& adversary, const RunOptions& options)
                : monitor_(std::move(monitor)), adversary_(adversary), timed_(adversary.timed())
            {
                if (!monitor_)
                {
                    throw ConfigError("no monitor given");
                }
                if (options.n < 1)
                {
                    throw ConfigError("process count must be positive");
                }
                if (options.horizon < 1)
                {
                    throw ConfigError("horizon must be at least 1");
                }
                if (monitor_->requires_views() && !timed_)
                {
                    throw ConfigError("monitor '" + monitor_->id() + "' needs views from a timed adversary");
                }
                e_.n = options.n;
                e_.seed = options.seed;
                e_.horizon = options.horizon;
                e_.timed = timed_;
                e_.monitor = monitor_;
                monitor_->declare(e_.memory, e_.n);
                if (timed_)
                {
                    e_.memory.declare_array(kWrapperArray, e_.n, Json::array());
                }
                procs_.resize(static_cast<std::size_t>(e_.n));
                e_.local_traces.resize(procs_.size());
                e_.reports.resize(procs_.size());
                for (int p = 1; p <= e_.n; ++p)
                {
                    auto& st = proc(p);
                    st.locals = monitor_->initial_locals(p, e_.n);
                    if (timed_)
                    {
                        st.wrap = {{"s", Json::array()}, {"w", nullptr}, {"snap", nullptr}, {"view", nullptr}};
                    }
                    e_.local_traces[static_cast<std::size_t>(p - 1)].push_back(st.serialize());
                }
            }

            std::size_t steps() const { return e_.steps.size(); }

            bool at_boundary(int p, Until until)
            {
                const auto& st = proc(p);
                switch (until)
                {
                case Until::Step:
                    return false;
                case Until::PreDone:
                    return st.phase == Phase::Send;
                case Until::Sent:
                    return st.phase == (timed_ ? Phase::At4 : Phase::Receive);
                case Until::Received:
                    return st.last_kind == StepKind::Receive;
                case Until::Reported:
                    return st.phase == Phase::Pick;
                }
                return true;
            }

            void step(int p)
            {
                auto& st = proc(p);
                StepRecord rec;
                rec.index = e_.steps.size() + 1;
                rec.proc = p;
                rec.phase = st.phase;
                rec.iteration = st.iteration;
                rec.tag = OpTag{p, st.iteration};
                switch (st.phase)
                {
                case Phase::Pick:
                    st.v = adversary_.pick(p, st.iteration);
                    rec.kind = StepKind::Local;
                    rec.detail = "pick " + st.v;
                    rec.payload = st.v;
                    st.phase = Phase::Pre;
                    st.pc = 0;
                    break;
                case Phase::Pre:
                    block_step(p, Block::Pre, rec);
                    break;
                case Phase::Post:
                    block_step(p, Block::Post, rec);
                    break;
                case Phase::Report:
                    block_step(p, Block::Report, rec);
                    break;
                case Phase::Send: {
                    Uid uid = next_uid_++;
                    e_.tag_uid[rec.tag] = uid;
                    rec.kind = StepKind::Send;
                    rec.symbol = Symbol{p, Kind::Inv, st.v, uid};
                    rec.detail = "INV " + st.v + " uid=" + std::to_string(uid);
                    if (timed_)
                    {
                        st.phase = Phase::At1;
                    }
                    else
                    {
                        adversary_.on_send(p, st.iteration, st.v);
                        st.phase = Phase::Receive;
                    }
                    break;
                }
                case Phase::At1:
                    st.wrap["s"].push_back(st.v);
                    rec.kind = StepKind::Local;
                    rec.detail = "at1 s+=" + st.v;
                    st.phase = Phase::At2;
                    break;
                case Phase::At2: {
                    rec.kind = StepKind::Write;
                    rec.target = SharedMemory::entry(kWrapperArray, p);
                    e_.memory.write(rec.target, st.wrap["s"]);
                    rec.detail = rec.target + "=" + st.wrap["s"].dump();
                    st.phase = Phase::At3;
                    break;
                }
                case Phase::At3:
                    adversary_.on_send(p, st.iteration, st.v);
                    rec.kind = StepKind::Local;
                    rec.detail = "at3 send " + st.v;
                    st.phase = Phase::At4;
                    break;
                case Phase::At4: {
                    auto w = adversary_.respond(p, st.iteration, st.v);
                    st.wrap["w"] = w;
                    rec.kind = StepKind::Local;
                    rec.detail = "at4 receive " + w;
                    rec.payload = w;
                    st.phase = Phase::At5;
                    break;
                }
                case Phase::At5: {
                    rec.kind = StepKind::Snapshot;
                    rec.target = kWrapperArray;
                    st.wrap["snap"] = e_.memory.snapshot(kWrapperArray);
                    rec.detail = kWrapperArray + "->" + st.wrap["snap"].dump();
                    st.phase = Phase::At6;
                    break;
                }
                case Phase::At6: {
                    Json counts = Json::array();
                    for (const auto& entry : st.wrap["snap"])
                    {
                        counts.push_back(entry.size());
                    }
                    st.wrap["view"] = {{"c", counts}, {"inv", st.wrap["snap"]}};
                    st.wrap["snap"] = nullptr;
                    rec.kind = StepKind::Local;
                    rec.detail = "at6 view c=" + counts.dump();
                    st.phase = Phase::Receive;
                    break;
                }
                case Phase::Receive: {
                    if (timed_)
                    {
                        st.w = st.wrap["w"].get<std::string>();
                        st.view = st.wrap["view"];
                        st.wrap["w"] = nullptr;
                        st.wrap["view"] = nullptr;
                        rec.view = st.view["c"].get<ViewCounts>();
                    }
                    else
                    {
                        st.w = adversary_.respond(p, st.iteration, st.v);
                    }
                    st.received = true;
                    rec.payload = st.w;
                    Uid uid = next_uid_++;
                    rec.kind = StepKind::Receive;
                    rec.symbol = Symbol{p, Kind::Resp, st.w, uid};
                    rec.detail = "RESP " + st.w + " uid=" + std::to_string(uid);
                    if (rec.view)
                    {
                        rec.detail += " view={";
                        auto uids = view_uids(e_, *rec.view);
                        for (std::size_t i = 0; i < uids.size(); ++i)
                        {
                            rec.detail += (i ? "," : "") + std::to_string(uids[i]);
                        }
                        rec.detail += "}";
                    }
                    st.phase = Phase::Post;
                    st.pc = 0;
                    break;
                }
                }
                st.last_kind = rec.kind;
                resolve(p);
                auto& trace = e_.local_traces[static_cast<std::size_t>(p - 1)];
                auto state = st.serialize();
                if (trace.back() != state)
                {
                    trace.push_back(std::move(state));
                }
                e_.steps.push_back(std::move(rec));
            }

            Execution finish() { return std::move(e_); }

        private:
            Process& proc(int p) { return procs_[static_cast<std::size_t>(p - 1)]; }

            MonitorContext context(int p)
            {
                auto& st = proc(p);
                MonitorContext ctx;
                ctx.proc = p;
                ctx.n = e_.n;
                ctx.iteration = st.iteration;
                ctx.v = &st.v;
                ctx.w = st.received ? &st.w : nullptr;
                ctx.view = st.view.is_null() ? nullptr : &st.view;
                return ctx;
            }

            // Skips blocks that have no further request.
            void resolve(int p)
            {
                auto& st = proc(p);
                if (st.phase == Phase::Pre && !monitor_->next(Block::Pre, st.pc, st.locals, context(p)))
                {
                    st.phase = Phase::Send;
                    st.pc = 0;
                }
                if (st.phase == Phase::Post && !monitor_->next(Block::Post, st.pc, st.locals, context(p)))
                {
                    st.phase = Phase::Report;
                    st.pc = 0;
                }
                if (st.phase == Phase::Report && !monitor_->next(Block::Report, st.pc, st.locals, context(p)))
                {
                    throw Error("report block of monitor '" + monitor_->id() + "' ended without a report");
                }
            }

            void block_step(int p, Block block, StepRecord& rec)
            {
                auto& st = proc(p);
                auto ctx = context(p);
                auto req = monitor_->next(block, st.pc, st.locals, ctx);
                if (st.pc >= monitor_->step_bound(block, e_.n))
                {
                    throw WaitFreeViolation("monitor '" + monitor_->id() + "' exceeded its " +
                                            std::string(to_string(block)) + " block bound of " +
                                            std::to_string(monitor_->step_bound(block, e_.n)) + " steps");
                }
                Json result;
                rec.target = req->target;
                switch (req->kind)
                {
                case Request::Kind::Local:
                    rec.kind = StepKind::Local;
                    rec.detail = req->detail;
                    break;
                case Request::Kind::Write:
                    rec.kind = StepKind::Write;
                    e_.memory.write(req->target, req->value);
                    rec.detail = req->target + "=" + req->value.dump();
                    break;
                case Request::Kind::Read:
                    rec.kind = StepKind::Read;
                    result = e_.memory.read(req->target);
                    rec.detail = req->target + "->" + result.dump();
                    break;
                case Request::Kind::Snapshot:
                    rec.kind = StepKind::Snapshot;
                    result = e_.memory.snapshot(req->target);
                    rec.detail = req->target + "->" + result.dump();
                    break;
                case Request::Kind::Report:
                    if (block != Block::Report)
                    {
                        throw Error("monitor '" + monitor_->id() + "' reported outside its report block");
                    }
                    rec.kind = StepKind::Report;
                    rec.verdict = req->verdict;
                    rec.detail = std::string(to_string(req->verdict));
                    break;
                }
                monitor_->absorb(block, st.pc, st.locals, ctx, result);
                if (req->kind == Request::Kind::Report)
                {
                    e_.reports[static_cast<std::size_t>(p - 1)].push_back(
                        Report{rec.index, st.iteration, req->verdict});
                    st.last = req->verdict;
                    ++st.iteration;
                    st.phase = Phase::Pick;
                    st.pc = 0;
                    st.v.clear();
                    st.w.clear();
                    st.received = false;
                    st.view = nullptr;
                    return;
                }
                ++st.pc;
            }

            std::shared_ptr<const MonitorProgram> monitor_;
            Adversary& adversary_;
            bool timed_;
            Execution e_;
            std::vector<Process> procs_;
            Uid next_uid_ = 0;
        };

        class Driver
        {
        public:
            Driver(Simulator& sim, const Schedule& schedule, const RunOptions& options)
                : sim_(sim), schedule_(schedule), n_(options.n), horizon_(options.horizon), rng_(schedule.seed)
            {
            }

            void run()
            {
                for (const auto& b : schedule_.script)
                {
                    if (done())
                    {
                        return;
                    }
                    burst(b);
                }
                switch (schedule_.policy)
                {
                case Policy::Stop:
                    return;
                case Policy::Explicit:
                    for (int p : schedule_.sequence)
                    {
                        if (done())
                        {
                            return;
                        }
                        if (p < 1 || p > n_)
                        {
                            throw ConfigError("explicit schedule names process " + std::to_string(p));
                        }
                        sim_.step(p);
                    }
                    return;
                case Policy::RoundRobin:
                    cycle([&](int p) { burst(Burst{p, Until::Step}); });
                    return;
                case Policy::Random:
                    random_loop([&](int p) { burst(Burst{p, Until::Step}); });
                    return;
                case Policy::RandomBurst:
                    random_loop([&](int p) {
                        static constexpr Until kinds[] = {Until::Step, Until::PreDone, Until::Sent, Until::Received,
                                                          Until::Reported};
                        burst(Burst{p, kinds[rng_() % 5]});
                    });
                    return;
                case Policy::TightSequential:
                    cycle([&](int p) {
                        burst(Burst{p, Until::Sent});
                        burst(Burst{p, Until::Reported});
                    });
                    return;
                case Policy::Tight:
                    while (!done())
                    {
                        auto before = sim_.steps();
                        for (int p = 1; p <= n_; ++p)
                        {
                            burst(Burst{p, Until::Sent});
                        }
                        for (int p = 1; p <= n_; ++p)
                        {
                            burst(Burst{p, Until::Reported});
                        }
                        if (sim_.steps() == before)
                        {
                            return;
                        }
                    }
                    return;
                }
            }

        private:
            bool done() const { return sim_.steps() >= horizon_; }

            bool alive(int p) const
            {
                auto it = schedule_.crash_after.find(p);
                return it == schedule_.crash_after.end() || sim_.steps() < it->second;
            }

            void burst(const Burst& b)
            {
                if (b.proc < 1 || b.proc > n_)
                {
                    throw ConfigError("schedule names process " + std::to_string(b.proc));
                }
                if (b.until == Until::Step)
                {
                    if (!done() && alive(b.proc))
                    {
                        sim_.step(b.proc);
                    }
                    return;
                }
                while (!done() && alive(b.proc) && !sim_.at_boundary(b.proc, b.until))
                {
                    sim_.step(b.proc);
                }
            }

            template <typename F>
            void cycle(F&& f)
            {
                while (!done())
                {
                    auto before = sim_.steps();
                    for (int p = 1; p <= n_ && !done(); ++p)
                    {
                        f(p);
                    }
                    if (sim_.steps() == before)
                    {
                        return; // every process crashed
                    }
                }
            }

            template <typename F>
            void random_loop(F&& f)
            {
                std::size_t idle = 0;
                while (!done() && idle < 64 * static_cast<std::size_t>(n_))
                {
                    auto before = sim_.steps();
                    f(1 + static_cast<int>(rng_() % static_cast<std::uint64_t>(n_)));
                    idle = sim_.steps() == before ? idle + 1 : 0;
                }
            }

            Simulator& sim_;
            const Schedule& schedule_;
            int n_;
            std::size_t horizon_;
            std::mt19937_64 rng_;
        };

        std::optional<Access> access_of(const StepRecord& s)
        {
            switch (s.kind)
            {
            case StepKind::Write:
                return parse_access(s.target, true, false);
            case StepKind::Read:
                return parse_access(s.target, false, false);
            case StepKind::Snapshot:
                return parse_access(s.target, false, true);
            default:
                return std::nullopt;
            }
        }

        bool steps_conflict(const StepRecord& a, const StepRecord& b)
        {
            if (a.proc == b.proc)
            {
                return true;
            }
            auto x = access_of(a);
            auto y = access_of(b);
            return x && y && conflicts(*x, *y);
        }

        // Each process must have taken the same steps in the same order.
        void require_same_local_steps(const Execution& a, const Execution& b)
        {
            for (int p = 1; p <= a.n; ++p)
            {
                std::vector<std::string> da, db;
                for (const auto& s : a.steps)
                {
                    if (s.proc == p)
                    {
                        da.push_back(std::string(to_string(s.kind)) + s.target);
                    }
                }
                for (const auto& s : b.steps)
                {
                    if (s.proc == p)
                    {
                        db.push_back(std::string(to_string(s.kind)) + s.target);
                    }
                }
                if (da != db)
                {
                    throw IllegalReorder("reordered run changes the steps of process " + std::to_string(p));
                }
            }
        }
    } // namespace

    Execution run(std::shared_ptr<const MonitorProgram> monitor, Adversary& adversary, const Schedule& schedule,
                  const RunOptions& options)
    {
        Simulator sim(std::move(monitor), adversary, options);
        Driver(sim, schedule, options).run();
        return sim.finish();
    }

    Execution replay(const Execution& e, const std::vector<int>& order)
    {
        ReplayAdversary adversary(e);
        RunOptions options{e.n, std::max<std::size_t>(order.size(), 1), e.seed};
        return run(e.monitor, adversary, Schedule::explicit_steps(order), options);
    }

    Execution swap_adjacent_events(const Execution& e, std::size_t i, std::size_t j)
    {
        if (i < 1 || i >= j || j > e.steps.size())
        {
            throw IllegalReorder("step indices out of range");
        }
        const auto& moved = e.steps[j - 1];
        for (std::size_t k = i; k < j; ++k)
        {
            if (steps_conflict(e.steps[k - 1], moved))
            {
                throw IllegalReorder("step " + std::to_string(j) + " cannot move before step " + std::to_string(k) +
                                     ": " + (e.steps[k - 1].proc == moved.proc ? "same process" : "shared access"));
            }
        }
        auto order = e.process_sequence();
        int p = order[j - 1];
        order.erase(order.begin() + static_cast<std::ptrdiff_t>(j - 1));
        order.insert(order.begin() + static_cast<std::ptrdiff_t>(i - 1), p);
        auto out = replay(e, order);
        require_same_local_steps(e, out);
        return out;
    }

    Execution swap_blocks(const Execution& e, std::size_t a, std::size_t b, std::size_t c)
    {
        if (a < 1 || a >= b || b >= c || c - 1 > e.steps.size())
        {
            throw IllegalReorder("block bounds out of range");
        }
        for (std::size_t x = a; x < b; ++x)
        {
            for (std::size_t y = b; y < c; ++y)
            {
                if (steps_conflict(e.steps[x - 1], e.steps[y - 1]))
                {
                    throw IllegalReorder("steps " + std::to_string(x) + " and " + std::to_string(y) +
                                         " do not commute");
                }
            }
        }
        auto seq = e.process_sequence();
        std::vector<int> order(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(a - 1));
        order.insert(order.end(), seq.begin() + static_cast<std::ptrdiff_t>(b - 1),
                     seq.begin() + static_cast<std::ptrdiff_t>(c - 1));
        order.insert(order.end(), seq.begin() + static_cast<std::ptrdiff_t>(a - 1),
                     seq.begin() + static_cast<std::ptrdiff_t>(b - 1));
        order.insert(order.end(), seq.begin() + static_cast<std::ptrdiff_t>(c - 1), seq.end());
        auto out = replay(e, order);
        require_same_local_steps(e, out);
        return out;
    }
} // namespace drv
