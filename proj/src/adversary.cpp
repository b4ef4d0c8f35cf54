#include "drv/adversary.hpp"

#include "drv/errors.hpp"

namespace drv
{
    void Adversary::on_send(int, std::size_t, const std::string&) {}

    AdversaryScript AdversaryScript::from_word(const Word& word)
    {
        require_valid(word);
        AdversaryScript script;
        script.n = word.n;
        script.ops.resize(static_cast<std::size_t>(word.n));
        for (const auto& op : match_operations(word))
        {
            script.ops[static_cast<std::size_t>(op.proc - 1)].push_back(
                ScriptedOp{op.inv_payload, op.resp_payload.value_or("")});
        }
        return script;
    }

    void AdversaryScript::validate(const SequentialSpec& spec) const
    {
        for (std::size_t p = 0; p < ops.size(); ++p)
        {
            for (const auto& op : ops[p])
            {
                if (!spec.is_invocation(op.inv) || (!op.resp.empty() && !spec.is_response(op.resp)))
                {
                    throw ConfigError("script for process " + std::to_string(p + 1) + " has operation '" + op.inv +
                                      "/" + op.resp + "' outside the " + std::string(spec.name()) + " alphabet");
                }
            }
        }
    }

    std::optional<ScriptedOp> AdversaryScript::op(int proc, std::size_t k) const
    {
        auto p = static_cast<std::size_t>(proc - 1);
        if (p < ops.size() && k < ops[p].size())
        {
            return ops[p][k];
        }
        if (tail)
        {
            std::size_t scripted = p < ops.size() ? ops[p].size() : 0;
            return tail(proc, k - scripted);
        }
        return std::nullopt;
    }

    ScriptedAdversary::ScriptedAdversary(AdversaryScript script) : script_(std::move(script)) {}

    ScriptedOp ScriptedAdversary::require(int proc, std::size_t k) const
    {
        auto op = script_.op(proc, k);
        if (!op)
        {
            throw ScriptMismatch("script has no operation " + std::to_string(k) + " for process " +
                                 std::to_string(proc));
        }
        return *op;
    }

    std::string ScriptedAdversary::pick(int proc, std::size_t k)
    {
        return require(proc, k).inv;
    }

    void ScriptedAdversary::on_send(int proc, std::size_t k, const std::string& invocation)
    {
        auto op = require(proc, k);
        if (op.inv != invocation)
        {
            throw ScriptMismatch("process " + std::to_string(proc) + " sent '" + invocation + "' but the script has '" +
                                 op.inv + "'");
        }
    }

    std::string ScriptedAdversary::respond(int proc, std::size_t k, const std::string& invocation)
    {
        auto op = require(proc, k);
        if (op.inv != invocation)
        {
            throw ScriptMismatch("process " + std::to_string(proc) + " invoked '" + invocation +
                                 "' but the script has '" + op.inv + "'");
        }
        if (op.resp.empty())
        {
            throw ScriptMismatch("script leaves operation " + std::to_string(k) + " of process " +
                                 std::to_string(proc) + " pending");
        }
        return op.resp;
    }

    ObjectAdversary::ObjectAdversary(SequentialSpec spec, ObjectMode mode, std::uint64_t seed, ObjectOptions options)
        : spec_(spec), mode_(mode), options_(options), pick_rng_(seed), fault_rng_(seed ^ 0x9e3779b97f4a7c15ULL),
          state_(spec.initial())
    {
    }

    std::string ObjectAdversary::pick(int, std::size_t)
    {
        auto domain = spec_.invocation_domain();
        // domain[0] is the observing operation (read/get); the rest mutate.
        bool observe = pick_rng_() % 1000 < static_cast<std::uint64_t>(options_.observe_ratio * 1000.0);
        if (spec_.kind() == ObjectKind::Counter && options_.inc_budget && incs_picked_ >= *options_.inc_budget)
        {
            observe = true;
        }
        if (observe)
        {
            return domain[0];
        }
        auto choice = domain[1 + pick_rng_() % (domain.size() - 1)];
        if (choice == "inc")
        {
            ++incs_picked_;
        }
        return choice;
    }

    std::string ObjectAdversary::wrong_response(const std::string& invocation)
    {
        switch (spec_.kind())
        {
        case ObjectKind::Register: {
            std::vector<std::string> others;
            for (int v = 0; v <= 3; ++v)
            {
                if (std::to_string(v) != state_)
                {
                    others.push_back(std::to_string(v));
                }
            }
            return "val:" + others[fault_rng_() % others.size()];
        }
        case ObjectKind::Counter:
            // Larger than any number of incs invoked so far.
            return "val:" + std::to_string(std::stoll(state_) + 3 + static_cast<long long>(fault_rng_() % 2));
        case ObjectKind::Ledger:
            // A record nobody appends.
            return list_payload([&] {
                auto records = list_records("list:" + state_);
                records.push_back("z");
                return records;
            }());
        }
        return spec_.apply(state_, invocation).response;
    }

    std::string ObjectAdversary::respond(int, std::size_t, const std::string& invocation)
    {
        auto out = spec_.apply(state_, invocation);
        bool observing = invocation == "read" || invocation == "get";
        if (mode_.faulty && observing && answered_ >= mode_.fault_after)
        {
            ++faults_;
            return wrong_response(invocation);
        }
        state_ = out.state;
        ++answered_;
        return out.response;
    }

    std::string ObjectAdversary::describe() const
    {
        std::string s = "object(" + std::string(spec_.name());
        if (mode_.faulty)
        {
            s += ", faulty after " + std::to_string(mode_.fault_after);
        }
        return s + ")";
    }

    TimedAdversary::TimedAdversary(std::unique_ptr<Adversary> inner) : inner_(std::move(inner))
    {
        if (!inner_)
        {
            throw Error("timed wrapper needs an inner adversary");
        }
    }

    std::unique_ptr<Adversary> timed_wrap(std::unique_ptr<Adversary> inner)
    {
        return std::make_unique<TimedAdversary>(std::move(inner));
    }

    ReplayAdversary::ReplayAdversary(const Execution& e) : timed_(e.timed)
    {
        for (const auto& s : e.steps)
        {
            if (!s.payload)
            {
                continue;
            }
            if (s.phase == Phase::Pick)
            {
                picks_[s.tag] = *s.payload;
            }
            else if ((e.timed && s.phase == Phase::At4) || (!e.timed && s.phase == Phase::Receive))
            {
                responses_[s.tag] = *s.payload;
            }
        }
    }

    std::string ReplayAdversary::pick(int proc, std::size_t k)
    {
        auto it = picks_.find(OpTag{proc, k});
        if (it == picks_.end())
        {
            throw ScriptMismatch("replay has no pick " + std::to_string(k) + " for process " + std::to_string(proc));
        }
        return it->second;
    }

    std::string ReplayAdversary::respond(int proc, std::size_t k, const std::string&)
    {
        auto it = responses_.find(OpTag{proc, k});
        if (it == responses_.end())
        {
            throw ScriptMismatch("replay has no response " + std::to_string(k) + " for process " +
                                 std::to_string(proc));
        }
        return it->second;
    }
} // namespace drv
