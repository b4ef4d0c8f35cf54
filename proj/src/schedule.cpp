#include "drv/schedule.hpp"

#include "drv/errors.hpp"
#include "drv/word.hpp"

namespace drv
{
    std::string_view to_string(Until u) noexcept
    {
        switch (u)
        {
        case Until::Step:
            return "step";
        case Until::PreDone:
            return "pre-done";
        case Until::Sent:
            return "sent";
        case Until::Received:
            return "received";
        case Until::Reported:
            return "reported";
        }
        return "?";
    }

    std::string_view to_string(Policy p) noexcept
    {
        switch (p)
        {
        case Policy::RoundRobin:
            return "round-robin";
        case Policy::Random:
            return "random";
        case Policy::RandomBurst:
            return "random-burst";
        case Policy::Tight:
            return "tight";
        case Policy::TightSequential:
            return "tight-sequential";
        case Policy::Explicit:
            return "explicit";
        case Policy::Stop:
            return "stop";
        }
        return "?";
    }

    Policy parse_policy(std::string_view name)
    {
        for (auto p : {Policy::RoundRobin, Policy::Random, Policy::RandomBurst, Policy::Tight, Policy::TightSequential,
                       Policy::Explicit, Policy::Stop})
        {
            if (to_string(p) == name)
            {
                return p;
            }
        }
        throw ConfigError("unknown schedule policy '" + std::string(name) + "'");
    }

    std::vector<Burst> bursts_from_word(const Word& word)
    {
        require_valid(word);
        std::vector<Burst> out;
        out.reserve(word.size());
        for (const auto& s : word.symbols)
        {
            out.push_back(Burst{s.proc, s.kind == Kind::Inv ? Until::Sent : Until::Reported});
        }
        return out;
    }

    Schedule from_word(const Word& word)
    {
        return Schedule::scripted(bursts_from_word(word), Policy::Stop);
    }

    Schedule tight_schedule(int n, std::size_t rounds)
    {
        std::vector<Burst> bursts;
        for (std::size_t r = 0; r < rounds; ++r)
        {
            for (int p = 1; p <= n; ++p)
            {
                bursts.push_back(Burst{p, Until::Sent});
            }
            for (int p = 1; p <= n; ++p)
            {
                bursts.push_back(Burst{p, Until::Reported});
            }
        }
        return Schedule::scripted(std::move(bursts), Policy::Stop);
    }
} // namespace drv
