#include "drv/errors.hpp"
#include "drv/scenarios.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <filesystem>
#include <set>
#include <sstream>

namespace drv
{
    namespace
    {
        namespace pt = boost::property_tree;

        const std::map<std::string, std::set<std::string>>& known_keys()
        {
            static const std::map<std::string, std::set<std::string>> keys = {
                {"simulation", {"scenario", "seed", "horizon", "n", "schedule", "rounds", "seeds", "max_len"}},
                {"adversary", {"kind", "object", "fault_after", "timed", "word"}},
                {"monitor", {"id", "candidates"}},
                {"evaluation", {"window", "notion", "language", "membership"}},
            };
            return keys;
        }

        template <typename T> T number(const pt::ptree& tree, const std::string& key, const std::string& path)
        {
            auto text = tree.get<std::string>(key);
            std::istringstream in(text);
            T value{};
            if (!(in >> value) || !in.eof() || text.empty() || text[0] == '-')
            {
                throw ConfigError(path + ": [" + key.substr(0, key.find('.')) + "] " + key.substr(key.find('.') + 1) +
                                  " must be a non-negative integer, got '" + text + "'");
            }
            return value;
        }

        template <typename T>
        void optional_number(std::optional<T>& out, const pt::ptree& tree, const std::string& key,
                             const std::string& path)
        {
            if (tree.get_optional<std::string>(key))
            {
                out = number<T>(tree, key, path);
            }
        }

        bool boolean(const std::string& text, const std::string& path)
        {
            if (text == "true" || text == "1" || text == "yes")
            {
                return true;
            }
            if (text == "false" || text == "0" || text == "no")
            {
                return false;
            }
            throw ConfigError(path + ": expected a boolean, got '" + text + "'");
        }

        std::vector<std::string> split_list(const std::string& text)
        {
            std::vector<std::string> out;
            std::istringstream in(text);
            std::string item;
            while (std::getline(in, item, ','))
            {
                auto b = item.find_first_not_of(" \t");
                auto e = item.find_last_not_of(" \t");
                if (b != std::string::npos)
                {
                    out.push_back(item.substr(b, e - b + 1));
                }
            }
            return out;
        }
    } // namespace

    ScenarioConfig load_scenario_file(const std::string& path)
    {
        pt::ptree tree;
        try
        {
            pt::read_ini(path, tree);
        }
        catch (const pt::ini_parser_error& err)
        {
            throw ConfigError(path + ":" + std::to_string(err.line()) + ": " + err.message());
        }
        for (const auto& [section, body] : tree)
        {
            auto it = known_keys().find(section);
            if (it == known_keys().end() || body.empty())
            {
                throw ConfigError(path + ": unknown section or top-level key '" + section + "'");
            }
            for (const auto& [key, value] : body)
            {
                if (!it->second.count(key))
                {
                    throw ConfigError(path + ": unknown key '" + key + "' in [" + section + "]");
                }
            }
        }

        ScenarioConfig cfg;
        auto name = tree.get_optional<std::string>("simulation.scenario");
        if (!name)
        {
            throw ConfigError(path + ": [simulation] scenario is required");
        }
        cfg.name = *name;
        if (tree.get_optional<std::string>("simulation.seed"))
        {
            cfg.seed = number<std::uint64_t>(tree, "simulation.seed", path);
        }
        optional_number(cfg.horizon, tree, "simulation.horizon", path);
        optional_number(cfg.rounds, tree, "simulation.rounds", path);
        optional_number(cfg.seeds, tree, "simulation.seeds", path);
        optional_number(cfg.max_len, tree, "simulation.max_len", path);
        optional_number(cfg.window, tree, "evaluation.window", path);
        if (tree.get_optional<std::string>("simulation.n"))
        {
            auto n = number<int>(tree, "simulation.n", path);
            if (n < 1)
            {
                throw ConfigError(path + ": [simulation] n must be at least 1");
            }
            cfg.n = n;
        }
        cfg.schedule = tree.get<std::string>("simulation.schedule", cfg.schedule);

        cfg.adversary = tree.get<std::string>("adversary.kind", cfg.adversary);
        cfg.object = tree.get<std::string>("adversary.object", cfg.object);
        if (tree.get_optional<std::string>("adversary.fault_after"))
        {
            cfg.fault_after = number<std::size_t>(tree, "adversary.fault_after", path);
        }
        if (auto t = tree.get_optional<std::string>("adversary.timed"))
        {
            cfg.timed = boolean(*t, path);
        }
        if (auto w = tree.get_optional<std::string>("adversary.word"))
        {
            // Relative word paths are resolved against the scenario file.
            std::filesystem::path p(*w);
            if (p.is_relative())
            {
                p = std::filesystem::path(path).parent_path() / p;
            }
            cfg.word_file = p.string();
        }

        cfg.monitor = tree.get<std::string>("monitor.id", cfg.monitor);
        if (auto c = tree.get_optional<std::string>("monitor.candidates"))
        {
            cfg.candidates = split_list(*c);
        }

        if (auto n = tree.get_optional<std::string>("evaluation.notion"))
        {
            cfg.notion = parse_notion(*n);
        }
        if (auto l = tree.get_optional<std::string>("evaluation.language"))
        {
            cfg.language = parse_language(*l);
        }
        if (auto m = tree.get_optional<std::string>("evaluation.membership"))
        {
            if (*m == "IN")
            {
                cfg.membership = Membership::In;
            }
            else if (*m == "OUT")
            {
                cfg.membership = Membership::Out;
            }
            else if (*m != "oracle")
            {
                throw ConfigError(path + ": [evaluation] membership must be IN, OUT or oracle");
            }
        }
        return cfg;
    }
} // namespace drv
