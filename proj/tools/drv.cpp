#include "drv/analysis.hpp"
#include "drv/errors.hpp"
#include "drv/execution.hpp"
#include "drv/oracles.hpp"
#include "drv/scenarios.hpp"
#include "drv/word.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace
{
    namespace fs = std::filesystem;

    constexpr int kOk = 0;
    constexpr int kFail = 1;
    constexpr int kUnknown = 2;
    constexpr int kUsage = 64;
    constexpr int kData = 65;

    struct RunArgs
    {
        std::string scenario;
        std::string config;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> horizon;
        std::optional<std::size_t> window;
        std::string out = "drv-out";
    };

    std::optional<std::uint64_t> env_seed()
    {
        const char* s = std::getenv("DRV_SEED");
        if (!s || !*s)
        {
            return std::nullopt;
        }
        char* end = nullptr;
        auto v = std::strtoull(s, &end, 10);
        if (*end != '\0' || s[0] == '-')
        {
            throw drv::ConfigError(std::string("DRV_SEED is not a non-negative integer: '") + s + "'");
        }
        return v;
    }

    int cmd_run(const RunArgs& a)
    {
        drv::ScenarioConfig cfg;
        if (!a.config.empty())
        {
            cfg = drv::load_scenario_file(a.config);
        }
        else
        {
            cfg.name = a.scenario;
        }
        // Precedence: config file, then DRV_SEED, then --seed.
        if (auto s = env_seed())
        {
            cfg.seed = *s;
        }
        if (a.seed)
        {
            cfg.seed = *a.seed;
        }
        if (a.horizon)
        {
            cfg.horizon = a.horizon;
        }
        if (a.window)
        {
            cfg.window = a.window;
        }
        if (cfg.horizon && cfg.window && *cfg.horizon < 3 * *cfg.window)
        {
            throw drv::ConfigError("horizon must be at least 3 x window");
        }
        auto known = drv::scenario_names();
        if (std::find(known.begin(), known.end(), cfg.name) == known.end())
        {
            throw drv::ConfigError("unknown scenario '" + cfg.name + "'");
        }

        auto result = drv::run_scenario(cfg);
        fs::create_directories(a.out);
        auto base = fs::path(a.out) / cfg.name;
        for (const auto& [name, e] : result.traces)
        {
            drv::write_trace_file(base.string() + "." + name + ".drvtrace", e);
        }
        for (const auto& [name, w] : result.words)
        {
            drv::write_word_file(base.string() + "." + name + ".word", w);
        }
        auto report = result.report();
        std::ofstream(base.string() + ".report") << report;
        std::cout << report;
        return result.passed() ? kOk : kFail;
    }

    int cmd_check(const std::string& language, const std::string& path, std::optional<std::size_t> window,
                  std::size_t cap)
    {
        auto id = drv::parse_language(language);
        drv::Word word;
        try
        {
            word = drv::read_word_file(path);
            drv::require_valid(word);
        }
        catch (const drv::Error& err)
        {
            // Unreadable, unparsable or ill-formed input.
            std::cerr << path << ": " << err.what() << "\n";
            return kData;
        }
        if (window)
        {
            if (*window == 0 || *window > word.size())
            {
                throw drv::ConfigError("window must be between 1 and the word length " + std::to_string(word.size()));
            }
            auto v = drv::membership_at_horizon(id, word, drv::HorizonParams{*window, cap});
            std::cout << drv::to_string(v.membership) << "\n";
            std::cout << "reason: " << v.reason << "\n";
            return v.membership == drv::Membership::In ? kOk : kFail;
        }
        auto v = drv::prefix_check(id, word, cap);
        std::cout << drv::to_string(v.status) << "\n";
        if (!v.reason.empty())
        {
            std::cout << "reason: " << v.reason << "\n";
        }
        if (v.violating_prefix)
        {
            std::cout << "violating prefix: " << *v.violating_prefix << " symbols\n";
        }
        if (!v.witness.empty())
        {
            std::cout << "witness:";
            for (auto u : v.witness)
            {
                std::cout << " " << u;
            }
            std::cout << "\n";
        }
        switch (v.status)
        {
        case drv::Status::In:
            return kOk;
        case drv::Status::Out:
            return kFail;
        default:
            return kUnknown;
        }
    }

    int cmd_oblivious(const std::string& language, std::size_t max_len, const std::string& out)
    {
        auto id = drv::parse_language(language);
        if (max_len > drv::kMaxObliviousLength)
        {
            throw drv::ConfigError("--max " + std::to_string(max_len) + " exceeds the cap of " +
                                   std::to_string(drv::kMaxObliviousLength));
        }
        auto r = drv::rt_oblivious_check(id, max_len);
        std::cout << "language: " << drv::to_string(id) << "\n";
        std::cout << "max: " << max_len << "\n";
        std::cout << "prefixes: " << r.prefixes << "\n";
        std::cout << "shuffles: " << r.shuffles << "\n";
        if (!r.witness)
        {
            std::cout << "result: oblivious on the tested family\n";
            return kOk;
        }
        const auto& w = *r.witness;
        std::cout << "alpha: " << drv::render(w.alpha) << "\n";
        std::cout << "alpha': " << drv::render(w.alpha_prime) << "\n";
        std::cout << "beta: " << drv::render(w.beta) << "\n";
        std::cout << "reason: " << w.reason << "\n";
        if (!out.empty())
        {
            fs::create_directories(out);
            auto base = fs::path(out) / std::string(drv::to_string(id));
            drv::write_word_file(base.string() + ".alpha.word", w.alpha);
            drv::write_word_file(base.string() + ".alpha_prime.word", w.alpha_prime);
            drv::write_word_file(base.string() + ".beta.word", w.beta);
            std::cout << "witness files: " << base.string() << ".{alpha,alpha_prime,beta}.word\n";
        }
        std::cout << "result: witness found\n";
        return kFail;
    }

    int cmd_trace_validate(const std::string& path)
    {
        auto r = drv::validate_trace_file(path);
        if (!r.ok)
        {
            std::cerr << path << ":" << r.line << ": " << r.reason << "\n";
            return kData;
        }
        std::cout << "valid: n=" << r.n << " steps=" << r.steps << "\n";
        return kOk;
    }
} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Deterministic simulator for asynchronous distributed runtime verification"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run a named scenario or a scenario file");
    auto* scenario_opt = run_cmd->add_option("--scenario", run.scenario, "Scenario name");
    auto* config_opt = run_cmd->add_option("--config", run.config, "Scenario INI file");
    scenario_opt->excludes(config_opt);
    run_cmd->add_option("--seed", run.seed, "Seed (overrides DRV_SEED and the file)");
    run_cmd->add_option("--horizon", run.horizon, "Steps per run");
    run_cmd->add_option("--window", run.window, "Window width in steps");
    run_cmd->add_option("--out", run.out, "Output directory for traces and the report")->capture_default_str();

    std::string language, word_path, witness_out;
    std::optional<std::size_t> window;
    std::size_t cap = 100000;
    auto* check_cmd = app.add_subcommand("check", "Check a word against a language oracle");
    check_cmd->add_option("--language", language, "Language id")->required();
    check_cmd->add_option("--word", word_path, "Word file")->required();
    check_cmd->add_option("--horizon-window", window, "Trailing window in symbols for eventual clauses");
    check_cmd->add_option("--cap", cap, "Operation cap for lin/sc search")->capture_default_str();

    std::size_t max_len = 8;
    auto* obl_cmd = app.add_subcommand("oblivious", "Search for a real-time obliviousness witness");
    obl_cmd->add_option("--language", language, "Language id")->required();
    obl_cmd->add_option("--max", max_len, "Maximum prefix length in symbols")->capture_default_str();
    obl_cmd->add_option("--out", witness_out, "Directory for witness word files");

    std::string trace_path;
    auto* trace_cmd = app.add_subcommand("trace", "Trace file utilities");
    trace_cmd->require_subcommand(1);
    auto* validate_cmd = trace_cmd->add_subcommand("validate", "Validate a drvtrace file");
    validate_cmd->add_option("file", trace_path, "Trace file")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return kUsage;
    }

    try
    {
        if (*run_cmd)
        {
            if (run.scenario.empty() && run.config.empty())
            {
                throw drv::ConfigError("run needs --scenario or --config");
            }
            return cmd_run(run);
        }
        if (*check_cmd)
        {
            return cmd_check(language, word_path, window, cap);
        }
        if (*obl_cmd)
        {
            return cmd_oblivious(language, max_len, witness_out);
        }
        return cmd_trace_validate(trace_path);
    }
    catch (const drv::ParseError& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    }
    catch (const drv::ConfigError& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
