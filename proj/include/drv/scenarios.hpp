#pragma once

// Scripted end-to-end scenarios: each builds concrete executions, checks
// the facts they are meant to exhibit, and keeps traces for inspection.

#include "drv/analysis.hpp"
#include "drv/execution.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace drv
{
    struct ScenarioConfig
    {
        std::string name;
        std::uint64_t seed = 0;
        // Unset values fall back to the scenario's defaults.
        std::optional<std::size_t> horizon;
        std::optional<std::size_t> window;
        std::optional<std::size_t> seeds;
        std::optional<std::size_t> rounds;
        std::optional<std::size_t> max_len; // obliviousness prefix bound
        std::optional<int> n;
        std::vector<std::string> candidates; // monitor ids

        // Used by the `custom` scenario.
        std::string monitor = "trivial_yes";
        std::string adversary = "object"; // object | faulty | scripted
        std::string object = "register";
        std::size_t fault_after = 3;
        std::string word_file;
        bool timed = false;
        std::string schedule = "round-robin";
        std::optional<LanguageId> language;
        Notion notion = Notion::SD;
        std::optional<Membership> membership; // unset: oracle at the horizon
    };

    // Reads an INI scenario file with sections [simulation], [adversary],
    // [monitor] and [evaluation]. Throws ConfigError.
    ScenarioConfig load_scenario_file(const std::string& path);

    struct Assertion
    {
        std::string name;
        bool ok = false;
        std::string detail;
    };

    struct ScenarioResult
    {
        std::string name;
        std::uint64_t seed = 0;
        std::vector<std::pair<std::string, std::string>> facts;
        std::vector<Assertion> assertions;
        std::vector<std::pair<std::string, Execution>> traces;
        std::vector<std::pair<std::string, Word>> words;

        void fact(std::string key, std::string value);
        bool check(std::string name, bool ok, std::string detail = {});
        bool passed() const;
        // Flat `key: value` report, ending with `result: PASS|FAIL`.
        std::string report() const;
    };

    const std::vector<std::string>& scenario_names();

    // Throws ConfigError for an unknown scenario or bad parameters.
    ScenarioResult run_scenario(const ScenarioConfig& config);
} // namespace drv
