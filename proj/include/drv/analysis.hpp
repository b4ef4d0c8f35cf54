#pragma once

// Horizon-bounded evaluation of the four decidability notions and the
// real-time obliviousness checker.

#include "drv/execution.hpp"
#include "drv/oracles.hpp"

#include <optional>
#include <string>
#include <vector>

namespace drv
{
    // Reports per process, bucketed into disjoint windows of `window` steps
    // counted back from the last step.
    struct VerdictStats
    {
        struct Process
        {
            std::size_t no = 0;
            std::size_t yes = 0;
            std::optional<std::size_t> last_no; // step index
            // window_no[j]: a NO among the steps of trailing window j, where
            // j = 0 is the final window.
            std::vector<bool> window_no;
            bool final_no() const { return !window_no.empty() && window_no.front(); }
            bool no_in_every_window() const;
        };
        std::size_t steps = 0;
        std::size_t window = 0;
        std::vector<Process> procs;

        std::size_t total_no() const;
    };

    // Trailing windows cover the later half of the run: ceil(k / 2) of them
    // for k = floor(steps / window) whole windows.
    VerdictStats verdict_stats(const Execution& e, std::size_t window);

    enum class Notion : std::uint8_t
    {
        SD,
        WD,
        PSD,
        PWD,
    };
    std::string_view to_string(Notion n) noexcept;
    Notion parse_notion(std::string_view s);

    struct DecidabilityReport
    {
        Notion notion = Notion::SD;
        Membership membership = Membership::In;
        bool pass = false;
        std::string branch;   // which clause decided the outcome
        std::string evidence; // human-readable details
        std::vector<std::size_t> no_counts;
    };
    std::string format(const DecidabilityReport& r);

    // IN: no process reports NO. OUT: some process reports NO.
    DecidabilityReport eval_sd(const Execution& e, Membership m);

    // IN: no NO in the final window. OUT: every process reports NO in every
    // trailing window. Throws ConfigError when the run is shorter than 3W.
    DecidabilityReport eval_wd(const Execution& e, Membership m, std::size_t window);

    // Predictive variants: an IN run may also pass when the sketch is out of
    // `language` and its tight replay is an indistinguishable execution with
    // the sketch as input.
    DecidabilityReport eval_psd(const Execution& e, Membership m, LanguageId language);
    DecidabilityReport eval_pwd(const Execution& e, Membership m, std::size_t window, LanguageId language);

    // ---- real-time obliviousness ----

    struct ObliviousWitness
    {
        Word alpha;       // alpha.beta is in the language
        Word alpha_prime; // a shuffle of alpha's projections; alpha'.beta is not
        Word beta;
        std::string reason;
    };

    struct ObliviousResult
    {
        LanguageId language = LanguageId::LIN_REG;
        std::size_t max_len = 0;
        bool oblivious = true; // relative to the tested (alpha, beta) family
        std::optional<ObliviousWitness> witness;
        std::size_t prefixes = 0; // prefixes alpha with alpha.beta IN
        std::size_t shuffles = 0; // alpha' tested
    };

    inline constexpr std::size_t kMaxObliviousLength = 12;

    // The fixed continuation used for a prefix: `rounds` rounds in which
    // every process observes the object and gets its state after applying
    // alpha's operations in response order.
    Word scripted_beta(LanguageId id, const Word& alpha, std::size_t rounds = 2);

    // Membership of alpha.beta with the window set to |beta|.
    Membership prefix_membership(LanguageId id, const Word& alpha, const Word& beta);

    // Enumerates two-process prefixes of complete operations with at most
    // max_len symbols over a small payload domain, shortest first, and every
    // shuffle of each. Throws ConfigError if max_len > 12.
    ObliviousResult rt_oblivious_check(LanguageId id, std::size_t max_len);

    // The ledger example with n processes: process i appends its record,
    // then process n gets all of them; the shuffle moves process 1 last.
    struct LedgerShuffleExample
    {
        Word alpha;
        Word alpha_prime;
        Word beta;
        std::vector<std::pair<LanguageId, std::pair<Membership, Membership>>> results; // (alpha.beta, alpha'.beta)
        bool holds() const;
    };
    LedgerShuffleExample ledger_shuffle_example(int n = 2);
} // namespace drv
