#pragma once

// Finite-prefix membership oracles for the register, ledger and counter
// languages, plus a horizon classifier for scripted scenarios.

#include "drv/sequential_spec.hpp"
#include "drv/word.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace drv
{
    enum class LanguageId
    {
        LIN_REG,
        SC_REG,
        LIN_LED,
        SC_LED,
        EC_LED,
        WEC_COUNT,
        SEC_COUNT,
    };

    inline constexpr LanguageId kAllLanguages[] = {LanguageId::LIN_REG, LanguageId::SC_REG,   LanguageId::LIN_LED,
                                                   LanguageId::SC_LED,  LanguageId::EC_LED,   LanguageId::WEC_COUNT,
                                                   LanguageId::SEC_COUNT};

    std::string_view to_string(LanguageId id) noexcept;
    LanguageId parse_language(std::string_view name);
    ObjectKind object_of(LanguageId id) noexcept;

    enum class Status
    {
        In,
        Out,
        Unknown,
    };
    std::string_view to_string(Status s) noexcept;

    struct CounterProgress
    {
        std::int64_t incs_total = 0; // inc invocations seen so far
        std::map<int, std::int64_t> last_read;
        bool prop1 = true; // read >= own preceding incs
        bool prop2 = true; // reads of a process never decrease
        bool prop4 = true; // read <= incs preceding or concurrent
    };

    struct LedgerProgress
    {
        std::vector<std::string> appended;
        std::map<int, std::vector<std::string>> latest_get;
    };

    struct PrefixVerdict
    {
        Status status = Status::In;
        // Length of the shortest prefix already OUT.
        std::optional<std::size_t> violating_prefix;
        std::string reason;
        std::vector<Uid> witness;
        std::optional<CounterProgress> counter;
        std::optional<LedgerProgress> ledger;
    };

    inline constexpr std::size_t kDefaultOpCap = 10;

    // Linearizability / sequential consistency. Both treat every prefix as
    // a constraint (the languages contain words whose every prefix is
    // consistent), so OUT is stable under extension.
    PrefixVerdict lin_check(const Word& word, const SequentialSpec& spec, std::size_t cap = kDefaultOpCap);
    PrefixVerdict sc_check(const Word& word, const SequentialSpec& spec, std::size_t cap = kDefaultOpCap);

    // Whole-word checks without the every-prefix clause; used by the monitor
    // and by the prefix checkers above.
    bool linearizable(const Word& word, const SequentialSpec& spec, std::size_t cap);
    bool sequentially_consistent(const Word& word, const SequentialSpec& spec, std::size_t cap);

    PrefixVerdict wec_count_check(const Word& word);
    PrefixVerdict sec_count_check(const Word& word);
    PrefixVerdict ec_led_check(const Word& word);

    // Dispatches on the language's prefix-closed clauses.
    PrefixVerdict prefix_check(LanguageId id, const Word& word, std::size_t cap = kDefaultOpCap);

    enum class Membership
    {
        In,
        Out,
    };
    std::string_view to_string(Membership m) noexcept;

    struct HorizonParams
    {
        std::size_t window = 10;      // trailing symbols used for eventual clauses
        std::size_t op_cap = 100000;  // cap forwarded to lin/sc search
    };

    struct HorizonVerdict
    {
        Membership membership = Membership::In;
        std::string reason;
    };

    HorizonVerdict membership_at_horizon(LanguageId id, const Word& word, const HorizonParams& params);
} // namespace drv
