#pragma once

// Distributed words: position-tagged invocation/response symbols over
// per-process alphabets, and the value-level operations on them.

#include "drv/errors.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace drv
{
    using Uid = std::uint64_t;

    enum class Kind : std::uint8_t
    {
        Inv,
        Resp,
    };

    std::string_view to_string(Kind kind) noexcept;

    struct Symbol
    {
        int proc = 1; // 1..n
        Kind kind = Kind::Inv;
        std::string payload;
        Uid uid = 0;

        friend bool operator==(const Symbol&, const Symbol&) = default;
    };

    inline Symbol inv(int proc, std::string payload, Uid uid = 0)
    {
        return Symbol{proc, Kind::Inv, std::move(payload), uid};
    }
    inline Symbol resp(int proc, std::string payload, Uid uid = 0)
    {
        return Symbol{proc, Kind::Resp, std::move(payload), uid};
    }

    struct Word
    {
        int n = 2;
        std::vector<Symbol> symbols;

        std::size_t size() const noexcept { return symbols.size(); }
        bool empty() const noexcept { return symbols.empty(); }
        const Symbol& operator[](std::size_t i) const { return symbols[i]; }

        // Appends with uid = position.
        Word& push(int proc, Kind kind, std::string payload);
        Word prefix(std::size_t len) const;
        Word concat(const Word& tail) const;

        friend bool operator==(const Word&, const Word&) = default;
    };

    struct ValidationReport
    {
        bool ok = true;
        std::size_t position = 0; // 1-based position of the first violating symbol
        std::string reason;
        // Reliability and fairness are properties of infinite words.
        static constexpr std::string_view infinite_clauses = "cannot be established on finite prefix";
    };

    ValidationReport validate_word(const Word& word);

    // Throws InvalidWord when the report is not ok.
    void require_valid(const Word& word);

    Word project(const Word& word, int proc);

    struct Operation
    {
        std::size_t id = 0; // index in match order (by invocation position)
        int proc = 1;
        std::size_t inv_pos = 0;
        std::optional<std::size_t> resp_pos;
        Uid inv_uid = 0;
        std::optional<Uid> resp_uid;
        std::string inv_payload;
        std::optional<std::string> resp_payload;

        bool complete() const noexcept { return resp_pos.has_value(); }
    };

    // Operations ordered by invocation position.
    std::vector<Operation> match_operations(const Word& word);

    class PrecedenceRelation
    {
    public:
        explicit PrecedenceRelation(std::vector<Operation> ops);

        const std::vector<Operation>& operations() const noexcept { return ops_; }
        bool precedes(std::size_t a, std::size_t b) const;
        bool concurrent(std::size_t a, std::size_t b) const;
        std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

    private:
        const Operation& at(std::size_t id) const;
        std::vector<Operation> ops_;
    };

    PrecedenceRelation precedence(const Word& word);

    inline constexpr std::size_t kDefaultShuffleCap = 12;

    // Interleavings of the local words in lexicographic order of the
    // next-process choice. The callback returns false to stop early.
    void for_each_shuffle(const std::vector<Word>& locals, std::size_t cap,
                          const std::function<bool(const Word&)>& visit);
    std::vector<Word> shuffles(const std::vector<Word>& locals, std::size_t bound,
                               std::size_t cap = kDefaultShuffleCap);

    Word uniquify(const Word& word);

    // Same per-process operation sequences and the same precedence relation
    // between operations identified by (process, local index).
    bool history_equivalent(const Word& a, const Word& b);

    // Text format: `uid<TAB>proc<TAB>INV|RESP<TAB>payload`, one symbol per line.
    // Blank lines and lines starting with '#' are skipped; an `# n=<k>` line
    // sets the process count.
    Word parse_word(std::istream& in);
    Word parse_word(std::string_view text);
    Word read_word_file(const std::string& path);
    std::string format_word(const Word& word);
    void write_word_file(const std::string& path, const Word& word);

    // Compact rendering for reports: `1:write:1 1:ok 2:read 2:val:1`.
    std::string render(const Word& word);

    // Payload grammar: `name` or `name:arg`.
    struct Payload
    {
        std::string name;
        std::optional<std::string> arg;
    };
    Payload parse_payload(std::string_view text);
    std::string list_payload(const std::vector<std::string>& records);
    std::vector<std::string> list_records(std::string_view payload);
} // namespace drv
