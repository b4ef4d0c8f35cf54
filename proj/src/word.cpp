#include "drv/word.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

namespace drv
{
    std::string_view to_string(Kind kind) noexcept
    {
        return kind == Kind::Inv ? "INV" : "RESP";
    }

    Word& Word::push(int proc, Kind kind, std::string payload)
    {
        symbols.push_back(Symbol{proc, kind, std::move(payload), symbols.size()});
        return *this;
    }

    Word Word::prefix(std::size_t len) const
    {
        Word out{n, {}};
        len = std::min(len, symbols.size());
        out.symbols.assign(symbols.begin(), symbols.begin() + static_cast<std::ptrdiff_t>(len));
        return out;
    }

    Word Word::concat(const Word& tail) const
    {
        Word out = *this;
        out.n = std::max(n, tail.n);
        out.symbols.insert(out.symbols.end(), tail.symbols.begin(), tail.symbols.end());
        return uniquify(out);
    }

    ValidationReport validate_word(const Word& word)
    {
        std::vector<Kind> expected(static_cast<std::size_t>(std::max(word.n, 0)) + 1, Kind::Inv);
        for (std::size_t i = 0; i < word.size(); ++i)
        {
            const Symbol& s = word[i];
            if (s.proc < 1 || s.proc > word.n)
            {
                return {false, i + 1, "process " + std::to_string(s.proc) + " out of range 1.." + std::to_string(word.n)};
            }
            auto& next = expected[static_cast<std::size_t>(s.proc)];
            if (s.kind != next)
            {
                std::string reason = s.kind == Kind::Inv ? "two consecutive invocations for process "
                                                         : "response without pending invocation for process ";
                return {false, i + 1, reason + std::to_string(s.proc)};
            }
            next = next == Kind::Inv ? Kind::Resp : Kind::Inv;
        }
        return {};
    }

    void require_valid(const Word& word)
    {
        auto report = validate_word(word);
        if (!report.ok)
        {
            throw InvalidWord("invalid word at position " + std::to_string(report.position) + ": " + report.reason);
        }
    }

    Word project(const Word& word, int proc)
    {
        if (proc < 1 || proc > word.n)
        {
            throw InvalidWord("projection on process " + std::to_string(proc) + " out of range");
        }
        Word out{word.n, {}};
        for (const auto& s : word.symbols)
        {
            if (s.proc == proc)
            {
                out.symbols.push_back(s);
            }
        }
        return out;
    }

    std::vector<Operation> match_operations(const Word& word)
    {
        require_valid(word);
        std::vector<Operation> ops;
        std::vector<std::optional<std::size_t>> open(static_cast<std::size_t>(word.n) + 1);
        for (std::size_t i = 0; i < word.size(); ++i)
        {
            const Symbol& s = word[i];
            auto& slot = open[static_cast<std::size_t>(s.proc)];
            if (s.kind == Kind::Inv)
            {
                Operation op;
                op.id = ops.size();
                op.proc = s.proc;
                op.inv_pos = i;
                op.inv_uid = s.uid;
                op.inv_payload = s.payload;
                slot = op.id;
                ops.push_back(std::move(op));
            }
            else
            {
                auto& op = ops[*slot];
                op.resp_pos = i;
                op.resp_uid = s.uid;
                op.resp_payload = s.payload;
                slot.reset();
            }
        }
        return ops;
    }

    PrecedenceRelation::PrecedenceRelation(std::vector<Operation> ops) : ops_(std::move(ops)) {}

    const Operation& PrecedenceRelation::at(std::size_t id) const
    {
        if (id >= ops_.size())
        {
            throw Error("unknown operation id " + std::to_string(id));
        }
        return ops_[id];
    }

    bool PrecedenceRelation::precedes(std::size_t a, std::size_t b) const
    {
        const auto& x = at(a);
        const auto& y = at(b);
        return x.resp_pos && *x.resp_pos < y.inv_pos;
    }

    bool PrecedenceRelation::concurrent(std::size_t a, std::size_t b) const
    {
        return a != b && !precedes(a, b) && !precedes(b, a);
    }

    std::vector<std::pair<std::size_t, std::size_t>> PrecedenceRelation::pairs() const
    {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t a = 0; a < ops_.size(); ++a)
        {
            for (std::size_t b = 0; b < ops_.size(); ++b)
            {
                if (precedes(a, b))
                {
                    out.emplace_back(a, b);
                }
            }
        }
        return out;
    }

    PrecedenceRelation precedence(const Word& word)
    {
        return PrecedenceRelation(match_operations(word));
    }

    namespace
    {
        struct ShuffleWalker
        {
            const std::vector<Word>& locals;
            const std::function<bool(const Word&)>& visit;
            std::vector<std::size_t> cursor;
            Word current;
            std::size_t total = 0;

            bool walk()
            {
                if (current.size() == total)
                {
                    return visit(uniquify(current));
                }
                for (std::size_t p = 0; p < locals.size(); ++p)
                {
                    if (cursor[p] == locals[p].size())
                    {
                        continue;
                    }
                    current.symbols.push_back(locals[p][cursor[p]]);
                    ++cursor[p];
                    bool more = walk();
                    --cursor[p];
                    current.symbols.pop_back();
                    if (!more)
                    {
                        return false;
                    }
                }
                return true;
            }
        };
    } // namespace

    void for_each_shuffle(const std::vector<Word>& locals, std::size_t cap,
                          const std::function<bool(const Word&)>& visit)
    {
        std::size_t total = 0;
        int n = 0;
        for (const auto& w : locals)
        {
            total += w.size();
            n = std::max(n, w.n);
        }
        if (total > cap)
        {
            throw CapExceeded("shuffle of " + std::to_string(total) + " symbols exceeds cap " + std::to_string(cap));
        }
        ShuffleWalker walker{locals, visit, std::vector<std::size_t>(locals.size(), 0), Word{n, {}}, total};
        walker.walk();
    }

    std::vector<Word> shuffles(const std::vector<Word>& locals, std::size_t bound, std::size_t cap)
    {
        std::vector<Word> out;
        for_each_shuffle(locals, cap, [&](const Word& w) {
            out.push_back(w);
            return out.size() < bound;
        });
        return out;
    }

    Word uniquify(const Word& word)
    {
        Word out = word;
        for (std::size_t i = 0; i < out.size(); ++i)
        {
            out.symbols[i].uid = i;
        }
        return out;
    }

    bool history_equivalent(const Word& a, const Word& b)
    {
        if (a.n != b.n || a.size() != b.size())
        {
            return false;
        }
        for (int p = 1; p <= a.n; ++p)
        {
            auto pa = project(a, p);
            auto pb = project(b, p);
            if (pa.size() != pb.size())
            {
                return false;
            }
            for (std::size_t i = 0; i < pa.size(); ++i)
            {
                if (pa[i].kind != pb[i].kind || pa[i].payload != pb[i].payload)
                {
                    return false;
                }
            }
        }
        // Identify operations by (process, local index).
        auto keyed = [](const Word& w) {
            std::map<std::pair<int, std::size_t>, Operation> out;
            std::map<int, std::size_t> seen;
            for (auto& op : match_operations(w))
            {
                out.emplace(std::make_pair(op.proc, seen[op.proc]++), op);
            }
            return out;
        };
        auto ka = keyed(a);
        auto kb = keyed(b);
        for (const auto& [k1, x1] : ka)
        {
            for (const auto& [k2, y1] : ka)
            {
                const auto& x2 = kb.at(k1);
                const auto& y2 = kb.at(k2);
                bool pa = x1.resp_pos && *x1.resp_pos < y1.inv_pos;
                bool pb = x2.resp_pos && *x2.resp_pos < y2.inv_pos;
                if (pa != pb)
                {
                    return false;
                }
            }
        }
        return true;
    }

    Word parse_word(std::istream& in)
    {
        Word word{0, {}};
        int declared_n = 0;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            if (!line.empty() && line.back() == '\r')
            {
                line.pop_back();
            }
            if (line.empty())
            {
                continue;
            }
            if (line[0] == '#')
            {
                auto at = line.find("n=");
                if (at != std::string::npos)
                {
                    try
                    {
                        declared_n = std::stoi(line.substr(at + 2));
                    }
                    catch (const std::exception&)
                    {
                        throw ParseError(lineno, "bad process count");
                    }
                }
                continue;
            }
            std::vector<std::string> fields;
            std::size_t start = 0;
            while (true)
            {
                auto tab = line.find('\t', start);
                fields.push_back(line.substr(start, tab - start));
                if (tab == std::string::npos)
                {
                    break;
                }
                start = tab + 1;
            }
            if (fields.size() != 4)
            {
                throw ParseError(lineno, "expected 4 tab-separated fields, got " + std::to_string(fields.size()));
            }
            Symbol s;
            try
            {
                std::size_t used = 0;
                s.uid = std::stoull(fields[0], &used);
                if (used != fields[0].size())
                {
                    throw std::invalid_argument("uid");
                }
                s.proc = std::stoi(fields[1], &used);
                if (used != fields[1].size() || s.proc < 1)
                {
                    throw std::invalid_argument("proc");
                }
            }
            catch (const std::exception&)
            {
                throw ParseError(lineno, "bad uid or process field");
            }
            if (fields[2] == "INV")
            {
                s.kind = Kind::Inv;
            }
            else if (fields[2] == "RESP")
            {
                s.kind = Kind::Resp;
            }
            else
            {
                throw ParseError(lineno, "kind must be INV or RESP, got '" + fields[2] + "'");
            }
            if (fields[3].empty())
            {
                throw ParseError(lineno, "empty payload");
            }
            s.payload = fields[3];
            word.n = std::max(word.n, s.proc);
            word.symbols.push_back(std::move(s));
        }
        word.n = std::max({word.n, declared_n, 1});
        return word;
    }

    Word parse_word(std::string_view text)
    {
        std::istringstream in{std::string(text)};
        return parse_word(in);
    }

    Word read_word_file(const std::string& path)
    {
        std::ifstream in(path);
        if (!in)
        {
            throw Error("cannot open word file " + path);
        }
        return parse_word(in);
    }

    std::string format_word(const Word& word)
    {
        std::ostringstream out;
        out << "# n=" << word.n << "\n";
        for (const auto& s : word.symbols)
        {
            out << s.uid << '\t' << s.proc << '\t' << to_string(s.kind) << '\t' << s.payload << '\n';
        }
        return out.str();
    }

    void write_word_file(const std::string& path, const Word& word)
    {
        std::ofstream out(path);
        if (!out)
        {
            throw Error("cannot write word file " + path);
        }
        out << format_word(word);
    }

    std::string render(const Word& word)
    {
        std::string out;
        for (const auto& s : word.symbols)
        {
            if (!out.empty())
            {
                out += ' ';
            }
            out += std::to_string(s.proc);
            out += s.kind == Kind::Inv ? '<' : '>';
            out += s.payload;
        }
        return out;
    }

    Payload parse_payload(std::string_view text)
    {
        auto colon = text.find(':');
        if (colon == std::string_view::npos)
        {
            return {std::string(text), std::nullopt};
        }
        return {std::string(text.substr(0, colon)), std::string(text.substr(colon + 1))};
    }

    std::string list_payload(const std::vector<std::string>& records)
    {
        std::string out = "list:";
        for (std::size_t i = 0; i < records.size(); ++i)
        {
            if (i)
            {
                out += '.';
            }
            out += records[i];
        }
        return out;
    }

    std::vector<std::string> list_records(std::string_view payload)
    {
        auto p = parse_payload(payload);
        std::vector<std::string> out;
        if (p.name != "list" || !p.arg || p.arg->empty())
        {
            return out;
        }
        std::string_view rest = *p.arg;
        while (true)
        {
            auto dot = rest.find('.');
            out.emplace_back(rest.substr(0, dot));
            if (dot == std::string_view::npos)
            {
                break;
            }
            rest.remove_prefix(dot + 1);
        }
        return out;
    }
} // namespace drv
