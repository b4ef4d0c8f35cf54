#include "drv/execution.hpp"

#include "drv/monitor.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

namespace drv
{
    std::string_view to_string(Verdict v) noexcept
    {
        return v == Verdict::Yes ? "YES" : "NO";
    }

    std::string_view to_string(StepKind k) noexcept
    {
        switch (k)
        {
        case StepKind::Local:
            return "LOCAL";
        case StepKind::Write:
            return "WRITE";
        case StepKind::Read:
            return "READ";
        case StepKind::Snapshot:
            return "SNAPSHOT";
        case StepKind::Send:
            return "SEND";
        case StepKind::Receive:
            return "RECEIVE";
        case StepKind::Report:
            return "REPORT";
        }
        return "?";
    }

    std::optional<StepKind> parse_step_kind(std::string_view s) noexcept
    {
        for (auto k : {StepKind::Local, StepKind::Write, StepKind::Read, StepKind::Snapshot, StepKind::Send,
                       StepKind::Receive, StepKind::Report})
        {
            if (to_string(k) == s)
            {
                return k;
            }
        }
        return std::nullopt;
    }

    std::string_view to_string(Phase p) noexcept
    {
        switch (p)
        {
        case Phase::Pick:
            return "pick";
        case Phase::Pre:
            return "pre";
        case Phase::Send:
            return "send";
        case Phase::At1:
            return "at1";
        case Phase::At2:
            return "at2";
        case Phase::At3:
            return "at3";
        case Phase::At4:
            return "at4";
        case Phase::At5:
            return "at5";
        case Phase::At6:
            return "at6";
        case Phase::Receive:
            return "receive";
        case Phase::Post:
            return "post";
        case Phase::Report:
            return "report";
        }
        return "?";
    }

    std::string_view to_string(Block b) noexcept
    {
        switch (b)
        {
        case Block::Pre:
            return "pre";
        case Block::Post:
            return "post";
        case Block::Report:
            return "report";
        }
        return "?";
    }

    std::size_t Execution::step_count(int proc) const
    {
        return static_cast<std::size_t>(
            std::count_if(steps.begin(), steps.end(), [proc](const StepRecord& s) { return s.proc == proc; }));
    }

    std::vector<int> Execution::process_sequence() const
    {
        std::vector<int> out;
        out.reserve(steps.size());
        for (const auto& s : steps)
        {
            out.push_back(s.proc);
        }
        return out;
    }

    Word input_word(const Execution& e)
    {
        Word w{e.n, {}};
        for (const auto& s : e.steps)
        {
            if (s.symbol)
            {
                w.push(s.symbol->proc, s.symbol->kind, s.symbol->payload);
            }
        }
        return w;
    }

    const std::vector<std::string>& local_trace(const Execution& e, int proc)
    {
        if (proc < 1 || proc > e.n)
        {
            throw Error("process " + std::to_string(proc) + " out of range");
        }
        return e.local_traces[static_cast<std::size_t>(proc - 1)];
    }

    namespace
    {
        void require_same_algorithm(const Execution& a, const Execution& b)
        {
            std::string ia = a.monitor ? a.monitor->id() : "";
            std::string ib = b.monitor ? b.monitor->id() : "";
            if (a.n != b.n || ia != ib)
            {
                throw Error("executions of different algorithms (" + ia + ", n=" + std::to_string(a.n) + " vs " +
                            ib + ", n=" + std::to_string(b.n) + ")");
            }
        }
    } // namespace

    bool indistinguishable(const Execution& a, const Execution& b, int proc)
    {
        require_same_algorithm(a, b);
        return local_trace(a, proc) == local_trace(b, proc);
    }

    Indistinguishability indistinguishable(const Execution& a, const Execution& b)
    {
        require_same_algorithm(a, b);
        Indistinguishability out;
        for (int p = 1; p <= a.n; ++p)
        {
            bool same = local_trace(a, p) == local_trace(b, p);
            out.per_process.push_back(same);
            out.global = out.global && same;
        }
        return out;
    }

    bool is_fair(const Execution& e, std::size_t c)
    {
        std::size_t total = e.steps.size();
        std::size_t need = total / (c * static_cast<std::size_t>(e.n));
        for (int p = 1; p <= e.n; ++p)
        {
            if (e.step_count(p) < need)
            {
                return false;
            }
        }
        return true;
    }

    std::vector<Uid> view_uids(const Execution& e, const ViewCounts& view)
    {
        std::vector<Uid> out;
        for (std::size_t p = 0; p < view.size(); ++p)
        {
            for (std::size_t k = 0; k < view[p]; ++k)
            {
                out.push_back(e.tag_uid.at(OpTag{static_cast<int>(p + 1), k}));
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    void write_trace(std::ostream& out, const Execution& e)
    {
        out << "#drvtrace v1 n=" << e.n << " seed=" << e.seed << " horizon=" << e.horizon << '\n';
        for (const auto& s : e.steps)
        {
            out << s.index << '\t' << s.proc << '\t' << to_string(s.kind) << '\t' << s.detail << '\n';
        }
    }

    std::string format_trace(const Execution& e)
    {
        std::ostringstream out;
        write_trace(out, e);
        return out.str();
    }

    void write_trace_file(const std::string& path, const Execution& e)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
        {
            throw Error("cannot write trace file " + path);
        }
        write_trace(out, e);
    }

    TraceReport validate_trace(std::istream& in)
    {
        TraceReport r;
        auto fail = [&](std::size_t line, std::string why) {
            r.ok = false;
            r.line = line;
            r.reason = std::move(why);
            return r;
        };
        static const std::regex header(R"(#drvtrace v1 n=([0-9]+) seed=([0-9]+) horizon=([0-9]+))");
        static const std::regex view_re(R"( view=\{([0-9,]*)\}$)");
        std::string line;
        if (!std::getline(in, line))
        {
            return fail(1, "missing header");
        }
        std::smatch m;
        if (!std::regex_match(line, m, header))
        {
            return fail(1, "bad header");
        }
        r.n = std::stoi(m[1]);
        std::size_t horizon = std::stoull(m[3]);
        if (r.n < 1)
        {
            return fail(1, "process count must be positive");
        }
        std::vector<bool> open(static_cast<std::size_t>(r.n) + 1, false);
        std::size_t lineno = 1;
        while (std::getline(in, line))
        {
            ++lineno;
            std::vector<std::string> fields;
            std::size_t start = 0;
            for (int f = 0; f < 3; ++f)
            {
                auto tab = line.find('\t', start);
                if (tab == std::string::npos)
                {
                    return fail(lineno, "expected 4 tab-separated fields");
                }
                fields.push_back(line.substr(start, tab - start));
                start = tab + 1;
            }
            fields.push_back(line.substr(start));
            std::size_t index = 0;
            int proc = 0;
            try
            {
                std::size_t used = 0;
                index = std::stoull(fields[0], &used);
                if (used != fields[0].size())
                {
                    throw std::invalid_argument("index");
                }
                proc = std::stoi(fields[1], &used);
                if (used != fields[1].size())
                {
                    throw std::invalid_argument("proc");
                }
            }
            catch (const std::exception&)
            {
                return fail(lineno, "bad step index or process");
            }
            if (index != r.steps + 1)
            {
                return fail(lineno, "step index " + std::to_string(index) + " out of sequence");
            }
            if (proc < 1 || proc > r.n)
            {
                return fail(lineno, "process " + std::to_string(proc) + " out of range");
            }
            auto kind = parse_step_kind(fields[2]);
            if (!kind)
            {
                return fail(lineno, "unknown step kind '" + fields[2] + "'");
            }
            auto is_open = open[static_cast<std::size_t>(proc)];
            if (*kind == StepKind::Send)
            {
                if (is_open)
                {
                    return fail(lineno, "send while an operation is pending");
                }
                is_open = true;
            }
            if (*kind == StepKind::Receive)
            {
                if (!is_open)
                {
                    return fail(lineno, "receive without a pending send");
                }
                is_open = false;
                std::smatch vm;
                if (std::regex_search(fields[3], vm, view_re))
                {
                    std::vector<Uid> uids;
                    std::string list = vm[1];
                    std::stringstream ss(list);
                    std::string item;
                    while (std::getline(ss, item, ','))
                    {
                        if (item.empty())
                        {
                            return fail(lineno, "empty view entry");
                        }
                        uids.push_back(std::stoull(item));
                    }
                    if (!std::is_sorted(uids.begin(), uids.end()) ||
                        std::adjacent_find(uids.begin(), uids.end()) != uids.end())
                    {
                        return fail(lineno, "view not sorted ascending");
                    }
                }
            }
            ++r.steps;
        }
        if (r.steps > horizon)
        {
            return fail(lineno, "more steps than the horizon");
        }
        return r;
    }

    TraceReport validate_trace_file(const std::string& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
        {
            throw Error("cannot open trace file " + path);
        }
        return validate_trace(in);
    }
} // namespace drv
