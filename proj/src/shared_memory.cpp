#include "drv/shared_memory.hpp"

#include "drv/errors.hpp"

namespace drv
{
    void SharedMemory::declare_register(const std::string& name, Json initial)
    {
        if (registers_.count(name) || arrays_.count(name))
        {
            throw ConfigError("shared variable '" + name + "' declared twice");
        }
        registers_.emplace(name, std::move(initial));
    }

    void SharedMemory::declare_array(const std::string& name, int n, Json initial)
    {
        if (registers_.count(name) || arrays_.count(name))
        {
            throw ConfigError("shared variable '" + name + "' declared twice");
        }
        arrays_.emplace(name, n);
        for (int i = 1; i <= n; ++i)
        {
            registers_.emplace(entry(name, i), initial);
        }
    }

    bool SharedMemory::has(const std::string& name) const
    {
        return registers_.count(name) > 0 || arrays_.count(name) > 0;
    }

    bool SharedMemory::is_array(const std::string& name) const
    {
        return arrays_.count(name) > 0;
    }

    int SharedMemory::array_size(const std::string& name) const
    {
        auto it = arrays_.find(name);
        if (it == arrays_.end())
        {
            throw Error("unknown shared array '" + name + "'");
        }
        return it->second;
    }

    std::string SharedMemory::entry(const std::string& array, int i)
    {
        return array + "[" + std::to_string(i) + "]";
    }

    const Json& SharedMemory::read(const std::string& reg) const
    {
        auto it = registers_.find(reg);
        if (it == registers_.end())
        {
            throw Error("unknown shared register '" + reg + "'");
        }
        return it->second;
    }

    void SharedMemory::write(const std::string& reg, Json value)
    {
        auto it = registers_.find(reg);
        if (it == registers_.end())
        {
            throw Error("unknown shared register '" + reg + "'");
        }
        it->second = std::move(value);
    }

    Json SharedMemory::snapshot(const std::string& array) const
    {
        int n = array_size(array);
        Json out = Json::array();
        for (int i = 1; i <= n; ++i)
        {
            out.push_back(registers_.at(entry(array, i)));
        }
        return out;
    }

    Access parse_access(const std::string& target, bool write, bool whole_array)
    {
        Access a;
        a.write = write;
        if (whole_array)
        {
            a.base = target;
            a.index = 0;
            return a;
        }
        auto open = target.rfind('[');
        if (open != std::string::npos && !target.empty() && target.back() == ']')
        {
            a.base = target.substr(0, open);
            a.index = std::stoi(target.substr(open + 1, target.size() - open - 2));
            return a;
        }
        a.base = target;
        return a;
    }

    bool conflicts(const Access& a, const Access& b)
    {
        if (a.base != b.base || (!a.write && !b.write))
        {
            return false;
        }
        // A snapshot overlaps every entry of its array.
        return a.index == b.index || a.index == 0 || b.index == 0;
    }
} // namespace drv
