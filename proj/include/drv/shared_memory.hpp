#pragma once

// Atomic read/write registers and snapshot-able register arrays. Values are
// JSON so monitors can store sets, triples and counters alike.

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace drv
{
    using Json = nlohmann::json;

    class SharedMemory
    {
    public:
        void declare_register(const std::string& name, Json initial);
        void declare_array(const std::string& name, int n, Json initial);

        bool has(const std::string& name) const;
        bool is_array(const std::string& name) const;
        int array_size(const std::string& name) const;

        // Entry i (1-based) of an array is the register "name[i]".
        static std::string entry(const std::string& array, int i);

        const Json& read(const std::string& reg) const;
        void write(const std::string& reg, Json value);
        // Atomic read of every entry of an array, in index order.
        Json snapshot(const std::string& array) const;

        const std::map<std::string, Json>& registers() const noexcept { return registers_; }

        friend bool operator==(const SharedMemory&, const SharedMemory&) = default;

    private:
        std::map<std::string, Json> registers_;
        std::map<std::string, int> arrays_;
    };

    // The shared object a step touches, for dependency checks: an array name
    // plus entry index (0 for a whole-array snapshot), or a plain register.
    struct Access
    {
        std::string base;
        int index = -1; // -1 plain register, 0 whole array, k entry k
        bool write = false;
    };

    Access parse_access(const std::string& target, bool write, bool whole_array);
    bool conflicts(const Access& a, const Access& b);
} // namespace drv
