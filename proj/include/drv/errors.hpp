#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace drv
{
    struct Error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct InvalidWord : Error
    {
        using Error::Error;
    };

    struct CapExceeded : Error
    {
        using Error::Error;
    };

    struct ParseError : Error
    {
        ParseError(std::size_t line, const std::string& what)
            : Error("line " + std::to_string(line) + ": " + what), line(line)
        {
        }
        std::size_t line;
    };

    struct ConfigError : Error
    {
        using Error::Error;
    };

    // A monitor block took more steps than it declared.
    struct WaitFreeViolation : Error
    {
        using Error::Error;
    };

    struct IllegalReorder : Error
    {
        using Error::Error;
    };

    struct ScriptMismatch : Error
    {
        using Error::Error;
    };

    struct IncomparableViews : Error
    {
        using Error::Error;
    };
} // namespace drv
