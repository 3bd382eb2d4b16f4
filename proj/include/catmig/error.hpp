// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace catmig {

/// Base class of every exception thrown by the engine.
struct Error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Malformed graph, path, schema or instance data (dangling names, partial columns, duplicates).
struct StructureError : Error
{
    using Error::Error;
};

/// Two paths whose endpoints do not meet were composed.
struct CompositionError : Error
{
    std::string left_target;
    std::string right_source;

    CompositionError(std::string left_target, std::string right_source)
        : Error("cannot compose paths: first path ends at '" + left_target + "' but second starts at '" +
                right_source + "'")
        , left_target(std::move(left_target))
        , right_source(std::move(right_source))
    { }
};

struct UnknownRowError : Error
{
    UnknownRowError(const std::string &vertex, const std::string &row)
        : Error("unknown row '" + row + "' in table '" + vertex + "'")
    { }
};

/// Operands live on different schemas (or slices) than the operation requires.
struct SchemaMismatch : Error
{
    using Error::Error;
};

struct InvalidTranslation : Error
{
    using Error::Error;
};

/// A Kan extension did not stabilize within the configured bounds.  `vertex` names where it kept growing.
struct BoundError : Error
{
    std::string vertex;

    BoundError(std::string vertex, const std::string &what)
        : Error(what)
        , vertex(std::move(vertex))
    { }
};

/// Morphism enumeration exceeded its cap.
struct EnumerationCapExceeded : Error
{
    using Error::Error;
};

struct ParseError : Error
{
    std::size_t line;
    std::size_t column;
    std::vector<std::string> expected;

    ParseError(std::size_t line, std::size_t column, const std::string &message,
               std::vector<std::string> expected = {})
        : Error(format(line, column, message, expected))
        , line(line)
        , column(column)
        , expected(std::move(expected))
    { }

    private:
    static std::string format(std::size_t line, std::size_t column, const std::string &message,
                              const std::vector<std::string> &expected)
    {
        std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
        if (not expected.empty()) {
            out += " (expected ";
            for (std::size_t i = 0; i < expected.size(); ++i) {
                if (i) out += i + 1 == expected.size() ? " or " : ", ";
                out += expected[i];
            }
            out += ")";
        }
        return out;
    }
};

}
