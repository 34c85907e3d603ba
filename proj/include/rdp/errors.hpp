#pragma once

#include <stdexcept>
#include <string>

namespace rdp {

/// Raised for precondition violations: malformed pmfs, dimension mismatches,
/// out-of-domain parameters. The CLI maps it to exit code 2.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

inline void require(bool condition, const std::string& message)
{
    if (!condition) {
        throw InputError(message);
    }
}

} // namespace rdp
