#pragma once

#include <optional>

#include "cisim/error.hpp"

namespace cisim::test {

/// Error code raised by f, or nullopt when it returns normally.
template <class F>
std::optional<ErrorCode> error_of(F&& f) {
    try {
        f();
    } catch (const SimError& e) {
        return e.code();
    }
    return std::nullopt;
}

}  // namespace cisim::test
