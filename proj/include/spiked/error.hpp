#pragma once

#include <stdexcept>
#include <string>

namespace spiked {

/// Raised when an argument violates a documented precondition.
/// The CLI maps this to exit code 2.
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure fails to converge or produces a
/// non-finite value. The CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw precondition_error(message);
}

}  // namespace spiked
