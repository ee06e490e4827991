#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "spiked/error.hpp"

namespace spiked {

inline constexpr int kMaxHermiteDegree = 200;

/// p_0(x) e^{-x^2/4}, ..., p_n(x) e^{-x^2/4} for the polynomials orthonormal
/// against e^{-x^2/2}. Recurrence: p_{j+1} = (x p_j - sqrt(j) p_{j-1}) / sqrt(j+1).
inline std::vector<double> hermite_functions(int n, double x) {
    if (n < 0 || n > kMaxHermiteDegree)
        throw precondition_error("hermite: degree must lie in [0, " + std::to_string(kMaxHermiteDegree) +
                                 "], got " + std::to_string(n));
    std::vector<double> out(n + 1);
    out[0] = std::exp(-0.25 * x * x) / std::pow(2.0 * std::numbers::pi, 0.25);
    if (n >= 1) out[1] = x * out[0];
    for (int j = 1; j < n; ++j) out[j + 1] = (x * out[j] - std::sqrt(double(j)) * out[j - 1]) / std::sqrt(j + 1.0);
    return out;
}

/// p_n(x) = (2 pi)^{-1/4} 2^{-n/2} (n!)^{-1/2} H_n(x / sqrt 2).
inline double hermite_orthonormal(int n, double x) {
    if (n < 0 || n > kMaxHermiteDegree)
        throw precondition_error("hermite_orthonormal: degree must lie in [0, " +
                                 std::to_string(kMaxHermiteDegree) + "], got " + std::to_string(n));
    double prev = 1.0 / std::pow(2.0 * std::numbers::pi, 0.25);
    if (n == 0) return prev;
    double cur = x * prev;
    for (int j = 1; j < n; ++j) {
        const double next = (x * cur - std::sqrt(double(j)) * prev) / std::sqrt(j + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace spiked
