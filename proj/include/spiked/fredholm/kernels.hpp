#pragma once

#include <cmath>

#include "spiked/error.hpp"
#include "spiked/specfun/airy.hpp"
#include "spiked/specfun/hermite.hpp"

namespace spiked {

/// Airy kernel (Ai(u)Ai'(v) - Ai'(u)Ai(v)) / (u - v). For |u - v| < 1e-4 the
/// diagonal value at the midpoint, Ai'(c)^2 - c Ai(c)^2, is used; it is exact
/// to first order because the kernel is symmetric.
inline double airy_kernel(double u, double v) {
    if (std::abs(u - v) < 1e-4) {
        const double c = 0.5 * (u + v);
        const double ai = airy_ai(c);
        const double aip = airy_ai_prime(c);
        return aip * aip - c * ai * ai;
    }
    return (airy_ai(u) * airy_ai_prime(v) - airy_ai_prime(u) * airy_ai(v)) / (u - v);
}

/// Airy kernel from precomputed Ai / Ai' values (used when filling Nystrom matrices).
inline double airy_kernel(double u, double ai_u, double aip_u, double v, double ai_v, double aip_v) {
    if (std::abs(u - v) < 1e-4) return airy_kernel(u, v);
    return (ai_u * aip_v - aip_u * ai_v) / (u - v);
}

/// Hermite (finite GUE) kernel
///   sqrt(k) (p_k(u)p_{k-1}(v) - p_{k-1}(u)p_k(v)) / (u - v) * e^{-(u^2+v^2)/4}.
/// Near the diagonal the equivalent Christoffel-Darboux sum
/// sum_{j<k} p_j(u)p_j(v) e^{-(u^2+v^2)/4} is used instead of the quotient.
inline double hermite_kernel(double u, double v, int k) {
    require(k >= 1 && k <= kMaxHermiteDegree, "hermite_kernel: k must lie in [1, 200]");
    const auto pu = hermite_functions(k, u);
    const auto pv = hermite_functions(k, v);
    if (std::abs(u - v) < 1e-3) {
        double sum = 0.0;
        for (int j = 0; j < k; ++j) sum += pu[j] * pv[j];
        return sum;
    }
    return std::sqrt(double(k)) * (pu[k] * pv[k - 1] - pu[k - 1] * pv[k]) / (u - v);
}

}  // namespace spiked
