#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/special_functions/airy.hpp>

#include "spiked/error.hpp"
#include "spiked/fredholm/quadrature.hpp"

namespace spiked {

/// Ai(u). Values beyond the double-precision underflow point return 0.
inline double airy_ai(double u) {
    if (u > 104.0) return 0.0;
    return boost::math::airy_ai(u);
}

inline double airy_ai_prime(double u) {
    if (u > 104.0) return 0.0;
    return boost::math::airy_ai_prime(u);
}

/// Ai^(n)(u) = P_n(u) Ai(u) + Q_n(u) Ai'(u), with P, Q generated from
/// Ai'' = u Ai. No numerical differentiation is involved.
class AiryDerivatives {
public:
    explicit AiryDerivatives(int max_order) : p_(max_order + 1), q_(max_order + 1) {
        require(max_order >= 0, "AiryDerivatives: negative order");
        p_[0] = {1.0};
        q_[0] = {0.0};
        for (int n = 0; n < max_order; ++n) {
            // d/du (P Ai + Q Ai') = (P' + u Q) Ai + (P + Q') Ai'
            const auto& p = p_[n];
            const auto& q = q_[n];
            std::vector<double> np(std::max(p.size(), q.size() + 1), 0.0);
            std::vector<double> nq(std::max(p.size(), q.size()), 0.0);
            for (std::size_t i = 1; i < p.size(); ++i) np[i - 1] += i * p[i];
            for (std::size_t i = 0; i < q.size(); ++i) np[i + 1] += q[i];
            for (std::size_t i = 0; i < p.size(); ++i) nq[i] += p[i];
            for (std::size_t i = 1; i < q.size(); ++i) nq[i - 1] += i * q[i];
            p_[n + 1] = std::move(np);
            q_[n + 1] = std::move(nq);
        }
    }

    int max_order() const { return static_cast<int>(p_.size()) - 1; }

    /// Ai^(n)(u) given precomputed ai = Ai(u), aip = Ai'(u).
    double operator()(int n, double u, double ai, double aip) const {
        return horner(p_[n], u) * ai + horner(q_[n], u) * aip;
    }

    double operator()(int n, double u) const { return (*this)(n, u, airy_ai(u), airy_ai_prime(u)); }

private:
    static double horner(const std::vector<double>& c, double u) {
        double r = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * u + *it;
        return r;
    }

    std::vector<std::vector<double>> p_;
    std::vector<std::vector<double>> q_;
};

/// Ai^(n)(u) for 0 <= n <= 16.
inline double airy_ai_derivative(int n, double u) {
    require(n >= 0 && n <= 16, "airy_ai_derivative: order must lie in [0, 16]");
    static const AiryDerivatives table(16);
    return table(n, u);
}

/// Integral of Ai over (u, inf), using int_0^inf Ai = 1/3.
inline double airy_ai_tail_integral(double u) {
    if (u >= 0.0) {
        if (u > 100.0) return 0.0;
        const double length = 40.0 / std::sqrt(std::max(u, 1.0));
        return integrate_panels([](double y) { return airy_ai(y); }, u, u + length, 8, 20);
    }
    const double a = -u;
    const int panels = 1 + static_cast<int>(std::ceil(a * std::sqrt(a) / 3.0 + a / 2.0));
    return 1.0 / 3.0 + integrate_panels([](double y) { return airy_ai(y); }, u, 0.0, panels, 20);
}

}  // namespace spiked
