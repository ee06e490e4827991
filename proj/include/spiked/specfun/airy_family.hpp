#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "spiked/error.hpp"
#include "spiked/fredholm/quadrature.hpp"
#include "spiked/specfun/airy.hpp"

namespace spiked {

/// Largest index m supported by the s^(m) / t^(m) families.
inline constexpr int kMaxFamilyIndex = 8;

namespace detail {

inline void check_family_index(int m, const char* who) {
    if (m < 1 || m > kMaxFamilyIndex)
        throw precondition_error(std::string(who) + ": index m must lie in [1, " +
                                 std::to_string(kMaxFamilyIndex) + "], got " + std::to_string(m));
}

inline double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

}  // namespace detail

/// s^(1)(u), ..., s^(count)(u) from the closed form
///   s^(m)(u) = sum_{l+3n=m-1} (-1)^n u^l / (3^n l! n!) + 1/(m-1)! int_inf^u (u-y)^{m-1} Ai(y) dy.
///
/// The tail integral is expanded in the moments I_j(u) = int_u^inf y^j Ai(y) dy, which
/// satisfy I_j = -u^{j-1} Ai'(u) + (j-1) u^{j-2} Ai(u) + (j-1)(j-2) I_{j-3}, so only I_0
/// needs quadrature.
inline std::array<double, kMaxFamilyIndex> s_family(double u, int count) {
    detail::check_family_index(count, "s_family");
    count = std::min(count, kMaxFamilyIndex);
    const double ai = airy_ai(u);
    const double aip = airy_ai_prime(u);

    std::array<double, kMaxFamilyIndex> moments{};
    moments[0] = airy_ai_tail_integral(u);
    for (int j = 1; j < count; ++j) {
        double v = -std::pow(u, j - 1) * aip;
        if (j >= 2) v += (j - 1) * std::pow(u, j - 2) * ai;
        if (j >= 3) v += (j - 1.0) * (j - 2.0) * moments[j - 3];
        moments[j] = v;
    }

    std::array<double, kMaxFamilyIndex> out{};
    for (int m = 1; m <= count; ++m) {
        double poly = 0.0;
        for (int n = 0; 3 * n <= m - 1; ++n) {
            const int l = m - 1 - 3 * n;
            poly += ((n % 2 == 0) ? 1.0 : -1.0) * std::pow(u, l) /
                    (std::pow(3.0, n) * detail::factorial(l) * detail::factorial(n));
        }
        // int_inf^u (u-y)^{m-1} Ai = -sum_j C(m-1,j) u^{m-1-j} (-1)^j I_j(u)
        double tail = 0.0;
        for (int j = 0; j <= m - 1; ++j)
            tail -= detail::binomial(m - 1, j) * std::pow(u, m - 1 - j) * ((j % 2 == 0) ? 1.0 : -1.0) *
                    moments[j];
        out[m - 1] = poly + tail / detail::factorial(m - 1);
    }
    return out;
}

inline double s_m(double u, int m) {
    detail::check_family_index(m, "s_m");
    return s_family(u, m)[m - 1];
}

/// t^(m)(v) = (-d/dv)^{m-1} Ai(v).
inline double t_m(double v, int m) {
    detail::check_family_index(m, "t_m");
    const double sign = ((m - 1) % 2 == 0) ? 1.0 : -1.0;
    return sign * airy_ai_derivative(m - 1, v);
}

inline std::array<double, kMaxFamilyIndex> t_family(double v, int count) {
    detail::check_family_index(count, "t_family");
    count = std::min(count, kMaxFamilyIndex);
    static const AiryDerivatives table(kMaxFamilyIndex);
    const double ai = airy_ai(v);
    const double aip = airy_ai_prime(v);
    std::array<double, kMaxFamilyIndex> out{};
    for (int m = 1; m <= count; ++m) {
        const double sign = ((m - 1) % 2 == 0) ? 1.0 : -1.0;
        out[m - 1] = sign * table(m - 1, v, ai, aip);
    }
    return out;
}

/// Integration path from inf*e^{i angle_left} to the vertex and on to
/// inf*e^{i angle_right}, truncated at truncation_radius along each ray.
struct ContourSpec {
    std::complex<double> vertex{0.0, -1.0};
    double angle_right = std::numbers::pi / 6.0;
    double angle_left = 5.0 * std::numbers::pi / 6.0;
    double truncation_radius = 12.0;
    int nodes_per_ray = 200;

    /// Default contour keeping every pole i*w_j strictly above it.
    static ContourSpec below_poles(std::span<const double> w) {
        double lowest = 0.0;
        for (double wj : w) lowest = std::min(lowest, wj);
        ContourSpec c;
        c.vertex = {0.0, -(1.0 + std::max(0.0, -lowest))};
        return c;
    }

    ContourSpec refined() const {
        ContourSpec c = *this;
        c.truncation_radius *= 2.0;
        c.nodes_per_ray *= 2;
        return c;
    }

    /// Vertical gap between point p and the contour at Re(p); positive when p is above.
    double height_above(std::complex<double> p) const {
        const double dx = p.real() - vertex.real();
        const double slope = dx >= 0.0 ? std::tan(angle_right) : std::tan(std::numbers::pi - angle_left);
        return p.imag() - (vertex.imag() + std::abs(dx) * slope);
    }

    void validate() const {
        require(truncation_radius > 0.0, "ContourSpec: truncation_radius must be positive");
        require(nodes_per_ray >= 8, "ContourSpec: nodes_per_ray must be >= 8");
        // Re(i a^3) -> -inf along a ray at angle t iff sin(3t) > 0.
        const double margin = 1e-3;
        if (!(std::sin(3.0 * angle_right) > margin && angle_right > 0.0 && angle_right < std::numbers::pi / 3.0))
            throw numerical_error("ContourSpec: right ray is outside the decay sector (0, pi/3)");
        if (!(std::sin(3.0 * angle_left) > margin && angle_left > 2.0 * std::numbers::pi / 3.0 &&
              angle_left < std::numbers::pi))
            throw numerical_error("ContourSpec: left ray is outside the decay sector (2pi/3, pi)");
    }
};

namespace detail {

/// (1/2pi) * integral of f along the contour, returned as a complex number.
template <class F>
std::complex<double> contour_integral(const ContourSpec& contour, F&& f) {
    using cd = std::complex<double>;
    contour.validate();
    // Two Gauss-Legendre panels per ray, denser near the vertex.
    const int half = contour.nodes_per_ray / 2;
    const double split = 0.25 * contour.truncation_radius;
    const auto [r1, w1] = gauss_legendre(half, 0.0, split);
    const auto [r2, w2] = gauss_legendre(contour.nodes_per_ray - half, split, contour.truncation_radius);

    const cd dir_right = std::polar(1.0, contour.angle_right);
    const cd dir_left = std::polar(1.0, contour.angle_left);
    cd total{0.0, 0.0};
    double peak = 0.0;
    auto ray = [&](const std::vector<double>& r, const std::vector<double>& w) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            const cd right = f(contour.vertex + r[i] * dir_right);
            const cd left = f(contour.vertex + r[i] * dir_left);
            peak = std::max({peak, std::abs(right), std::abs(left)});
            total += w[i] * right * dir_right;
            total -= w[i] * left * dir_left;
        }
    };
    ray(r1, w1);
    ray(r2, w2);

    const double at_end = std::max(std::abs(f(contour.vertex + contour.truncation_radius * dir_right)),
                                   std::abs(f(contour.vertex + contour.truncation_radius * dir_left)));
    if (!(at_end <= 1e-14 * peak) && at_end != 0.0)
        throw numerical_error("contour integral: integrand does not decay along the contour");
    if (!std::isfinite(total.real()) || !std::isfinite(total.imag()))
        throw numerical_error("contour integral: non-finite value");
    return total / (2.0 * std::numbers::pi);
}

inline double checked_real(std::complex<double> value, const char* who) {
    if (std::abs(value.imag()) > 1e-8 * std::max(1.0, std::abs(value.real())))
        throw numerical_error(std::string(who) + ": contour integral has imaginary part " +
                              std::to_string(value.imag()));
    return value.real();
}

}  // namespace detail

/// Raw complex value of (1/2pi) int e^{iua + ia^3/3} prod_j (w_j + ia)^{-1} da.
inline std::complex<double> s_m_w_raw(double u, std::span<const double> w, const ContourSpec& contour) {
    using cd = std::complex<double>;
    require(!w.empty() && static_cast<int>(w.size()) <= kMaxFamilyIndex,
            "s_m_w: number of parameters must lie in [1, 8]");
    for (double wj : w) {
        const double gap = contour.height_above(cd{0.0, wj});
        if (gap <= 1e-3)
            throw numerical_error("s_m_w: pole i*w = " + std::to_string(wj) +
                                  "i is on or below the contour");
    }
    const cd I{0.0, 1.0};
    return detail::contour_integral(contour, [&](cd a) {
        cd denom{1.0, 0.0};
        for (double wj : w) denom *= (wj + I * a);
        return std::exp(I * u * a + I * a * a * a / 3.0) / denom;
    });
}

/// s^(m)(u; w_1..w_m) by contour quadrature.
inline double s_m_w(double u, int m, std::span<const double> w, const ContourSpec& contour) {
    detail::check_family_index(m, "s_m_w");
    require(static_cast<int>(w.size()) == m, "s_m_w: expected m parameters");
    return detail::checked_real(s_m_w_raw(u, w, contour), "s_m_w");
}

inline double s_m_w(double u, int m, std::span<const double> w) {
    return s_m_w(u, m, w, ContourSpec::below_poles(w));
}

inline std::complex<double> t_m_w_raw(double v, std::span<const double> w, const ContourSpec& contour) {
    using cd = std::complex<double>;
    require(static_cast<int>(w.size()) < kMaxFamilyIndex, "t_m_w: at most 7 parameters");
    const cd I{0.0, 1.0};
    return detail::contour_integral(contour, [&](cd b) {
        cd poly{1.0, 0.0};
        for (double wj : w) poly *= (wj - I * b);
        return std::exp(I * v * b + I * b * b * b / 3.0) * poly;
    });
}

/// t^(m)(v; w_1..w_{m-1}) by contour quadrature.
inline double t_m_w(double v, int m, std::span<const double> w, const ContourSpec& contour) {
    detail::check_family_index(m, "t_m_w");
    require(static_cast<int>(w.size()) == m - 1, "t_m_w: expected m-1 parameters");
    return detail::checked_real(t_m_w_raw(v, w, contour), "t_m_w");
}

/// t^(m)(v; w) = prod_j (w_j - d/dv) Ai(v), expanded exactly in Airy derivatives.
inline double t_m_w_exact(double v, int m, std::span<const double> w) {
    detail::check_family_index(m, "t_m_w");
    require(static_cast<int>(w.size()) == m - 1, "t_m_w: expected m-1 parameters");
    // coefficients c_n of prod_j (w_j - D) = sum_n c_n D^n
    std::vector<double> c{1.0};
    for (double wj : w) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t n = 0; n < c.size(); ++n) {
            next[n] += wj * c[n];
            next[n + 1] -= c[n];
        }
        c = std::move(next);
    }
    static const AiryDerivatives table(kMaxFamilyIndex);
    const double ai = airy_ai(v);
    const double aip = airy_ai_prime(v);
    double total = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) total += c[n] * table(static_cast<int>(n), v, ai, aip);
    return total;
}

/// s^(1)(u; w_1), s^(2)(u; w_1, w_2), ..., s^(count)(u; w_1..w_count) in one pass
/// over the contour, which must keep all of w_1..w_count below it.
inline std::array<double, kMaxFamilyIndex> s_family_w(double u, int count, std::span<const double> w,
                                                      const ContourSpec& contour) {
    using cd = std::complex<double>;
    detail::check_family_index(count, "s_family_w");
    require(static_cast<int>(w.size()) >= count, "s_family_w: need at least count parameters");
    for (int j = 0; j < count; ++j)
        if (contour.height_above(cd{0.0, w[j]}) <= 1e-3)
            throw numerical_error("s_m_w: pole i*w = " + std::to_string(w[j]) + "i is on or below the contour");
    const cd I{0.0, 1.0};
    std::array<cd, kMaxFamilyIndex> acc{};
    // Each entry is a separate contour integral; run them through one traversal.
    for (int m = 1; m <= count; ++m) {
        acc[m - 1] = detail::contour_integral(contour, [&](cd a) {
            cd denom{1.0, 0.0};
            for (int j = 0; j < m; ++j) denom *= (w[j] + I * a);
            return std::exp(I * u * a + I * a * a * a / 3.0) / denom;
        });
    }
    std::array<double, kMaxFamilyIndex> out{};
    for (int m = 0; m < count; ++m) out[m] = detail::checked_real(acc[m], "s_m_w");
    return out;
}

/// t^(1)(v), t^(2)(v; w_1), ..., t^(count)(v; w_1..w_{count-1}).
inline std::array<double, kMaxFamilyIndex> t_family_w(double v, int count, std::span<const double> w) {
    detail::check_family_index(count, "t_family_w");
    require(static_cast<int>(w.size()) >= count - 1, "t_family_w: need at least count-1 parameters");
    std::array<double, kMaxFamilyIndex> out{};
    for (int m = 1; m <= count; ++m) out[m - 1] = t_m_w_exact(v, m, w.first(static_cast<std::size_t>(m - 1)));
    return out;
}


/// Evaluates s^(1..count)(u; w) along a non-decreasing sequence of points.
///
/// Near the origin the contour integral is used. Its integrand reaches
/// e^{-u Im(vertex)} at the vertex, so past switch_point() the values are
/// continued with the linear chain s^(m)' = s^(m-1) - w_m s^(m), s^(0) = Ai,
/// integrated by an adaptive Dormand-Prince stepper.
class SFamilyWalker {
public:
    SFamilyWalker(int count, std::span<const double> w, ContourSpec contour)
        : count_(count), w_(w.begin(), w.end()), contour_(contour) {
        detail::check_family_index(count, "SFamilyWalker");
        require(static_cast<int>(w.size()) >= count, "SFamilyWalker: need at least count parameters");
        switch_ = 8.0 / std::max(1.0, -contour_.vertex.imag());
    }

    double switch_point() const { return switch_; }

    std::array<double, kMaxFamilyIndex> operator()(double u) {
        require(!has_state_ || u >= u_, "SFamilyWalker: points must be non-decreasing");
        if (u <= switch_) {
            values_ = s_family_w(u, count_, w_, contour_);
            u_ = u;
            has_state_ = true;
            return values_;
        }
        if (!has_state_ || u_ < switch_) {
            values_ = s_family_w(switch_, count_, w_, contour_);
            u_ = switch_;
            has_state_ = true;
        }
        advance(u);
        return values_;
    }

private:
    void advance(double target) {
        namespace odeint = boost::numeric::odeint;
        using State = std::vector<double>;
        if (target == u_) return;
        State y(values_.begin(), values_.begin() + count_);
        auto rhs = [this](const State& s, State& ds, double u) {
            double prev = airy_ai(u);
            for (int m = 0; m < count_; ++m) {
                ds[m] = prev - w_[m] * s[m];
                prev = s[m];
            }
        };
        auto stepper = odeint::make_controlled(1e-14, 1e-12, odeint::runge_kutta_dopri5<State>());
        odeint::integrate_adaptive(stepper, rhs, y, u_, target, 0.05);
        for (int m = 0; m < count_; ++m) {
            if (!std::isfinite(y[m])) throw numerical_error("s_m_w: continuation overflowed at u = " + std::to_string(target));
            values_[m] = y[m];
        }
        u_ = target;
    }

    int count_;
    std::vector<double> w_;
    ContourSpec contour_;
    double switch_ = 0.0;
    bool has_state_ = false;
    double u_ = 0.0;
    std::array<double, kMaxFamilyIndex> values_{};
};

}  // namespace spiked
