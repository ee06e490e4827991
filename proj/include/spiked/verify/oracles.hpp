#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/numeric/odeint.hpp>

#include "spiked/error.hpp"
#include "spiked/fredholm/quadrature.hpp"
#include "spiked/specfun/airy.hpp"

// Reference values computed independently of the library code paths.
namespace spiked::oracle {

/// Maclaurin series of Ai; accurate to about 1e-13 for |x| <= 3.
inline double airy_maclaurin(double x) {
    const double c1 = 0.355028053887817239260;
    const double c2 = 0.258819403792806798405;
    double f = 1.0, g = x, tf = 1.0, tg = x;
    const double x3 = x * x * x;
    for (int k = 1; k < 60; ++k) {
        tf *= x3 / ((3.0 * k - 1.0) * (3.0 * k));
        tg *= x3 / ((3.0 * k) * (3.0 * k + 1.0));
        f += tf;
        g += tg;
        if (std::abs(tf) + std::abs(tg) < 1e-18 * (std::abs(f) + std::abs(g))) break;
    }
    return c1 * f - c2 * g;
}

/// Hastings-McLeod u (u ~ -Ai at +inf) by backward shooting from x = 8 with dopri5.
inline double hastings_mcleod_shoot(double x) {
    require(x >= -4.0 && x <= 8.0, "hastings_mcleod_shoot: x must lie in [-4, 8]");
    using State = std::array<double, 2>;
    State y = {-airy_ai(8.0), -airy_ai_prime(8.0)};
    if (x == 8.0) return y[0];
    auto rhs = [](const State& s, State& ds, double t) {
        ds[0] = s[1];
        ds[1] = t * s[0] + 2.0 * s[0] * s[0] * s[0];
    };
    namespace ode = boost::numeric::odeint;
    ode::integrate_adaptive(ode::make_controlled(1e-15, 1e-13, ode::runge_kutta_dopri5<State>()), rhs, y, 8.0, x,
                            -1e-3);
    return y[0];
}

/// Z_k = (2 pi)^{k/2} prod_{j=1}^k j!.
inline double gue_normalizer(int k) {
    double z = std::pow(2.0 * std::numbers::pi, 0.5 * k);
    for (int j = 2; j <= k; ++j) z *= std::tgamma(j + 1.0);
    return z;
}

/// G_k(x) by tensor Gauss-Legendre quadrature of the k-fold integral over (-L, x]^k, k <= 3.
inline double gk_tensor(double x, int k, int n = 80, double left = -14.0) {
    require(k >= 1 && k <= 3, "gk_tensor: k must lie in [1, 3]");
    if (x <= left) return 0.0;
    const auto [t, w0] = gauss_legendre(n, left, x);
    std::vector<double> g(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) g[i] = w0[i] * std::exp(-0.5 * t[i] * t[i]);
    double sum = 0.0;
    const std::size_t m = t.size();
    if (k == 1) {
        for (double v : g) sum += v;
    } else if (k == 2) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) sum += g[i] * g[j] * (t[i] - t[j]) * (t[i] - t[j]);
    } else {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                const double dij = (t[i] - t[j]) * (t[i] - t[j]);
                const double gij = g[i] * g[j] * dij;
                for (std::size_t l = 0; l < m; ++l) {
                    const double v = (t[i] - t[l]) * (t[j] - t[l]);
                    sum += gij * g[l] * v * v;
                }
            }
    }
    return sum / gue_normalizer(k);
}

inline double normal_cdf(double x) { return boost::math::cdf(boost::math::normal_distribution<double>(), x); }

/// CDF of Gamma(shape, rate) at x.
inline double gamma_cdf(double shape, double rate, double x) {
    if (x <= 0.0) return 0.0;
    return boost::math::cdf(boost::math::gamma_distribution<double>(shape, 1.0 / rate), x);
}

/// F_0 by a Nystrom determinant on [s, s + 16] with 120 Gauss-Legendre nodes, computed in double precision
/// with an independent implementation.
inline constexpr std::array<std::pair<double, double>, 7> kTracyWidomGue = {{
    {-4.0, 0.003544553595509665},
    {-3.0, 0.08031955293933433},
    {-2.0, 0.4132241425051209},
    {-1.0, 0.807214241999284},
    {0.0, 0.969372828355262},
    {1.0, 0.9975054381493893},
    {2.0, 0.99988755369831},
}};

/// Hastings-McLeod q(0) = -u(0).
inline constexpr double kHastingsMcLeodAtZero = 0.36706155154807;

/// int_0^inf Ai(z) Ai(1 + z) dz = K_Airy(0, 1), 30-digit quadrature.
inline constexpr double kAiryKernel01 = 0.0214855038370379548457113253982;

/// s^(m)(u) from the closed form with the tail integral done at 30 digits.
struct FamilyValue {
    double u;
    int m;
    double value;
};
inline constexpr std::array<FamilyValue, 6> kSFamily = {{
    {-2.0, 1, -0.235106159371939711160074241831},
    {0.0, 2, 0.258819403792806798405183560189},
    {2.0, 3, 1.99402716411670915877405633535},
    {-3.0, 5, -0.0151252272184283094081469477172},
    {0.0, 4, -0.222222222222222222222222222222},
    {-40.0, 1, 0.0346974818775879273591798566202},
}};

/// s(0; w) = int_{-inf}^0 e^{w y} Ai(y) dy for a single parameter.
inline constexpr std::array<std::pair<double, double>, 3> kSOneParameterAtZero = {{
    {4.0, 0.103154583449186683775514094279},
    {6.0, 0.06602666239584986401153157093},
    {8.0, 0.0483209060554430831925079648237},
}};

/// t(0; (1)) = Ai(0) - Ai'(0).
inline constexpr double kTOneParameterAtZero = 0.613847457680624037665246746193;

/// G_k by tensor quadrature (90 nodes per axis on (-14, x]).
struct GkValue {
    int k;
    double x;
    double value;
};
inline constexpr std::array<GkValue, 12> kGk = {{
    {1, -1.0, 0.15865525393145635},
    {1, 0.0, 0.49999999999999856},
    {1, 1.5, 0.9331927987311418},
    {1, 3.0, 0.9986501019683711},
    {2, -1.0, 0.005011584818299252},
    {2, 0.0, 0.09084505690810421},
    {2, 1.5, 0.6727766606400141},
    {2, 3.0, 0.9840047872756199},
    {3, -1.0, 3.5692832702041993e-05},
    {3, 0.0, 0.005633792681078461},
    {3, 1.5, 0.3082257871794259},
    {3, 3.0, 0.9161916392835069},
}};

}  // namespace spiked::oracle
