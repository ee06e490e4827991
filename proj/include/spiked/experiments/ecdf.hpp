#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "spiked/error.hpp"

namespace spiked {

/// Right-continuous empirical distribution function.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::span<const double> samples) : sorted_(samples.begin(), samples.end()) {
        require(!sorted_.empty(), "ecdf: need at least one sample");
        for (double s : sorted_) require(!std::isnan(s), "ecdf: samples must not be NaN");
        std::sort(sorted_.begin(), sorted_.end());
    }

    double operator()(double x) const {
        const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
        return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
    }

    const std::vector<double>& sorted() const { return sorted_; }
    std::size_t size() const { return sorted_.size(); }

private:
    std::vector<double> sorted_;
};

inline EmpiricalCdf ecdf(std::span<const double> samples) { return EmpiricalCdf(samples); }

/// sup_x |ECDF(x) - F(x)|, attained at a sample point or just left of one.
template <class Cdf>
double ks_distance(std::span<const double> samples, Cdf&& reference) {
    const EmpiricalCdf e(samples);
    const auto& s = e.sorted();
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        // skip to the last of a run of ties
        if (i + 1 < s.size() && s[i + 1] == s[i]) continue;
        const double f = reference(s[i]);
        const double below = std::lower_bound(s.begin(), s.end(), s[i]) - s.begin();
        d = std::max({d, std::abs((i + 1) / n - f), std::abs(below / n - f)});
    }
    return d;
}

/// Two-sample statistic sup_x |ECDF_a(x) - ECDF_b(x)|.
inline double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    const EmpiricalCdf ea(a);
    const EmpiricalCdf eb(b);
    const auto& x = ea.sorted();
    const auto& y = eb.sorted();
    const double na = static_cast<double>(x.size());
    const double nb = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == t) ++i;
        while (j < y.size() && y[j] == t) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

/// 1% critical value 1.63 sqrt((n + m) / (n m)) of the two-sample statistic.
inline double ks_two_sample_critical(std::size_t n, std::size_t m) {
    return 1.63 * std::sqrt(double(n + m) / (double(n) * double(m)));
}

}  // namespace spiked
