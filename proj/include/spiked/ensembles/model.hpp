#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "spiked/error.hpp"

namespace spiked {

/// Ensemble parameters: M samples of N variables whose population covariance
/// has eigenvalues spikes[0..r) followed by N - r ones.
struct SpikedModel {
    int M = 1;
    int N = 1;
    std::vector<double> spikes;

    int rank() const { return static_cast<int>(spikes.size()); }
    double gamma_squared() const { return static_cast<double>(M) / N; }
    double gamma() const { return std::sqrt(gamma_squared()); }

    /// Population eigenvalue of variable i (0-based).
    double population(int i) const { return i < rank() ? spikes[static_cast<std::size_t>(i)] : 1.0; }

    /// pi_i = 1 / l_i for all N variables.
    std::vector<double> pis() const {
        std::vector<double> out(static_cast<std::size_t>(N));
        for (int i = 0; i < N; ++i) out[static_cast<std::size_t>(i)] = 1.0 / population(i);
        return out;
    }

    std::vector<double> sorted_spikes() const {
        std::vector<double> s = spikes;
        std::sort(s.begin(), s.end(), std::greater<>());
        return s;
    }

    void validate() const {
        require(M >= 1, "model.M must be >= 1, got " + std::to_string(M));
        require(N >= 1, "model.N must be >= 1, got " + std::to_string(N));
        require(rank() <= N, "model.spikes: at most N = " + std::to_string(N) + " spikes allowed, got " +
                                 std::to_string(rank()));
        for (std::size_t j = 0; j < spikes.size(); ++j)
            require(std::isfinite(spikes[j]) && spikes[j] > 0.0,
                    "model.spikes[" + std::to_string(j) + "] must be a positive finite number");
    }

    bool operator==(const SpikedModel&) const = default;
};

inline std::string describe(const SpikedModel& m) {
    std::string s = "M=" + std::to_string(m.M) + " N=" + std::to_string(m.N) + " spikes=(";
    for (std::size_t j = 0; j < m.spikes.size(); ++j) {
        if (j) s += ",";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", m.spikes[j]);
        s += buf;
    }
    return s + ")";
}

}  // namespace spiked
