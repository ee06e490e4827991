#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "spiked/ensembles/model.hpp"
#include "spiked/ensembles/rng.hpp"
#include "spiked/error.hpp"

namespace spiked {

/// Eigenvalues, in descending order, of S = X X^* / M where the N x M matrix X has
/// independent columns drawn from the complex normal law with covariance
/// diag(l_1, ..., l_r, 1, ..., 1). Samples are not centered.
///
/// Entries are drawn column by column; each entry takes its real part and then its
/// imaginary part, each with variance l_i / 2.
inline std::vector<double> sample_spiked_wishart(const SpikedModel& model, RngStream& rng) {
    model.validate();
    require(model.M >= model.N, "sample_spiked_wishart: need M >= N, got " + describe(model));
    const int N = model.N;
    const int M = model.M;
    std::vector<double> sd(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) sd[static_cast<std::size_t>(i)] = std::sqrt(0.5 * model.population(i));

    Eigen::MatrixXcd X(N, M);
    for (int j = 0; j < M; ++j)
        for (int i = 0; i < N; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            X(i, j) = sd[static_cast<std::size_t>(i)] * std::complex<double>(re, im);
        }
    const Eigen::MatrixXcd S = (X * X.adjoint()) / double(M);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(S, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw numerical_error("sample_spiked_wishart: eigensolver failed for " + describe(model));
    std::vector<double> eig(solver.eigenvalues().data(), solver.eigenvalues().data() + N);
    std::reverse(eig.begin(), eig.end());
    return eig;
}

inline double sample_largest_eigenvalue(const SpikedModel& model, RngStream& rng) {
    return sample_spiked_wishart(model, rng).front();
}

/// Last-passage time L(N, M) with independent weights X(i, j) ~ Exp(pi_i M).
/// Row i is variable i (rate from the i-th population eigenvalue); weights are
/// drawn row by row, columns left to right.
inline double lpp_last_passage(const SpikedModel& model, RngStream& rng) {
    model.validate();
    const int N = model.N;
    const int M = model.M;
    std::vector<double> row(static_cast<std::size_t>(M), 0.0);
    for (int i = 0; i < N; ++i) {
        const double rate = M / model.population(i);
        double left = 0.0;
        for (int j = 0; j < M; ++j) {
            const double x = rng.exponential(rate);
            left = std::max(row[static_cast<std::size_t>(j)], left) + x;
            row[static_cast<std::size_t>(j)] = left;
        }
    }
    return row.back();
}

/// Time at which the last of M customers leaves a series of N tellers. Teller i
/// serves at rate pi_i M. Service times are drawn teller by teller in customer
/// order, which matches the draw order of lpp_last_passage.
inline double queue_exit_time(const SpikedModel& model, RngStream& rng) {
    model.validate();
    const int N = model.N;
    const int M = model.M;
    std::vector<double> service(static_cast<std::size_t>(N) * static_cast<std::size_t>(M));
    for (int i = 0; i < N; ++i) {
        const double rate = M / model.population(i);
        for (int j = 0; j < M; ++j) service[static_cast<std::size_t>(i) * M + j] = rng.exponential(rate);
    }
    // departure[i]: when the previous customer left teller i.
    std::vector<double> departure(static_cast<std::size_t>(N), 0.0);
    for (int j = 0; j < M; ++j) {
        double arrival = 0.0;
        for (int i = 0; i < N; ++i) {
            const double start = std::max(arrival, departure[static_cast<std::size_t>(i)]);
            departure[static_cast<std::size_t>(i)] = start + service[static_cast<std::size_t>(i) * M + j];
            arrival = departure[static_cast<std::size_t>(i)];
        }
    }
    return departure.back();
}

/// Fraction of M spent in row 1 (spikes[0]) by a maximizing path of the
/// last-passage problem. Ties in the backtrack prefer staying in the current row.
inline double lpp_column_dwell(const SpikedModel& model, RngStream& rng) {
    model.validate();
    require(model.rank() >= 1, "lpp_column_dwell: model needs at least one spike");
    const int N = model.N;
    const int M = model.M;
    std::vector<double> row(static_cast<std::size_t>(M), 0.0);
    // from_left[i*M + j]: predecessor of (i, j) is (i, j-1).
    std::vector<bool> from_left(static_cast<std::size_t>(N) * static_cast<std::size_t>(M));
    for (int i = 0; i < N; ++i) {
        const double rate = M / model.population(i);
        double left = 0.0;
        for (int j = 0; j < M; ++j) {
            const double x = rng.exponential(rate);
            const double up = row[static_cast<std::size_t>(j)];
            bool take_left;
            if (i == 0) take_left = j > 0;
            else if (j == 0) take_left = false;
            else take_left = left >= up;
            from_left[static_cast<std::size_t>(i) * M + j] = take_left;
            left = std::max(up, left) + x;
            row[static_cast<std::size_t>(j)] = left;
        }
    }
    int i = N - 1;
    int j = M - 1;
    int in_first_row = 0;
    for (;;) {
        if (i == 0) {
            in_first_row += j + 1;
            break;
        }
        if (from_left[static_cast<std::size_t>(i) * M + j]) --j;
        else --i;
    }
    return static_cast<double>(in_first_row) / M;
}

}  // namespace spiked
