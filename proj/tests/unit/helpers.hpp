#pragma once

#include "sflda/estimation.hpp"
#include "sflda/grid.hpp"
#include "sflda/rng.hpp"
#include "sflda/solver.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <cstdint>
#include <random>

namespace sflda::test {

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> z;
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = z(rng);
    }
    return m;
}

inline Vector random_vector(Eigen::Index n, Rng& rng) { return random_matrix(n, 1, rng).col(0); }

/// Positive definite G = A A^T / T + ridge I on [0,1] with random means.
inline DiscretizedModel random_model(std::size_t T, std::uint64_t seed, double ridge = 0.1) {
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(T);
    const Matrix a = random_matrix(n, n, rng);
    const Matrix g = a * a.transpose() / static_cast<double>(T) + ridge * Matrix::Identity(n, n);
    const Vector mu0 = random_vector(n, rng);
    const Vector mu1 = mu0 + random_vector(n, rng);
    return DiscretizedModel(make_grid(0.0, 1.0, T), 0.5 * (g + g.transpose()), mu0, mu1, 10, 10);
}

/// Every consecutive increase in the trace stays within `slack`.
inline void check_descent(const FitReport& report, double slack = 1e-12) {
    for (std::size_t i = 1; i < report.objective_trace.size(); ++i) {
        CHECK(report.objective_trace[i] <= report.objective_trace[i - 1] + slack);
    }
}

}  // namespace sflda::test
