#pragma once

#include "sflda/estimation.hpp"
#include "sflda/grid.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace sflda {

/// Weights of the L1 term (lambda) and the derivative-energy term (eta).
struct PenaltyParams {
    double lambda = 0.0;
    double eta = 0.0;

    void validate() const;
};

struct SolverOptions {
    std::size_t max_iter = 10000;  // full sweeps
    double tol = 1e-8;             // relative objective change
    std::optional<Vector> beta_init;

    void validate(std::size_t grid_size) const;
};

struct FitReport {
    std::size_t iterations = 0;
    std::vector<double> objective_trace;  // objective after each sweep, starting with the initial point
    double kkt_residual = 0.0;
    std::size_t active_set_size = 0;
    bool converged = false;
};

/**
 * Fitted linear discriminant: score(x) = <x - mu_mid, beta> * sign(proj_delta).
 */
class Discriminant {
public:
    Discriminant(Grid grid, Vector beta, Vector mu_mid, double proj_delta, PenaltyParams params);

    const Grid& grid() const noexcept { return grid_; }
    const Vector& beta() const noexcept { return beta_; }
    const Vector& mu_mid() const noexcept { return mu_mid_; }
    double proj_delta() const noexcept { return proj_delta_; }
    const PenaltyParams& params() const noexcept { return params_; }

    GridFunction beta_function() const { return GridFunction(grid_, beta_); }

private:
    // Exact solve on the current support with fixed signs; applied only if signs hold and J does not increase.
    bool polish(Vector& beta, const std::vector<signed char>& signs, double lambda,
                double current) const;

    Grid grid_;
    Vector beta_;
    Vector mu_mid_;
    double proj_delta_;
    PenaltyParams params_;
};

struct FitResult {
    Discriminant discriminant;
    FitReport report;
};

/// 1/2 <G b, b> - <delta, b> + lambda ||b||_1 + eta/2 ||b'||_2^2 in quadrature form.
double objective(const GridFunction& beta, const DiscretizedModel& model, const PenaltyParams& params);

/// ||delta||_inf: every lambda at or above this yields the zero solution.
double lambda_max(const DiscretizedModel& model);

/// Maximal violation of the subgradient optimality conditions, in per-point units.
double kkt_residual(const GridFunction& beta, const DiscretizedModel& model, const PenaltyParams& params);

inline double soft_threshold(double z, double gamma) noexcept {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

/**
 * Cyclic coordinate descent for a fixed model and derivative weight.
 * The quadratic form W G W + eta L is built once, so a decreasing lambda
 * path can reuse it with warm starts.
 */
class CoordinateDescent {
public:
    CoordinateDescent(const DiscretizedModel& model, double eta);

    FitResult solve(double lambda, const SolverOptions& opts) const;

    double eta() const noexcept { return eta_; }
    const Matrix& quadratic() const noexcept { return quad_; }

private:
    // Exact solve on the current support with fixed signs; applied only if signs hold and J does not increase.
    bool polish(Vector& beta, const std::vector<signed char>& signs, double lambda,
                double current) const;

    Grid grid_;
    Vector mu_mid_;
    Vector delta_;
    double eta_;
    Matrix quad_;    // W G W + eta L
    Vector linear_;  // W delta
};

FitResult fit(const DiscretizedModel& model, const PenaltyParams& params, const SolverOptions& opts = {});

/// Warm-started fits along `lambdas` (expected descending) for a fixed eta.
std::vector<FitResult> fit_path(const DiscretizedModel& model, const std::vector<double>& lambdas, double eta,
                                const SolverOptions& opts = {});

}  // namespace sflda
