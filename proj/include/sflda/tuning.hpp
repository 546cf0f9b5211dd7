#pragma once

#include "sflda/estimation.hpp"
#include "sflda/solver.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sflda {

using Fold = std::vector<std::size_t>;

/// K folds, balanced within each class; each fold is sorted ascending.
std::vector<Fold> stratified_folds(const std::vector<int>& labels, std::size_t k, std::uint64_t seed);

struct CvResult {
    std::vector<double> lambda_grid;
    std::vector<double> eta_grid;
    Matrix cv_error;              // |lambda| x |eta| mean held-out error, 1.0 for failed cells
    std::vector<bool> failed;     // row-major |lambda| x |eta|
    std::size_t best_lambda_index = 0;
    std::size_t best_eta_index = 0;
    double best_lambda = 0.0;
    double best_eta = 0.0;
    std::size_t k = 0;
    std::uint64_t seed = 0;

    bool cell_failed(std::size_t i, std::size_t j) const { return failed[i * eta_grid.size() + j]; }
};

/// lambda_max * 2^0 ... 2^-10.
std::vector<double> default_lambda_grid(const DiscretizedModel& model);
/**
 * dt^2 * {2^-1, ..., 2^-10}: the values 2^-k apply to the derivative
 * energy of the per-point coefficients w o beta, which is dt^2 times
 * that of beta.
 */
std::vector<double> default_eta_grid(const Grid& grid);

/**
 * Grid search over (lambda, eta) by stratified K-fold cross-validation on
 * misclassification error. Both grids must be sorted descending; lambda
 * paths are warm-started within each (fold, eta). Ties go to the largest
 * lambda, then the largest eta.
 */
CvResult cv_select(const CurveSet& data, const std::vector<double>& lambda_grid, const std::vector<double>& eta_grid,
                   std::size_t k, std::uint64_t seed, const SolverOptions& opts = {}, std::size_t threads = 1);

}  // namespace sflda
