#include "sflda/tuning.hpp"

#include "sflda/classifier.hpp"
#include "sflda/error.hpp"
#include "sflda/parallel.hpp"
#include "sflda/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sflda {

std::vector<Fold> stratified_folds(const std::vector<int>& labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw Error(ErrorCode::domain_error, "need at least 2 folds");
    std::vector<Fold> folds(k);
    Rng rng(seed);
    for (int label : {0, 1}) {
        Fold members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == label) members.push_back(i);
        }
        if (members.size() < k) {
            throw Error(ErrorCode::insufficient_data, "class " + std::to_string(label) + " has " +
                                                          std::to_string(members.size()) + " curves, fewer than " +
                                                          std::to_string(k) + " folds");
        }
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t p = 0; p < members.size(); ++p) folds[p % k].push_back(members[p]);
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

std::vector<double> default_lambda_grid(const DiscretizedModel& model) {
    const double top = lambda_max(model);
    std::vector<double> grid;
    for (int e = 0; e >= -10; --e) grid.push_back(std::ldexp(top, e));
    return grid;
}

std::vector<double> default_eta_grid(const Grid& grid) {
    // 2^-k on the per-point coefficient scale w o beta, expressed for the weighted objective
    const double scale = grid.dt() * grid.dt();
    std::vector<double> out;
    for (int e = -1; e >= -10; --e) out.push_back(std::ldexp(scale, e));
    return out;
}

namespace {

void require_descending(const std::vector<double>& grid, const char* name) {
    if (grid.empty()) throw Error(ErrorCode::domain_error, std::string(name) + " grid is empty");
    for (double v : grid) {
        if (!std::isfinite(v) || v < 0.0) {
            throw Error(ErrorCode::domain_error, std::string(name) + " grid has invalid entries");
        }
    }
    if (!std::is_sorted(grid.begin(), grid.end(), std::greater<>())) {
        throw Error(ErrorCode::domain_error, std::string(name) + " grid must be sorted descending");
    }
}

}  // namespace

CvResult cv_select(const CurveSet& data, const std::vector<double>& lambda_grid, const std::vector<double>& eta_grid,
                   std::size_t k, std::uint64_t seed, const SolverOptions& opts, std::size_t threads) {
    require_descending(lambda_grid, "lambda");
    require_descending(eta_grid, "eta");
    const std::vector<Fold> folds = stratified_folds(data.labels(), k, seed);

    std::vector<DiscretizedModel> train_models;
    std::vector<CurveSet> held_out;
    train_models.reserve(k);
    held_out.reserve(k);
    for (std::size_t f = 0; f < k; ++f) {
        Fold train;
        for (std::size_t g = 0; g < k; ++g) {
            if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
        }
        std::sort(train.begin(), train.end());
        train_models.push_back(pooled_estimators(data.subset(train)));
        held_out.push_back(data.subset(folds[f]));
    }

    const std::size_t nl = lambda_grid.size();
    const std::size_t ne = eta_grid.size();
    // fold_error[(f * ne + j) * nl + i]; negative marks failure
    std::vector<double> fold_error(k * ne * nl, -1.0);

    parallel_for(k * ne, threads, [&](std::size_t unit) {
        const std::size_t f = unit / ne;
        const std::size_t j = unit % ne;
        double* out = &fold_error[unit * nl];
        try {
            const CoordinateDescent cd(train_models[f], eta_grid[j]);
            SolverOptions local = opts;
            for (std::size_t i = 0; i < nl; ++i) {
                FitResult fitted = cd.solve(lambda_grid[i], local);
                local.beta_init = fitted.discriminant.beta();
                if (fitted.discriminant.proj_delta() == 0.0) continue;
                out[i] = empirical_error(held_out[f], fitted.discriminant);
            }
        } catch (const Error&) {
            // leaves the remaining cells of this path marked failed
        }
    });

    CvResult result;
    result.lambda_grid = lambda_grid;
    result.eta_grid = eta_grid;
    result.cv_error = Matrix::Constant(static_cast<Eigen::Index>(nl), static_cast<Eigen::Index>(ne), 1.0);
    result.failed.assign(nl * ne, false);
    result.k = k;
    result.seed = seed;

    bool have_best = false;
    double best = 0.0;
    for (std::size_t i = 0; i < nl; ++i) {
        for (std::size_t j = 0; j < ne; ++j) {
            double sum = 0.0;
            bool failed = false;
            for (std::size_t f = 0; f < k; ++f) {
                const double e = fold_error[(f * ne + j) * nl + i];
                if (e < 0.0) {
                    failed = true;
                    break;
                }
                sum += e;
            }
            result.failed[i * ne + j] = failed;
            if (failed) continue;
            const double mean = sum / static_cast<double>(k);
            result.cv_error(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mean;
            // grids are descending, so the first strict minimum is the largest-penalty one
            if (!have_best || mean < best) {
                have_best = true;
                best = mean;
                result.best_lambda_index = i;
                result.best_eta_index = j;
            }
        }
    }
    if (!have_best) throw Error(ErrorCode::tuning_failed, "every cross-validation cell failed");
    result.best_lambda = lambda_grid[result.best_lambda_index];
    result.best_eta = eta_grid[result.best_eta_index];
    return result;
}

}  // namespace sflda
