#pragma once

#include "sflda/estimation.hpp"
#include "sflda/grid.hpp"
#include "sflda/solver.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sflda {

enum class Noise { gaussian, student_t5, centered_exponential };

const char* to_string(Noise noise) noexcept;

/// Matern parameters shared by Settings 1-5.
struct MaternParams {
    double sigma = 1.0;
    double rho = 0.2;
    double nu = 3.0;
};

/// Number of functional components in Setting 6.
inline constexpr int kFpcComponents = 40;

/**
 * Population description of one simulation setting.
 *
 * Settings 1-5: curves are mu_k + cov_root * e with Matern covariance and
 * mean difference delta = covariance * beta_true (plain matrix-vector
 * product), so beta_target = W^{-1} beta_true solves the weighted score
 * equation (W G W) b = W delta exactly.
 * Setting 6: curves are sum_j (Z_j / j + m_kj) phi_j with centred
 * exponential Z_j.
 */
struct SettingSpec {
    int id = 0;
    Noise noise = Noise::gaussian;
    Grid grid;
    std::optional<Vector> beta_true{};
    std::optional<Vector> beta_target{};
    Vector mu0{};
    Vector mu1{};
    Matrix covariance{};
    Matrix cov_root{};      // symmetric square root of covariance (Settings 1-5)
    Matrix fpc_basis{};     // T x 40 columns phi_j (Setting 6)
    Vector fpc_mean0{};     // 40 coefficients (Setting 6)
    Vector fpc_mean1{};

    bool has_truth() const noexcept { return beta_true.has_value(); }
    /// (covariance, mu0, mu1) as a model; Setting 6 uses the implied FPC covariance.
    DiscretizedModel population_model() const;
};

/// phi_j(t) = sqrt(2) sin(pi j t).
double sine_basis(int j, double t);

Matrix matern_matrix(const Grid& grid, const MaternParams& params = {});

/// Symmetric square root by eigendecomposition, negative eigenvalues clipped to zero.
Matrix symmetric_sqrt(const Matrix& m);

/// B-spline discriminant truth for Settings 1-5.
GridFunction true_beta(int setting, const Grid& grid);

/// Class-0 mean 5t + sum_j (c_j / j) phi_j(t) shared by Settings 1-5.
double setting_mean0(double t);

SettingSpec build_setting(int setting, const Grid& grid);

/// 2 * n_per_class curves, class 0 first. noise_scale = 0 yields the means.
CurveSet gen_dataset(const SettingSpec& spec, std::size_t n_per_class, std::uint64_t seed,
                     double noise_scale = 1.0);

enum class Method { sflda, flda };

struct ExperimentConfig {
    int setting = 1;
    std::size_t reps = 100;
    std::size_t n_train_per_class = 100;
    std::size_t n_test_per_class = 300;
    std::uint64_t seed = 1;
    std::size_t grid_size = 100;
    std::size_t folds = 5;
    Method method = Method::sflda;
    std::size_t threads = 1;
    SolverOptions solver;
    std::optional<std::vector<double>> eta_grid;  // default_eta_grid when empty
};

struct RepetitionResult {
    std::size_t rep = 0;
    double error = 0.0;  // fraction
    double l1_diff = 0.0;
    double l2_diff = 0.0;
    double zero_recovery = 0.0;  // fraction of the true zero set where beta_hat == 0
    double best_lambda = 0.0;
    double best_eta = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t active = 0;
    double kkt_residual = 0.0;
    double lambda_max = 0.0;             // of the training model
    double max_objective_increase = 0.0;  // largest rise between consecutive sweeps of the final fit
    Vector beta;
};

struct ExperimentResult {
    int setting = 0;
    Method method = Method::sflda;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    double mean_error = 0.0;  // percent
    double se_error = 0.0;    // percent; 0 when reps == 1
    std::optional<double> mean_l1_diff;
    std::optional<double> se_l1_diff;
    std::optional<double> mean_l2_diff;
    std::optional<double> se_l2_diff;
    std::optional<double> mean_zero_recovery;
    std::vector<RepetitionResult> per_rep;
};

/// Paired norm comparisons use the per-point coefficient scale: || w o beta_hat - beta_true ||.
Vector coefficient_scale(const Grid& grid, const Vector& beta);

ExperimentResult run_experiment(const ExperimentConfig& config);

std::string experiment_csv(const ExperimentResult& result);
std::string experiment_json(const ExperimentResult& result);

}  // namespace sflda
