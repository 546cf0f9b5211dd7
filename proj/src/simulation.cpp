#include "sflda/simulation.hpp"

#include "sflda/classifier.hpp"
#include "sflda/error.hpp"
#include "sflda/parallel.hpp"
#include "sflda/rng.hpp"
#include "sflda/special.hpp"
#include "sflda/tuning.hpp"

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

namespace sflda {

const char* to_string(Noise noise) noexcept {
    switch (noise) {
        case Noise::gaussian: return "gaussian";
        case Noise::student_t5: return "student_t5";
        case Noise::centered_exponential: return "centered_exponential";
    }
    return "unknown";
}

double sine_basis(int j, double t) { return std::numbers::sqrt2 * std::sin(std::numbers::pi * j * t); }

Matrix matern_matrix(const Grid& grid, const MaternParams& params) {
    const auto t = static_cast<Eigen::Index>(grid.size());
    Matrix g(t, t);
    for (Eigen::Index i = 0; i < t; ++i) {
        g(i, i) = matern_cov(grid.points()[i], grid.points()[i], params.sigma, params.rho, params.nu);
        for (Eigen::Index j = 0; j < i; ++j) {
            const double v = matern_cov(grid.points()[i], grid.points()[j], params.sigma, params.rho, params.nu);
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

Matrix symmetric_sqrt(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::eigen_failure, "eigendecomposition failed");
    const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Matrix r = eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
    return 0.5 * (r + r.transpose());
}

namespace {

struct Term {
    int index;  // 1-based, as in B_{i,4}
    double coef;
};

std::vector<Term> truth_terms(int setting, int& intervals) {
    switch (setting) {
        case 1:
        case 2: intervals = 30; return {{5, 0.2}, {28, 0.2}};
        case 3:
        case 4: intervals = 30; return {{5, 0.2}, {24, -0.2}};
        case 5: intervals = 5; return {{1, 0.1}, {3, -0.3}, {5, -0.2}, {7, 0.2}, {8, -0.1}};
        default: throw Error(ErrorCode::domain_error, "no B-spline truth for setting " + std::to_string(setting));
    }
}

void require_setting(int setting) {
    if (setting < 1 || setting > 6) {
        throw Error(ErrorCode::domain_error, "setting must be in 1..6, got " + std::to_string(setting));
    }
}

constexpr std::array<double, 5> kMeanCoefs{2.19, -0.18, -0.19, -2.51, -0.56};
constexpr std::array<double, 6> kFpcMean0{0.0, -0.5, 1.0, -0.5, 1.0, -0.5};
constexpr std::array<double, 6> kFpcMean1{0.0, -0.75, 0.75, -0.15, 1.4, 0.1};

}  // namespace

GridFunction true_beta(int setting, const Grid& grid) {
    int intervals = 0;
    const std::vector<Term> terms = truth_terms(setting, intervals);
    const std::vector<double> knots = clamped_knots(0.0, 1.0, intervals, 4);
    return GridFunction::sample(grid, [&](double t) {
        double v = 0.0;
        for (const Term& term : terms) v += term.coef * bspline_basis(knots, 4, term.index - 1, t);
        return v;
    });
}

double setting_mean0(double t) {
    double v = 5.0 * t;
    for (int j = 1; j <= 5; ++j) v += kMeanCoefs[j - 1] / j * sine_basis(j, t);
    return v;
}

DiscretizedModel SettingSpec::population_model() const {
    return DiscretizedModel(grid, covariance, mu0, mu1, 0, 0);
}

SettingSpec build_setting(int setting, const Grid& grid) {
    require_setting(setting);
    const auto t = static_cast<Eigen::Index>(grid.size());
    SettingSpec spec{.id = setting, .grid = grid};
    if (setting == 6) {
        spec.noise = Noise::centered_exponential;
        spec.fpc_basis.resize(t, kFpcComponents);
        for (int j = 1; j <= kFpcComponents; ++j) {
            for (Eigen::Index i = 0; i < t; ++i) spec.fpc_basis(i, j - 1) = sine_basis(j, grid.points()[i]);
        }
        spec.fpc_mean0 = Vector::Zero(kFpcComponents);
        spec.fpc_mean1 = Vector::Zero(kFpcComponents);
        for (std::size_t j = 0; j < kFpcMean0.size(); ++j) {
            spec.fpc_mean0[static_cast<Eigen::Index>(j)] = kFpcMean0[j];
            spec.fpc_mean1[static_cast<Eigen::Index>(j)] = kFpcMean1[j];
        }
        spec.mu0 = spec.fpc_basis * spec.fpc_mean0;
        spec.mu1 = spec.fpc_basis * spec.fpc_mean1;
        Vector loadings(kFpcComponents);
        for (int j = 1; j <= kFpcComponents; ++j) loadings[j - 1] = 1.0 / j;
        // centred Exp(1) has unit variance
        const Matrix scaled = spec.fpc_basis * loadings.asDiagonal();
        spec.covariance = scaled * scaled.transpose();
        spec.covariance = 0.5 * (spec.covariance + spec.covariance.transpose());
        return spec;
    }
    spec.noise = (setting == 2 || setting == 4) ? Noise::student_t5 : Noise::gaussian;
    spec.covariance = matern_matrix(grid);
    require_psd(spec.covariance);
    spec.cov_root = symmetric_sqrt(spec.covariance);
    const Vector beta = true_beta(setting, grid).values();
    spec.beta_true = beta;
    spec.beta_target = beta.cwiseQuotient(grid.weights());
    spec.mu0 = GridFunction::sample(grid, setting_mean0).values();
    spec.mu1 = spec.mu0 + spec.covariance * beta;
    return spec;
}

CurveSet gen_dataset(const SettingSpec& spec, std::size_t n_per_class, std::uint64_t seed, double noise_scale) {
    if (n_per_class < 1) throw Error(ErrorCode::insufficient_data, "n_per_class must be at least 1");
    const auto t = static_cast<Eigen::Index>(spec.grid.size());
    const auto n = static_cast<Eigen::Index>(n_per_class);
    const Eigen::Index dim = spec.id == 6 ? kFpcComponents : t;

    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::student_t_distribution<double> student(5.0);
    std::exponential_distribution<double> exponential(1.0);
    auto draw = [&]() -> double {
        switch (spec.noise) {
            case Noise::gaussian: return normal(rng);
            case Noise::student_t5: return student(rng);
            case Noise::centered_exponential: return exponential(rng) - 1.0;
        }
        return 0.0;
    };

    Matrix noise(2 * n, dim);
    for (Eigen::Index r = 0; r < 2 * n; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) noise(r, c) = draw();
    }
    Matrix curves(2 * n, t);
    if (spec.id == 6) {
        Vector loadings(kFpcComponents);
        for (int j = 1; j <= kFpcComponents; ++j) loadings[j - 1] = 1.0 / j;
        curves.noalias() = noise_scale * (noise * loadings.asDiagonal()) * spec.fpc_basis.transpose();
    } else {
        curves.noalias() = noise_scale * noise * spec.cov_root;  // cov_root is symmetric
    }
    curves.topRows(n).rowwise() += spec.mu0.transpose();
    curves.bottomRows(n).rowwise() += spec.mu1.transpose();

    std::vector<int> labels(static_cast<std::size_t>(2 * n), 0);
    std::fill(labels.begin() + n, labels.end(), 1);
    return CurveSet(spec.grid, std::move(curves), std::move(labels));
}

Vector coefficient_scale(const Grid& grid, const Vector& beta) { return grid.weights().cwiseProduct(beta); }

namespace {

double test_error(const CurveSet& test, const Discriminant& disc) {
    if (disc.proj_delta() != 0.0) return empirical_error(test, disc);
    // zero discriminant: every score ties, ties go to class 0
    return static_cast<double>(test.count(1)) / static_cast<double>(test.size());
}

RepetitionResult run_repetition(const SettingSpec& spec, const ExperimentConfig& config, std::size_t rep) {
    const CurveSet train = gen_dataset(spec, config.n_train_per_class, substream_seed(config.seed, rep, 0));
    const CurveSet test = gen_dataset(spec, config.n_test_per_class, substream_seed(config.seed, rep, 1));
    const DiscretizedModel model = pooled_estimators(train);

    const std::vector<double> lambdas =
        config.method == Method::flda ? std::vector<double>{0.0} : default_lambda_grid(model);
    const CvResult cv = cv_select(train, lambdas, config.eta_grid ? *config.eta_grid : default_eta_grid(spec.grid), config.folds,
                                  substream_seed(config.seed, rep, 2), config.solver);
    const FitResult fitted = fit(model, PenaltyParams{cv.best_lambda, cv.best_eta}, config.solver);
    const Vector& beta = fitted.discriminant.beta();

    RepetitionResult out;
    out.rep = rep;
    out.error = test_error(test, fitted.discriminant);
    out.best_lambda = cv.best_lambda;
    out.best_eta = cv.best_eta;
    out.iterations = fitted.report.iterations;
    out.converged = fitted.report.converged;
    out.active = fitted.report.active_set_size;
    out.kkt_residual = fitted.report.kkt_residual;
    out.lambda_max = lambda_max(model);
    const auto& trace = fitted.report.objective_trace;
    for (std::size_t i = 1; i < trace.size(); ++i) {
        out.max_objective_increase = std::max(out.max_objective_increase, trace[i] - trace[i - 1]);
    }
    out.beta = beta;
    if (spec.beta_true) {
        const Norms diff = weighted_norms(spec.grid, coefficient_scale(spec.grid, beta) - *spec.beta_true);
        out.l1_diff = diff.l1;
        out.l2_diff = diff.l2;
        std::size_t zeros = 0;
        std::size_t recovered = 0;
        for (Eigen::Index i = 0; i < beta.size(); ++i) {
            if ((*spec.beta_true)[i] != 0.0) continue;
            ++zeros;
            if (beta[i] == 0.0) ++recovered;
        }
        out.zero_recovery = zeros > 0 ? static_cast<double>(recovered) / static_cast<double>(zeros) : 0.0;
    }
    return out;
}

std::pair<double, double> mean_se(const std::vector<RepetitionResult>& reps, double RepetitionResult::*field) {
    const double n = static_cast<double>(reps.size());
    double sum = 0.0;
    for (const auto& r : reps) sum += r.*field;
    const double mean = sum / n;
    if (reps.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (const auto& r : reps) ss += (r.*field - mean) * (r.*field - mean);
    return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    require_setting(config.setting);
    if (config.reps < 1) throw Error(ErrorCode::domain_error, "reps must be at least 1");
    const SettingSpec spec = build_setting(config.setting, make_grid(0.0, 1.0, config.grid_size));

    ExperimentResult result;
    result.setting = config.setting;
    result.method = config.method;
    result.reps = config.reps;
    result.seed = config.seed;
    result.per_rep.resize(config.reps);
    parallel_for(config.reps, config.threads,
                 [&](std::size_t rep) { result.per_rep[rep] = run_repetition(spec, config, rep); });

    const auto [err_mean, err_se] = mean_se(result.per_rep, &RepetitionResult::error);
    result.mean_error = 100.0 * err_mean;
    result.se_error = 100.0 * err_se;
    if (spec.has_truth()) {
        const auto [l1_mean, l1_se] = mean_se(result.per_rep, &RepetitionResult::l1_diff);
        const auto [l2_mean, l2_se] = mean_se(result.per_rep, &RepetitionResult::l2_diff);
        const auto [zr_mean, zr_se] = mean_se(result.per_rep, &RepetitionResult::zero_recovery);
        result.mean_l1_diff = l1_mean;
        result.se_l1_diff = l1_se;
        result.mean_l2_diff = l2_mean;
        result.se_l2_diff = l2_se;
        result.mean_zero_recovery = zr_mean;
    }
    return result;
}

std::string experiment_csv(const ExperimentResult& result) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "rep,error,l1_diff,l2_diff,zero_recovery,lambda,eta,iterations,converged,active,kkt_residual\n";
    const bool truth = result.mean_l1_diff.has_value();
    for (const auto& r : result.per_rep) {
        os << r.rep << ',' << r.error << ',';
        if (truth) {
            os << r.l1_diff << ',' << r.l2_diff << ',' << r.zero_recovery;
        } else {
            os << ",,";
        }
        os << ',' << r.best_lambda << ',' << r.best_eta << ',' << r.iterations << ',' << (r.converged ? 1 : 0)
           << ',' << r.active << ',' << r.kkt_residual << '\n';
    }
    return os.str();
}

std::string experiment_json(const ExperimentResult& result) {
    nlohmann::ordered_json j;
    j["setting"] = result.setting;
    j["method"] = result.method == Method::sflda ? "sflda" : "flda";
    j["reps"] = result.reps;
    j["seed"] = result.seed;
    j["mean_error"] = result.mean_error;
    if (result.reps > 1) {
        j["se_error"] = result.se_error;
    } else {
        j["se_error"] = nullptr;
    }
    auto optional = [&](const char* key, const std::optional<double>& v, bool needs_reps) {
        if (v && (!needs_reps || result.reps > 1)) {
            j[key] = *v;
        } else {
            j[key] = nullptr;
        }
    };
    optional("mean_l1_diff", result.mean_l1_diff, false);
    optional("se_l1_diff", result.se_l1_diff, true);
    optional("mean_l2_diff", result.mean_l2_diff, false);
    optional("se_l2_diff", result.se_l2_diff, true);
    optional("mean_zero_recovery", result.mean_zero_recovery, false);
    return j.dump(2) + "\n";
}

}  // namespace sflda
