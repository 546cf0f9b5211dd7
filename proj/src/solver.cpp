#include "sflda/solver.hpp"

#include "sflda/error.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sflda {

void PenaltyParams::validate() const {
    if (!std::isfinite(lambda) || !std::isfinite(eta) || lambda < 0.0 || eta < 0.0) {
        throw Error(ErrorCode::domain_error, "penalty weights must be finite and non-negative");
    }
}

void SolverOptions::validate(std::size_t grid_size) const {
    if (max_iter < 1) throw Error(ErrorCode::domain_error, "max_iter must be at least 1");
    if (!(tol > 0.0)) throw Error(ErrorCode::domain_error, "tol must be positive");
    if (beta_init) {
        if (beta_init->size() != static_cast<Eigen::Index>(grid_size)) {
            throw Error(ErrorCode::grid_mismatch, "initial beta does not match grid size");
        }
        if (!beta_init->allFinite()) throw Error(ErrorCode::non_finite, "initial beta is not finite");
    }
}

Discriminant::Discriminant(Grid grid, Vector beta, Vector mu_mid, double proj_delta, PenaltyParams params)
    : grid_(std::move(grid)),
      beta_(std::move(beta)),
      mu_mid_(std::move(mu_mid)),
      proj_delta_(proj_delta),
      params_(params) {
    const auto t = static_cast<Eigen::Index>(grid_.size());
    if (beta_.size() != t || mu_mid_.size() != t) {
        throw Error(ErrorCode::grid_mismatch, "discriminant dimensions do not match grid");
    }
    if (!beta_.allFinite() || !mu_mid_.allFinite() || !std::isfinite(proj_delta_)) {
        throw Error(ErrorCode::non_finite, "discriminant has non-finite entries");
    }
}

namespace {

void require_finite(const GridFunction& beta, const PenaltyParams& params) {
    params.validate();
    if (!beta.values().allFinite()) throw Error(ErrorCode::non_finite, "beta is not finite");
}

}  // namespace

double objective(const GridFunction& beta, const DiscretizedModel& model, const PenaltyParams& params) {
    require_same_grid(beta.grid(), model.grid());
    require_finite(beta, params);
    const Grid& grid = model.grid();
    const Vector& w = grid.weights();
    const Vector wb = w.cwiseProduct(beta.values());
    const double quad = wb.dot(model.covariance() * wb);
    const double lin = weighted_dot(grid, model.delta(), beta.values());
    const double l1 = weighted_norms(grid, beta.values()).l1;
    const double energy = beta.values().dot(derivative_energy(grid) * beta.values());
    return 0.5 * quad - lin + params.lambda * l1 + 0.5 * params.eta * energy;
}

double lambda_max(const DiscretizedModel& model) { return model.delta().cwiseAbs().maxCoeff(); }

namespace {

// KKT residual from the smooth gradient (Q b - W delta), divided by w.
double kkt_from_gradient(const Vector& gradient, const Vector& weights, const Vector& beta, double lambda) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        const double g = gradient[j] / weights[j];
        double v;
        if (beta[j] > 0.0) {
            v = std::abs(g + lambda);
        } else if (beta[j] < 0.0) {
            v = std::abs(g - lambda);
        } else {
            v = std::max(0.0, std::abs(g) - lambda);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

}  // namespace

double kkt_residual(const GridFunction& beta, const DiscretizedModel& model, const PenaltyParams& params) {
    require_same_grid(beta.grid(), model.grid());
    require_finite(beta, params);
    const Grid& grid = model.grid();
    const Vector& w = grid.weights();
    const Vector& b = beta.values();
    const Vector gradient = w.cwiseProduct(model.covariance() * w.cwiseProduct(b)) +
                            params.eta * (derivative_energy(grid) * b) - w.cwiseProduct(model.delta());
    return kkt_from_gradient(gradient, w, b, params.lambda);
}

CoordinateDescent::CoordinateDescent(const DiscretizedModel& model, double eta)
    : grid_(model.grid()), mu_mid_(model.midpoint()), delta_(model.delta()), eta_(eta) {
    PenaltyParams{0.0, eta}.validate();
    const Vector& w = grid_.weights();
    quad_ = w.asDiagonal() * model.covariance() * w.asDiagonal();
    if (eta_ > 0.0) quad_ += eta_ * derivative_energy(grid_);
    linear_ = w.cwiseProduct(delta_);
    for (Eigen::Index j = 0; j < quad_.rows(); ++j) {
        if (!(quad_(j, j) > 0.0)) {
            throw Error(ErrorCode::degenerate_curvature,
                        "coordinate " + std::to_string(j) + " has non-positive curvature; use eta > 0");
        }
    }
}

bool CoordinateDescent::polish(Vector& beta, const std::vector<signed char>& signs,
                               double lambda, double current) const {
    std::vector<Eigen::Index> support;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (signs[static_cast<std::size_t>(j)] != 0) support.push_back(j);
    }
    if (support.empty()) return false;
    const auto k = static_cast<Eigen::Index>(support.size());
    const Vector& w = grid_.weights();
    Matrix h(k, k);
    Vector rhs(k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) h(a, b) = quad_(support[a], support[b]);
        rhs[a] = linear_[support[a]] - lambda * w[support[a]] * signs[static_cast<std::size_t>(support[a])];
    }
    const Eigen::LDLT<Matrix> ldlt(h);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
    const Vector solved = ldlt.solve(rhs);
    if (!solved.allFinite()) return false;
    for (Eigen::Index a = 0; a < k; ++a) {
        if (solved[a] * signs[static_cast<std::size_t>(support[a])] <= 0.0) return false;
    }
    Vector candidate = beta;
    for (Eigen::Index a = 0; a < k; ++a) candidate[support[a]] = solved[a];
    const Vector g = quad_ * candidate - linear_;
    const double value = 0.5 * candidate.dot(g - linear_) + lambda * w.dot(candidate.cwiseAbs());
    if (!(value <= current)) return false;
    beta = std::move(candidate);
    return true;
}

FitResult CoordinateDescent::solve(double lambda, const SolverOptions& opts) const {
    const PenaltyParams params{lambda, eta_};
    params.validate();
    opts.validate(grid_.size());

    const Vector& w = grid_.weights();
    const Eigen::Index t = quad_.rows();
    Vector beta = opts.beta_init ? *opts.beta_init : Vector::Zero(t);
    Vector penalty = lambda * w;
    Vector residual = quad_ * beta - linear_;  // gradient of the smooth part

    auto current_objective = [&] {
        return 0.5 * beta.dot(residual - linear_) + penalty.dot(beta.cwiseAbs());
    };

    FitReport report;
    report.objective_trace.reserve(std::min<std::size_t>(opts.max_iter + 1, 1024));
    double previous = current_objective();
    report.objective_trace.push_back(previous);

    const double kkt_target = 10.0 * opts.tol * delta_.cwiseAbs().maxCoeff();
    constexpr std::size_t refresh_every = 100;

    // signs of beta after the previous sweep; a repeat triggers one polish attempt
    std::vector<signed char> last_signs;
    bool polish_tried = false;
    auto signs_of = [&] {
        std::vector<signed char> s(static_cast<std::size_t>(t));
        for (Eigen::Index j = 0; j < t; ++j) s[static_cast<std::size_t>(j)] = beta[j] > 0.0 ? 1 : (beta[j] < 0.0 ? -1 : 0);
        return s;
    };

    for (std::size_t sweep = 1; sweep <= opts.max_iter; ++sweep) {
        for (Eigen::Index j = 0; j < t; ++j) {
            const double old = beta[j];
            const double a = quad_(j, j);
            const double c = a * old - residual[j];
            const double updated = soft_threshold(c, penalty[j]) / a;
            if (updated != old) {
                residual.noalias() += (updated - old) * quad_.col(j);
                beta[j] = updated;
            }
        }
        if (sweep % refresh_every == 0) residual.noalias() = quad_ * beta - linear_;

        std::vector<signed char> signs = signs_of();
        if (signs != last_signs) {
            polish_tried = false;
        } else if (!polish_tried) {
            polish_tried = true;
            if (polish(beta, signs, lambda, current_objective())) residual.noalias() = quad_ * beta - linear_;
        }
        last_signs = std::move(signs);

        const double value = current_objective();
        report.objective_trace.push_back(value);
        report.iterations = sweep;

        const double scale = std::max(std::abs(previous), std::abs(value));
        const double change = scale > 0.0 ? std::abs(previous - value) / scale : 0.0;
        previous = value;
        if (change < opts.tol && kkt_from_gradient(residual, w, beta, lambda) <= kkt_target) {
            report.converged = true;
            break;
        }
    }

    residual.noalias() = quad_ * beta - linear_;
    report.kkt_residual = kkt_from_gradient(residual, w, beta, lambda);
    report.active_set_size = static_cast<std::size_t>((beta.array() != 0.0).count());

    const double proj = weighted_dot(grid_, delta_, beta);
    return FitResult{Discriminant(grid_, std::move(beta), mu_mid_, proj, params), std::move(report)};
}

FitResult fit(const DiscretizedModel& model, const PenaltyParams& params, const SolverOptions& opts) {
    params.validate();
    return CoordinateDescent(model, params.eta).solve(params.lambda, opts);
}

std::vector<FitResult> fit_path(const DiscretizedModel& model, const std::vector<double>& lambdas, double eta,
                                const SolverOptions& opts) {
    CoordinateDescent cd(model, eta);
    std::vector<FitResult> out;
    out.reserve(lambdas.size());
    SolverOptions local = opts;
    for (double lambda : lambdas) {
        out.push_back(cd.solve(lambda, local));
        local.beta_init = out.back().discriminant.beta();
    }
    return out;
}

}  // namespace sflda
