#include "sflda/oracle.hpp"

#include "sflda/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sflda {

namespace {

// Smooth Hessian W G W + eta * dt * D^T D, assembled from the tridiagonal stencil.
Matrix smooth_hessian(const DiscretizedModel& model, double eta) {
    const Grid& grid = model.grid();
    const Vector& w = grid.weights();
    const Eigen::Index t = w.size();
    Matrix q = w.asDiagonal() * model.covariance() * w.asDiagonal();
    const double c = eta / grid.dt();
    for (Eigen::Index i = 0; i + 1 < t; ++i) {
        q(i, i) += c;
        q(i + 1, i + 1) += c;
        q(i, i + 1) -= c;
        q(i + 1, i) -= c;
    }
    return q;
}

double penalized_value(const Matrix& q, const Vector& b, const Vector& w, double lambda, const Vector& beta) {
    return 0.5 * beta.dot(q * beta) - b.dot(beta) + lambda * w.dot(beta.cwiseAbs());
}

}  // namespace

OracleSolution oracle_sign_enumeration(const DiscretizedModel& model, const PenaltyParams& params) {
    params.validate();
    const Grid& grid = model.grid();
    const std::size_t t = grid.size();
    if (t > kMaxEnumerationSize) {
        throw Error(ErrorCode::domain_error, "sign enumeration supports at most " +
                                                 std::to_string(kMaxEnumerationSize) + " grid points");
    }
    const Vector& w = grid.weights();
    const Matrix q = smooth_hessian(model, params.eta);
    const Vector b = w.cwiseProduct(model.delta());
    const double lambda = params.lambda;
    const double slack = 1e-10 * (1.0 + lambda + model.delta().cwiseAbs().maxCoeff());

    std::vector<int> sign(t, -1);
    std::vector<Vector> solutions;
    OracleSolution best;
    best.method = OracleMethod::sign_enumeration;
    best.objective = std::numeric_limits<double>::infinity();

    std::size_t total = 1;
    for (std::size_t i = 0; i < t; ++i) total *= 3;

    std::vector<Eigen::Index> support;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rest = code;
        support.clear();
        for (std::size_t i = 0; i < t; ++i) {
            sign[i] = static_cast<int>(rest % 3) - 1;
            rest /= 3;
            if (sign[i] != 0) support.push_back(static_cast<Eigen::Index>(i));
        }
        Vector beta = Vector::Zero(static_cast<Eigen::Index>(t));
        if (!support.empty()) {
            const auto m = static_cast<Eigen::Index>(support.size());
            Matrix qa(m, m);
            Vector rhs(m);
            for (Eigen::Index r = 0; r < m; ++r) {
                const Eigen::Index j = support[static_cast<std::size_t>(r)];
                rhs[r] = b[j] - lambda * w[j] * sign[static_cast<std::size_t>(j)];
                for (Eigen::Index c = 0; c < m; ++c) qa(r, c) = q(j, support[static_cast<std::size_t>(c)]);
            }
            Eigen::LDLT<Matrix> ldlt(qa);
            if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) continue;
            const Vector sol = ldlt.solve(rhs);
            if (!sol.allFinite() || (qa * sol - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) continue;
            bool signs_ok = true;
            for (Eigen::Index r = 0; r < m && signs_ok; ++r) {
                const Eigen::Index j = support[static_cast<std::size_t>(r)];
                signs_ok = sign[static_cast<std::size_t>(j)] * sol[r] > 0.0;
                beta[j] = sol[r];
            }
            if (!signs_ok) continue;
        }
        const Vector gradient = q * beta - b;
        bool zeros_ok = true;
        for (std::size_t i = 0; i < t && zeros_ok; ++i) {
            if (sign[i] != 0) continue;
            const auto j = static_cast<Eigen::Index>(i);
            zeros_ok = std::abs(gradient[j] / w[j]) <= lambda + slack;
        }
        if (!zeros_ok) continue;

        ++best.consistent_patterns;
        const bool seen = std::any_of(solutions.begin(), solutions.end(), [&](const Vector& s) {
            return (s - beta).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + beta.cwiseAbs().maxCoeff());
        });
        if (!seen) solutions.push_back(beta);
        const double value = penalized_value(q, b, w, lambda, beta);
        if (value < best.objective) {
            best.objective = value;
            best.beta = beta;
        }
    }
    if (best.consistent_patterns == 0) {
        throw Error(ErrorCode::oracle_failure, "no sign pattern satisfies the optimality conditions");
    }
    best.distinct_solutions = solutions.size();
    best.certificate = kkt_residual(GridFunction(grid, best.beta), model, params);
    return best;
}

OracleSolution oracle_proximal_descent(const DiscretizedModel& model, const PenaltyParams& params,
                                       std::size_t iters) {
    params.validate();
    const Grid& grid = model.grid();
    const Vector& w = grid.weights();
    const Matrix q = smooth_hessian(model, params.eta);
    const Vector b = w.cwiseProduct(model.delta());

    Eigen::SelfAdjointEigenSolver<Matrix> eig(q, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::eigen_failure, "eigenvalue computation failed");
    const double top = eig.eigenvalues().maxCoeff();
    const double step = top > 0.0 ? 1.0 / top : 1.0;
    const Vector threshold = step * params.lambda * w;

    OracleSolution out;
    out.method = OracleMethod::proximal_descent;
    out.beta = Vector::Zero(w.size());
    out.objective_trace.reserve(iters + 1);
    out.objective_trace.push_back(penalized_value(q, b, w, params.lambda, out.beta));
    Vector gradient = -b;
    for (std::size_t k = 0; k < iters; ++k) {
        const Vector z = out.beta - step * gradient;
        for (Eigen::Index j = 0; j < z.size(); ++j) out.beta[j] = soft_threshold(z[j], threshold[j]);
        gradient.noalias() = q * out.beta - b;
        out.objective_trace.push_back(0.5 * out.beta.dot(gradient - b) + params.lambda * w.dot(out.beta.cwiseAbs()));
    }
    out.objective = out.objective_trace.back();
    out.certificate = kkt_residual(GridFunction(grid, out.beta), model, params);
    return out;
}

}  // namespace sflda
