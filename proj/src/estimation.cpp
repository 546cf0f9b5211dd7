#include "sflda/estimation.hpp"

#include "sflda/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace sflda {

CurveSet::CurveSet(Grid grid, Matrix curves, std::vector<int> labels)
    : grid_(std::move(grid)), curves_(std::move(curves)), labels_(std::move(labels)) {
    if (curves_.cols() != static_cast<Eigen::Index>(grid_.size())) {
        throw Error(ErrorCode::grid_mismatch, "curve length " + std::to_string(curves_.cols()) +
                                                  " does not match grid size " + std::to_string(grid_.size()));
    }
    if (curves_.rows() != static_cast<Eigen::Index>(labels_.size())) {
        throw Error(ErrorCode::parse_error, "number of labels does not match number of curves");
    }
    for (int y : labels_) {
        if (y != 0 && y != 1) throw Error(ErrorCode::parse_error, "labels must be 0 or 1");
    }
    if (!curves_.allFinite()) throw Error(ErrorCode::non_finite, "curves contain non-finite values");
}

std::size_t CurveSet::count(int label) const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

GridFunction CurveSet::curve(std::size_t i) const {
    return GridFunction(grid_, curves_.row(static_cast<Eigen::Index>(i)).transpose());
}

CurveSet CurveSet::subset(const std::vector<std::size_t>& rows) const {
    Matrix out(static_cast<Eigen::Index>(rows.size()), curves_.cols());
    std::vector<int> labels;
    labels.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        out.row(static_cast<Eigen::Index>(k)) = curves_.row(static_cast<Eigen::Index>(rows[k]));
        labels.push_back(labels_.at(rows[k]));
    }
    return CurveSet(grid_, std::move(out), std::move(labels));
}

void require_psd(const Matrix& m, double rel_tol) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::domain_error, "covariance must be square");
    if (!m.allFinite()) throw Error(ErrorCode::non_finite, "covariance has non-finite entries");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw Error(ErrorCode::domain_error, "covariance is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::eigen_failure, "eigenvalue computation failed");
    const auto& ev = eig.eigenvalues();
    const double largest = std::max(0.0, ev.maxCoeff());
    if (ev.minCoeff() < -rel_tol * largest) {
        throw Error(ErrorCode::domain_error, "covariance is not positive semidefinite");
    }
}

DiscretizedModel::DiscretizedModel(Grid grid, Matrix covariance, Vector mu0, Vector mu1, std::size_t n0,
                                   std::size_t n1)
    : grid_(std::move(grid)),
      covariance_(std::move(covariance)),
      mu0_(std::move(mu0)),
      mu1_(std::move(mu1)),
      n0_(n0),
      n1_(n1) {
    const auto t = static_cast<Eigen::Index>(grid_.size());
    if (covariance_.rows() != t || covariance_.cols() != t || mu0_.size() != t || mu1_.size() != t) {
        throw Error(ErrorCode::grid_mismatch, "model dimensions do not match grid");
    }
    if (!mu0_.allFinite() || !mu1_.allFinite()) throw Error(ErrorCode::non_finite, "non-finite class mean");
    require_psd(covariance_);
    delta_ = mu1_ - mu0_;
}

namespace {

struct ClassMoments {
    Vector mean;
    Matrix scatter;  // sum of centered outer products
    std::size_t n = 0;
};

ClassMoments class_moments(const CurveSet& data, int label) {
    const auto t = static_cast<Eigen::Index>(data.grid().size());
    ClassMoments m{Vector::Zero(t), Matrix::Zero(t, t), 0};
    const auto& x = data.curves();
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.labels()[i] != label) continue;
        m.mean += x.row(static_cast<Eigen::Index>(i)).transpose();
        ++m.n;
    }
    if (m.n == 0) return m;
    m.mean /= static_cast<double>(m.n);
    Matrix centered(static_cast<Eigen::Index>(m.n), t);
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.labels()[i] != label) continue;
        centered.row(r++) = x.row(static_cast<Eigen::Index>(i)) - m.mean.transpose();
    }
    m.scatter.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
    m.scatter = m.scatter.selfadjointView<Eigen::Lower>();
    return m;
}

}  // namespace

DiscretizedModel pooled_estimators(const CurveSet& data) {
    const std::size_t n0 = data.count(0);
    const std::size_t n1 = data.count(1);
    if (n0 < 2 || n1 < 2) {
        throw Error(ErrorCode::insufficient_data, "each class needs at least 2 curves (have " + std::to_string(n0) +
                                                      " and " + std::to_string(n1) + ")");
    }
    ClassMoments c0 = class_moments(data, 0);
    ClassMoments c1 = class_moments(data, 1);
    Matrix pooled = (c0.scatter + c1.scatter) / static_cast<double>(n0 + n1 - 2);
    return DiscretizedModel(data.grid(), std::move(pooled), std::move(c0.mean), std::move(c1.mean), n0, n1);
}

GridFunction center_curve(const GridFunction& x, const DiscretizedModel& model) {
    require_same_grid(x.grid(), model.grid());
    return GridFunction(x.grid(), x.values() - model.midpoint());
}

}  // namespace sflda
