#include "sflda/grid.hpp"

#include "sflda/error.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace sflda {

Grid::Grid(double a, double b, std::size_t size) : a_(a), b_(b), size_(size) {
    if (size < 2) {
        throw Error(ErrorCode::invalid_grid, "grid needs at least 2 points, got " + std::to_string(size));
    }
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw Error(ErrorCode::invalid_grid, "grid requires finite a < b");
    }
    const auto n = static_cast<Eigen::Index>(size);
    dt_ = (b - a) / static_cast<double>(size - 1);
    points_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) points_[i] = a + static_cast<double>(i) * dt_;
    points_[n - 1] = b;
    weights_ = Vector::Constant(n, dt_);
    weights_[0] = 0.5 * dt_;
    weights_[n - 1] = 0.5 * dt_;
}

Grid make_grid(double a, double b, std::size_t size) { return Grid(a, b, size); }

void require_same_grid(const Grid& lhs, const Grid& rhs) {
    if (!(lhs == rhs)) {
        throw Error(ErrorCode::grid_mismatch, "functions live on different grids");
    }
}

GridFunction::GridFunction(Grid grid, Vector values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != static_cast<Eigen::Index>(grid_.size())) {
        throw Error(ErrorCode::grid_mismatch, "value count does not match grid size");
    }
    if (!values_.allFinite()) {
        throw Error(ErrorCode::non_finite, "grid function has non-finite values");
    }
}

GridFunction GridFunction::zeros(const Grid& grid) {
    return GridFunction(grid, Vector::Zero(static_cast<Eigen::Index>(grid.size())));
}

GridFunction GridFunction::constant(const Grid& grid, double value) {
    return GridFunction(grid, Vector::Constant(static_cast<Eigen::Index>(grid.size()), value));
}

double weighted_dot(const Grid& grid, const Vector& f, const Vector& g) {
    return (grid.weights().array() * f.array() * g.array()).sum();
}

Norms weighted_norms(const Grid& grid, const Vector& f) {
    const auto& w = grid.weights();
    return Norms{
        (w.array() * f.array().abs()).sum(),
        std::sqrt((w.array() * f.array().square()).sum()),
        f.size() > 0 ? f.cwiseAbs().maxCoeff() : 0.0,
    };
}

double inner_product(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f.grid(), g.grid());
    return weighted_dot(f.grid(), f.values(), g.values());
}

Norms norms(const GridFunction& f) { return weighted_norms(f.grid(), f.values()); }

Eigen::SparseMatrix<double> difference_matrix(const Grid& grid) {
    const auto t = static_cast<Eigen::Index>(grid.size());
    const double inv = 1.0 / grid.dt();
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(2 * (t - 1)));
    for (Eigen::Index i = 0; i + 1 < t; ++i) {
        entries.emplace_back(i, i, -inv);
        entries.emplace_back(i, i + 1, inv);
    }
    Eigen::SparseMatrix<double> d(t - 1, t);
    d.setFromTriplets(entries.begin(), entries.end());
    return d;
}

Matrix derivative_energy(const Grid& grid) {
    const Eigen::SparseMatrix<double> d = difference_matrix(grid);
    Matrix l = grid.dt() * Matrix(Eigen::SparseMatrix<double>(d.transpose() * d));
    return l;
}

}  // namespace sflda
