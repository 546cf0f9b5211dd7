#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstddef>

namespace sflda {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/**
 * Equispaced grid on [a, b] with endpoints included and trapezoid
 * quadrature weights dt * [1/2, 1, ..., 1, 1/2].
 */
class Grid {
public:
    Grid(double a, double b, std::size_t size);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    std::size_t size() const noexcept { return size_; }
    double dt() const noexcept { return dt_; }
    const Vector& points() const noexcept { return points_; }
    const Vector& weights() const noexcept { return weights_; }
    double point(std::size_t i) const { return points_[static_cast<Eigen::Index>(i)]; }

    friend bool operator==(const Grid& lhs, const Grid& rhs) noexcept {
        return lhs.a_ == rhs.a_ && lhs.b_ == rhs.b_ && lhs.size_ == rhs.size_;
    }

private:
    double a_;
    double b_;
    std::size_t size_;
    double dt_;
    Vector points_;
    Vector weights_;
};

Grid make_grid(double a, double b, std::size_t size);

// Throws grid_mismatch unless both grids describe the same points.
void require_same_grid(const Grid& lhs, const Grid& rhs);

/// A function sampled on a grid.
class GridFunction {
public:
    GridFunction(Grid grid, Vector values);

    static GridFunction zeros(const Grid& grid);
    static GridFunction constant(const Grid& grid, double value);

    template <class F>
    static GridFunction sample(const Grid& grid, F&& f) {
        Vector v(static_cast<Eigen::Index>(grid.size()));
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = f(grid.points()[i]);
        return GridFunction(grid, std::move(v));
    }

    const Grid& grid() const noexcept { return grid_; }
    const Vector& values() const noexcept { return values_; }
    double operator[](Eigen::Index i) const { return values_[i]; }
    Eigen::Index size() const noexcept { return values_.size(); }

private:
    Grid grid_;
    Vector values_;
};

struct Norms {
    double l1;
    double l2;
    double sup;
};

double inner_product(const GridFunction& f, const GridFunction& g);
Norms norms(const GridFunction& f);

// Quadrature-weighted forms on raw vectors; the caller guarantees sizes.
double weighted_dot(const Grid& grid, const Vector& f, const Vector& g);
Norms weighted_norms(const Grid& grid, const Vector& f);

/// Forward-difference operator D ((T-1) x T), rows (-1/dt, +1/dt).
Eigen::SparseMatrix<double> difference_matrix(const Grid& grid);

/// Derivative energy matrix L = dt * D^T D, so that b^T L b ~ ||b'||_2^2.
Matrix derivative_energy(const Grid& grid);

}  // namespace sflda
