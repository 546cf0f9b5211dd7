#pragma once

#include "sflda/grid.hpp"

#include <cstddef>
#include <vector>

namespace sflda {

/// Labeled curves on a shared grid; row i of `curves` is curve i.
class CurveSet {
public:
    CurveSet(Grid grid, Matrix curves, std::vector<int> labels);

    const Grid& grid() const noexcept { return grid_; }
    const Matrix& curves() const noexcept { return curves_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t count(int label) const;

    GridFunction curve(std::size_t i) const;
    CurveSet subset(const std::vector<std::size_t>& rows) const;

private:
    Grid grid_;
    Matrix curves_;
    std::vector<int> labels_;
};

/**
 * Empirical pair (G, delta): pooled covariance matrix and mean
 * difference mu1 - mu0, plus the class means they were built from.
 *
 * The constructor checks symmetry (1e-10) and numerical PSD
 * (smallest eigenvalue >= -1e-8 * largest).
 */
class DiscretizedModel {
public:
    DiscretizedModel(Grid grid, Matrix covariance, Vector mu0, Vector mu1, std::size_t n0, std::size_t n1);

    const Grid& grid() const noexcept { return grid_; }
    const Matrix& covariance() const noexcept { return covariance_; }
    const Vector& mu0() const noexcept { return mu0_; }
    const Vector& mu1() const noexcept { return mu1_; }
    const Vector& delta() const noexcept { return delta_; }
    Vector midpoint() const { return 0.5 * (mu0_ + mu1_); }
    std::size_t n0() const noexcept { return n0_; }
    std::size_t n1() const noexcept { return n1_; }

    GridFunction delta_function() const { return GridFunction(grid_, delta_); }

private:
    Grid grid_;
    Matrix covariance_;
    Vector mu0_;
    Vector mu1_;
    Vector delta_;
    std::size_t n0_;
    std::size_t n1_;
};

/// Symmetric-PSD check used for covariance inputs; throws domain_error.
void require_psd(const Matrix& m, double rel_tol = 1e-8);

/// Class means and pooled covariance with divisor n0 + n1 - 2.
DiscretizedModel pooled_estimators(const CurveSet& data);

/// x - (mu0 + mu1) / 2.
GridFunction center_curve(const GridFunction& x, const DiscretizedModel& model);

}  // namespace sflda
