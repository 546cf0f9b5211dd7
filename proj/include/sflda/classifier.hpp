#pragma once

#include "sflda/estimation.hpp"
#include "sflda/solver.hpp"

#include <cstddef>
#include <vector>

namespace sflda {

/// Maximal run of exact zeros in beta, as grid indices and points.
struct ZeroRegion {
    double t_start;
    double t_end;
    std::size_t index_start;
    std::size_t index_end;

    friend bool operator==(const ZeroRegion&, const ZeroRegion&) = default;
};

/// Positive means class 1; zero is the decision boundary.
double score(const GridFunction& x, const Discriminant& disc);

int classify(const GridFunction& x, const Discriminant& disc);

/// Scores for every row of `curves` (must match the discriminant's grid size).
Vector score_rows(const Matrix& curves, const Discriminant& disc);

/// 1 - Phi(|<delta, beta>| / (2 <beta, G beta>^{1/2})) under the model's Gaussian law.
double gaussian_error(const GridFunction& beta, const DiscretizedModel& model);

/// Unweighted fraction of misclassified curves.
double empirical_error(const CurveSet& test, const Discriminant& disc);

std::vector<ZeroRegion> zero_regions(const Discriminant& disc);
std::vector<ZeroRegion> zero_regions(const Grid& grid, const Vector& beta);

}  // namespace sflda
