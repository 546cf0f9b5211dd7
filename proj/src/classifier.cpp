#include "sflda/classifier.hpp"

#include "sflda/error.hpp"
#include "sflda/special.hpp"

#include <cmath>

namespace sflda {

namespace {

double orientation(const Discriminant& disc) {
    if (disc.proj_delta() == 0.0) {
        throw Error(ErrorCode::degenerate_discriminant, "discriminant has <delta, beta> = 0; orientation undefined");
    }
    return disc.proj_delta() > 0.0 ? 1.0 : -1.0;
}

}  // namespace

double score(const GridFunction& x, const Discriminant& disc) {
    require_same_grid(x.grid(), disc.grid());
    const double sign = orientation(disc);
    return sign * weighted_dot(disc.grid(), x.values() - disc.mu_mid(), disc.beta());
}

int classify(const GridFunction& x, const Discriminant& disc) { return score(x, disc) > 0.0 ? 1 : 0; }

Vector score_rows(const Matrix& curves, const Discriminant& disc) {
    if (curves.cols() != static_cast<Eigen::Index>(disc.grid().size())) {
        throw Error(ErrorCode::grid_mismatch, "curve length does not match discriminant grid");
    }
    const double sign = orientation(disc);
    const Vector wb = disc.grid().weights().cwiseProduct(disc.beta());
    Vector s = curves * wb;
    s.array() -= disc.mu_mid().dot(wb);
    return sign * s;
}

double gaussian_error(const GridFunction& beta, const DiscretizedModel& model) {
    require_same_grid(beta.grid(), model.grid());
    const Vector wb = model.grid().weights().cwiseProduct(beta.values());
    const double variance = wb.dot(model.covariance() * wb);
    if (!(variance > 0.0)) {
        throw Error(ErrorCode::degenerate_variance, "<beta, G beta> must be positive");
    }
    const double separation = std::abs(model.delta().dot(wb));
    return normal_upper_tail(separation / (2.0 * std::sqrt(variance)));
}

double empirical_error(const CurveSet& test, const Discriminant& disc) {
    if (test.size() == 0) throw Error(ErrorCode::insufficient_data, "empty test set");
    require_same_grid(test.grid(), disc.grid());
    const Vector s = score_rows(test.curves(), disc);
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const int predicted = s[static_cast<Eigen::Index>(i)] > 0.0 ? 1 : 0;
        if (predicted != test.labels()[i]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(test.size());
}

std::vector<ZeroRegion> zero_regions(const Grid& grid, const Vector& beta) {
    std::vector<ZeroRegion> out;
    const auto t = static_cast<std::size_t>(beta.size());
    std::size_t i = 0;
    while (i < t) {
        if (beta[static_cast<Eigen::Index>(i)] != 0.0) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < t && beta[static_cast<Eigen::Index>(j + 1)] == 0.0) ++j;
        out.push_back(ZeroRegion{grid.point(i), grid.point(j), i, j});
        i = j + 1;
    }
    return out;
}

std::vector<ZeroRegion> zero_regions(const Discriminant& disc) { return zero_regions(disc.grid(), disc.beta()); }

}  // namespace sflda
