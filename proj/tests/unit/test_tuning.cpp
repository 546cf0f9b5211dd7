#include "helpers.hpp"

#include "sflda/error.hpp"
#include "sflda/simulation.hpp"
#include "sflda/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace sflda;

namespace {

CurveSet small_training(std::uint64_t seed, std::size_t per_class = 20) {
    return gen_dataset(build_setting(1, make_grid(0.0, 1.0, 25)), per_class, seed);
}

}  // namespace

TEST_CASE("stratified folds are balanced partitions") {
    std::vector<int> labels;
    for (int i = 0; i < 20; ++i) labels.push_back(i % 2);
    const auto folds = stratified_folds(labels, 5, 3);
    REQUIRE(folds.size() == 5);
    std::set<std::size_t> seen;
    for (const Fold& f : folds) {
        CHECK(std::is_sorted(f.begin(), f.end()));
        int per_class[2] = {0, 0};
        for (std::size_t i : f) {
            ++per_class[labels[i]];
            CHECK(seen.insert(i).second);
        }
        CHECK(per_class[0] == 2);
        CHECK(per_class[1] == 2);
    }
    CHECK(seen.size() == 20);
    CHECK(stratified_folds(labels, 5, 3) == folds);
    CHECK(stratified_folds(labels, 5, 4) != folds);
    CHECK_THROWS_AS(stratified_folds(labels, 1, 3), Error);
    CHECK_THROWS_AS(stratified_folds(labels, 11, 3), Error);
}

TEST_CASE("default grids") {
    const auto model = pooled_estimators(small_training(1));
    const auto lambdas = default_lambda_grid(model);
    REQUIRE(lambdas.size() == 11);
    CHECK(lambdas[0] == lambda_max(model));
    CHECK(lambdas[10] == std::ldexp(lambda_max(model), -10));
    const Grid g = make_grid(0.0, 1.0, 100);
    const auto etas = default_eta_grid(g);
    REQUIRE(etas.size() == 10);
    for (std::size_t k = 0; k < etas.size(); ++k) {
        CHECK(etas[k] == doctest::Approx(g.dt() * g.dt() * std::ldexp(1.0, -static_cast<int>(k) - 1)).epsilon(1e-15));
    }
}

TEST_CASE("single-cell grid returns that cell") {
    const CurveSet data = small_training(2);
    const CvResult cv = cv_select(data, {0.01}, {0.0005}, 5, 1);
    CHECK(cv.best_lambda == 0.01);
    CHECK(cv.best_eta == 0.0005);
    CHECK(cv.cv_error.rows() == 1);
    CHECK(cv.cv_error.cols() == 1);
}

TEST_CASE("grid at lambda_max only fails every cell") {
    const CurveSet data = small_training(3);
    const double big = 10.0 * lambda_max(pooled_estimators(data));
    try {
        cv_select(data, {big}, {0.001, 0.0001}, 5, 1);
        FAIL("expected tuning failure");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::tuning_failed);
    }
}

TEST_CASE("grids must be descending") {
    const CurveSet data = small_training(4);
    CHECK_THROWS_AS(cv_select(data, {0.01, 0.02}, {0.001}, 5, 1), Error);
    CHECK_THROWS_AS(cv_select(data, {0.02, 0.01}, {0.001, 0.002}, 5, 1), Error);
}

TEST_CASE("cv is reproducible and parallel-invariant, and picks a true minimizer") {
    const CurveSet data = small_training(5, 30);
    const auto model = pooled_estimators(data);
    const auto lambdas = default_lambda_grid(model);
    const auto etas = default_eta_grid(data.grid());
    const CvResult a = cv_select(data, lambdas, etas, 5, 9);
    const CvResult b = cv_select(data, lambdas, etas, 5, 9, {}, 3);
    CHECK(a.cv_error == b.cv_error);
    CHECK(a.failed == b.failed);
    CHECK(a.best_lambda == b.best_lambda);
    CHECK(a.best_eta == b.best_eta);

    const double best = a.cv_error(static_cast<Eigen::Index>(a.best_lambda_index),
                                   static_cast<Eigen::Index>(a.best_eta_index));
    CHECK(best == a.cv_error.minCoeff());
    // tie-break: first minimum in lambda-major order (largest lambda, then largest eta)
    bool found = false;
    for (Eigen::Index i = 0; i < a.cv_error.rows() && !found; ++i) {
        for (Eigen::Index j = 0; j < a.cv_error.cols() && !found; ++j) {
            if (a.cv_error(i, j) == best) {
                CHECK(static_cast<std::size_t>(i) == a.best_lambda_index);
                CHECK(static_cast<std::size_t>(j) == a.best_eta_index);
                found = true;
            }
        }
    }
    CHECK(std::find(lambdas.begin(), lambdas.end(), a.best_lambda) != lambdas.end());
    CHECK(std::find(etas.begin(), etas.end(), a.best_eta) != etas.end());
}

TEST_CASE("cv error is invariant to row permutations that keep within-class order") {
    const CurveSet data = small_training(6, 15);
    // interleave the two classes; the k-th curve of each class keeps its rank
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < 15; ++i) {
        order.push_back(15 + i);
        order.push_back(i);
    }
    const CurveSet shuffled = data.subset(order);
    const std::vector<double> lambdas = {0.2, 0.05, 0.01};
    const std::vector<double> etas = {1e-4, 1e-5};
    const CvResult a = cv_select(data, lambdas, etas, 3, 17);
    const CvResult b = cv_select(shuffled, lambdas, etas, 3, 17);
    CHECK((a.cv_error - b.cv_error).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.best_lambda == b.best_lambda);
    CHECK(a.best_eta == b.best_eta);
}
