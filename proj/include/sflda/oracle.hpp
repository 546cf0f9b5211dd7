#pragma once

#include "sflda/estimation.hpp"
#include "sflda/solver.hpp"

#include <cstddef>
#include <vector>

namespace sflda {

enum class OracleMethod { sign_enumeration, proximal_descent };

struct OracleSolution {
    Vector beta;
    double objective = 0.0;
    OracleMethod method = OracleMethod::sign_enumeration;
    double certificate = 0.0;  // KKT residual of beta
    // sign_enumeration: patterns whose solution passed every check, and how many distinct solutions they gave
    std::size_t consistent_patterns = 0;
    std::size_t distinct_solutions = 0;
    // proximal_descent: objective after each iteration, starting with the initial point
    std::vector<double> objective_trace;
};

inline constexpr std::size_t kMaxEnumerationSize = 12;

/**
 * Exhaustive search over sign patterns s in {-1, 0, +1}^T: solve the
 * smooth system on the support with offset lambda * w * s, keep patterns
 * whose solution has the assumed signs and satisfies |g_j| <= lambda off
 * the support. Intended for T <= 12 (3^T patterns).
 */
OracleSolution oracle_sign_enumeration(const DiscretizedModel& model, const PenaltyParams& params);

/**
 * Proximal gradient descent with step 1 / (largest eigenvalue of the
 * smooth Hessian) from beta = 0.
 */
OracleSolution oracle_proximal_descent(const DiscretizedModel& model, const PenaltyParams& params,
                                       std::size_t iters);

}  // namespace sflda
