#pragma once

#include <vector>

namespace sflda {

/**
 * Modified Bessel function of the second kind K_nu(x), x > 0, nu >= 0.
 *
 * nu is split as n + mu with |mu| <= 1/2. K_mu and K_{mu+1} come from
 * Temme's series for x <= 2 and Steed's continued fraction otherwise;
 * K_nu then follows by upward recurrence
 * K_{m+1}(x) = K_{m-1}(x) + (2m/x) K_m(x).
 */
double bessel_k(double nu, double x);

/// Matern covariance; returns sigma^2 at s == t.
double matern_cov(double s, double t, double sigma, double rho, double nu);

/// Standard normal CDF and upper tail, via the complementary error function.
double normal_cdf(double z);
double normal_upper_tail(double z);

/**
 * Clamped knot vector on [a, b] with `intervals` equal intervals, each
 * boundary knot repeated `order` times. Gives intervals + order - 1 basis
 * functions.
 */
std::vector<double> clamped_knots(double a, double b, int intervals, int order);

/// Cox-de Boor value of basis function i (0-based) of the given order (degree + 1).
double bspline_basis(const std::vector<double>& knots, int order, int i, double t);

int bspline_count(const std::vector<double>& knots, int order);

}  // namespace sflda
