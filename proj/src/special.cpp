#include "sflda/special.hpp"

#include "sflda/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sflda {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxTerms = 10000;

// Even/odd parts of 1/Gamma(1+x) for Temme's series:
//   gam1 = (1/G(1-x) - 1/G(1+x)) / (2x),  gam2 = (1/G(1-x) + 1/G(1+x)) / 2.
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
    gampl = 1.0 / std::tgamma(1.0 + mu);
    gammi = 1.0 / std::tgamma(1.0 - mu);
    if (std::abs(mu) > 0.05) {
        gam1 = (gammi - gampl) / (2.0 * mu);
        gam2 = 0.5 * (gammi + gampl);
        return;
    }
    // Taylor coefficients of 1/Gamma(z) = sum_k c_k z^k, k >= 1.
    static constexpr double c[] = {
        0.0,
        1.0,
        0.5772156649015328606,
        -0.6558780715202538811,
        -0.0420026350340952355,
        0.1665386113822914895,
        -0.0421977345555443367,
        -0.0096219715278769736,
        0.0072189432466630995,
        -0.0011651675918590651,
        -0.0002152416741149510,
        0.0001280502823881162,
        -0.0000201348547807882,
        -0.0000012504934821427,
        0.0000011330272319817,
    };
    // 1/Gamma(1+x) = sum_{k>=0} c_{k+1} x^k.
    const double x2 = mu * mu;
    double odd = 0.0;
    double even = 0.0;
    double p = 1.0;
    for (int k = 0; k + 2 < static_cast<int>(std::size(c)); k += 2) {
        even += c[k + 1] * p;
        odd += c[k + 2] * p;
        p *= x2;
    }
    gam1 = -odd;
    gam2 = even;
}

}  // namespace

double bessel_k(double nu, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw Error(ErrorCode::domain_error, "bessel_k requires x > 0");
    }
    if (!(nu >= 0.0) || !std::isfinite(nu)) {
        throw Error(ErrorCode::domain_error, "bessel_k requires nu >= 0");
    }
    const int n = static_cast<int>(nu + 0.5);
    const double mu = nu - n;
    const double mu2 = mu * mu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;

    double kmu;
    double k1;
    if (x <= 2.0) {
        const double x2 = 0.5 * x;
        const double pimu = std::numbers::pi * mu;
        const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
        double d = -std::log(x2);
        double e = mu * d;
        const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
        double gam1, gam2, gampl, gammi;
        temme_gammas(mu, gam1, gam2, gampl, gammi);
        double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / gampl;
        double q = 0.5 / (e * gammi);
        double c = 1.0;
        d = x2 * x2;
        double sum1 = p;
        for (int i = 1; i <= kMaxTerms; ++i) {
            const double di = i;
            ff = (di * ff + p + q) / (di * di - mu2);
            c *= d / di;
            p /= (di - mu);
            q /= (di + mu);
            const double del = c * ff;
            sum += del;
            sum1 += c * (p - di * ff);
            if (std::abs(del) < std::abs(sum) * kEps) break;
        }
        kmu = sum;
        k1 = sum1 * xi2;
    } else {
        double b = 2.0 * (1.0 + x);
        double d = 1.0 / b;
        double h = d;
        double delh = d;
        double q1 = 0.0;
        double q2 = 1.0;
        const double a1 = 0.25 - mu2;
        double q = a1;
        double c = a1;
        double a = -a1;
        double s = 1.0 + q * delh;
        int i = 2;
        for (; i <= kMaxTerms; ++i) {
            a -= 2.0 * (i - 1);
            c = -a * c / i;
            const double qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            const double dels = q * delh;
            s += dels;
            if (std::abs(dels / s) < kEps) break;
        }
        if (i > kMaxTerms) throw Error(ErrorCode::domain_error, "bessel_k continued fraction did not converge");
        h = a1 * h;
        kmu = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
        k1 = kmu * (mu + x + 0.5 - h) * xi;
    }
    for (int i = 1; i <= n; ++i) {
        const double next = (mu + i) * xi2 * k1 + kmu;
        kmu = k1;
        k1 = next;
    }
    return kmu;
}

double matern_cov(double s, double t, double sigma, double rho, double nu) {
    const double var = sigma * sigma;
    const double dist = std::abs(s - t);
    if (dist == 0.0) return var;
    const double z = std::sqrt(2.0 * nu) * dist / rho;
    return var * std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * std::pow(z, nu) * bessel_k(nu, z);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

std::vector<double> clamped_knots(double a, double b, int intervals, int order) {
    if (intervals < 1 || order < 1 || !(a < b)) {
        throw Error(ErrorCode::domain_error, "invalid knot specification");
    }
    std::vector<double> knots;
    knots.reserve(static_cast<std::size_t>(intervals + 2 * order - 1));
    for (int k = 0; k < order - 1; ++k) knots.push_back(a);
    for (int j = 0; j <= intervals; ++j) {
        knots.push_back(j == intervals ? b : a + (b - a) * j / intervals);
    }
    for (int k = 0; k < order - 1; ++k) knots.push_back(b);
    return knots;
}

int bspline_count(const std::vector<double>& knots, int order) {
    return static_cast<int>(knots.size()) - order;
}

double bspline_basis(const std::vector<double>& knots, int order, int i, double t) {
    const int count = bspline_count(knots, order);
    if (order < 1 || i < 0 || i >= count) {
        throw Error(ErrorCode::domain_error, "basis index " + std::to_string(i) + " out of range");
    }
    if (!(t >= knots.front() && t <= knots.back())) {
        throw Error(ErrorCode::domain_error, "t outside the knot range");
    }
    // Half-open spans, except the last non-empty span is closed on the right.
    const auto last_span = [&] {
        int m = static_cast<int>(knots.size()) - 2;
        while (m > 0 && knots[m] == knots[m + 1]) --m;
        return m;
    }();
    std::vector<double> n(static_cast<std::size_t>(order));
    for (int k = 0; k < order; ++k) {
        const int j = i + k;
        const double lo = knots[j];
        const double hi = knots[j + 1];
        const bool inside = (t >= lo && t < hi) || (j == last_span && t == hi);
        n[k] = inside ? 1.0 : 0.0;
    }
    for (int p = 2; p <= order; ++p) {
        for (int k = 0; k + p <= order; ++k) {
            const int j = i + k;
            double value = 0.0;
            const double left = knots[j + p - 1] - knots[j];
            if (left > 0.0) value += (t - knots[j]) / left * n[k];
            const double right = knots[j + p] - knots[j + 1];
            if (right > 0.0) value += (knots[j + p] - t) / right * n[k + 1];
            n[k] = value;
        }
    }
    return n[0];
}

}  // namespace sflda
