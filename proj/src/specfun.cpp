#include "equijac/specfun.hpp"

#include <cmath>
#include <vector>
#include <numbers>
#include <stdexcept>

namespace equijac {

namespace {

// Lanczos coefficients, g = 7, 9 terms (Godfrey's set).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double z) {
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + i);
    return a;
}

void check_policy(const BesselEvalPolicy& p) {
    if (!(p.series_cutoff > 0.0) || p.series_terms < 1 || p.asymptotic_terms < 1)
        throw std::domain_error("BesselEvalPolicy: cutoff must be > 0 and term counts >= 1");
}

// Ascending power series around x = 0; valid for nu > -1.
double bessel_series(double nu, double x, int terms) {
    const double q = -0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < terms; ++k) {
        term *= q / (k * (nu + k));
        sum += term;
    }
    return std::pow(0.5 * x, nu) / gamma_fn(nu + 1.0) * sum;
}

// Hankel asymptotic expansion for large x. The series is divergent; the sum
// is truncated at the globally smallest term (for nu^2 comparable to x the
// term magnitudes first hump up before decaying).
double bessel_asymptotic(double nu, double x, int terms) {
    const double fournu2 = 4.0 * nu * nu;
    std::vector<double> t(terms);
    t[0] = 1.0;
    for (int k = 1; k < terms; ++k) {
        const double odd = 2.0 * k - 1.0;
        t[k] = t[k - 1] * (fournu2 - odd * odd) / (8.0 * k * x);
    }
    int cut = 0;
    for (int k = 1; k < terms; ++k)
        if (std::fabs(t[k]) < std::fabs(t[cut])) cut = k;
    double p = 0.0, q = 0.0;
    for (int k = 0; k <= cut; ++k) {
        switch (k % 4) {
            case 0: p += t[k]; break;
            case 1: q += t[k]; break;
            case 2: p -= t[k]; break;
            default: q -= t[k]; break;
        }
    }
    const double w = x - (0.5 * nu + 0.25) * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(w) - q * std::sin(w));
}

// Internal entry point that also accepts nu in (-1, 0), needed by the
// derivative recurrence.
double bessel_j_any(double nu, double x, const BesselEvalPolicy& policy) {
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (x <= policy.series_cutoff) return bessel_series(nu, x, policy.series_terms);
    return bessel_asymptotic(nu, x, policy.asymptotic_terms);
}

}  // namespace

double log_gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma_fn: requires x > 0");
    if (x < 0.5) return log_gamma_fn(x + 1.0) - std::log(x);
    const double z = x - 1.0;
    const double t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
           std::log(lanczos_sum(z));
}

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn: requires x > 0");
    if (x < 0.5) return gamma_fn(x + 1.0) / x;
    if (x > 140.0) return std::exp(log_gamma_fn(x));
    const double z = x - 1.0;
    const double t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) *
           lanczos_sum(z);
}

double bessel_j(double nu, double x, const BesselEvalPolicy& policy) {
    check_policy(policy);
    if (!(nu >= 0.0)) throw std::domain_error("bessel_j: requires nu >= 0");
    if (!(x >= 0.0)) throw std::domain_error("bessel_j: requires x >= 0");
    return bessel_j_any(nu, x, policy);
}

double bessel_j_prime(double nu, double x, const BesselEvalPolicy& policy) {
    check_policy(policy);
    if (!(nu >= 0.0)) throw std::domain_error("bessel_j_prime: requires nu >= 0");
    if (!(x >= 0.0)) throw std::domain_error("bessel_j_prime: requires x >= 0");
    if (x == 0.0) {
        if (nu < 1.0 && nu != 0.0)
            throw std::domain_error("bessel_j_prime: singular at x = 0 for 0 < nu < 1");
        if (nu == 1.0) return 0.5;
        return 0.0;  // nu = 0 or nu > 1
    }
    if (nu == 0.0) return -bessel_j_any(1.0, x, policy);
    return 0.5 * (bessel_j_any(nu - 1.0, x, policy) - bessel_j_any(nu + 1.0, x, policy));
}

double jacobi_poly(int n, double alpha, double beta, double x) {
    if (n < 0) throw std::domain_error("jacobi_poly: requires n >= 0");
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw std::domain_error("jacobi_poly: requires alpha, beta > -1");
    if (!(std::fabs(x) <= 1.0 + 1e-12))
        throw std::domain_error("jacobi_poly: requires x in [-1, 1]");
    if (n == 0) return 1.0;
    double pm1 = 1.0;
    double p = 0.5 * (alpha - beta + (alpha + beta + 2.0) * x);
    for (int m = 2; m <= n; ++m) {
        const double a = 2.0 * m + alpha + beta;
        const double c1 = 2.0 * m * (m + alpha + beta) * (a - 2.0);
        const double c2 = (a - 1.0) * (alpha * alpha - beta * beta);
        const double c3 = (a - 1.0) * a * (a - 2.0);
        const double c4 = 2.0 * (m + alpha - 1.0) * (m + beta - 1.0) * a;
        const double next = ((c2 + c3 * x) * p - c4 * pm1) / c1;
        pm1 = p;
        p = next;
    }
    return p;
}

void jacobi_poly_all(double alpha, double beta, double x, std::span<double> out) {
    const int count = static_cast<int>(out.size());
    if (count == 0) return;
    out[0] = 1.0;
    if (count == 1) return;
    out[1] = 0.5 * (alpha - beta + (alpha + beta + 2.0) * x);
    for (int m = 2; m < count; ++m) {
        const double a = 2.0 * m + alpha + beta;
        const double c1 = 2.0 * m * (m + alpha + beta) * (a - 2.0);
        const double c2 = (a - 1.0) * (alpha * alpha - beta * beta);
        const double c3 = (a - 1.0) * a * (a - 2.0);
        const double c4 = 2.0 * (m + alpha - 1.0) * (m + beta - 1.0) * a;
        out[m] = ((c2 + c3 * x) * out[m - 1] - c4 * out[m - 2]) / c1;
    }
}

double jacobi_norm_h(int n, double alpha, double beta) {
    if (n < 0) throw std::domain_error("jacobi_norm_h: requires n >= 0");
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw std::domain_error("jacobi_norm_h: requires alpha, beta > -1");
    const double s = alpha + beta;
    const double ln2 = std::numbers::ln2;
    if (n == 0) {
        // 2^{s+1} Gamma(a+1) Gamma(b+1) / Gamma(s+2); avoids Gamma(s+1),
        // which is undefined when s = -1.
        return std::exp((s + 1.0) * ln2 + log_gamma_fn(alpha + 1.0) +
                        log_gamma_fn(beta + 1.0) - log_gamma_fn(s + 2.0));
    }
    return std::exp((s + 1.0) * ln2 - std::log(2.0 * n + s + 1.0) +
                    log_gamma_fn(n + alpha + 1.0) + log_gamma_fn(n + beta + 1.0) -
                    log_gamma_fn(n + s + 1.0) - log_gamma_fn(n + 1.0));
}

}  // namespace equijac
