#pragma once

// Special functions: Gamma, Bessel functions of the first kind, and Jacobi
// polynomials with their weighted L2 norms.

#include <span>

namespace equijac {

/// Gamma function for x > 0. Lanczos approximation (g = 7, 9 terms).
double gamma_fn(double x);

/// log Gamma for x > 0, safe for large arguments.
double log_gamma_fn(double x);

/// Evaluation policy for bessel_j: power series below series_cutoff,
/// Hankel-type asymptotic expansion above. Deterministic for fixed fields.
struct BesselEvalPolicy {
    double series_cutoff = 12.0;
    int series_terms = 30;
    int asymptotic_terms = 22;
};

/// J_nu(x) for nu >= 0, x >= 0.
double bessel_j(double nu, double x, const BesselEvalPolicy& policy = {});

/// J'_nu(x) via (J_{nu-1} - J_{nu+1})/2. At x = 0 only nu >= 1 is defined.
double bessel_j_prime(double nu, double x, const BesselEvalPolicy& policy = {});

/// Jacobi polynomial P_n^{(alpha,beta)}(x) by the three-term recurrence.
double jacobi_poly(int n, double alpha, double beta, double x);

/// Fills out[k] = P_k^{(alpha,beta)}(x) for k = 0..out.size()-1.
void jacobi_poly_all(double alpha, double beta, double x, std::span<double> out);

/// h_n = int_{-1}^{1} (1-x)^alpha (1+x)^beta P_n(x)^2 dx, closed form.
double jacobi_norm_h(int n, double alpha, double beta);

}  // namespace equijac
