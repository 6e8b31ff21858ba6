#pragma once

// Large-n predictors for the eigenvalue square roots, the eigenfunctions
// (Bessel and cosine main terms near either endpoint), and the endpoint
// normalization constants, plus residual scans that compare predictors
// against a computed decomposition scaled by the expected decay rates.

#include <span>
#include <string>
#include <vector>

#include "equijac/eigensolver.hpp"
#include "equijac/operator_spec.hpp"

namespace equijac {

struct AsymptoticConstants {
    double nu;            // 1 + alpha + beta
    double lambda_left;   // alpha*pi/2 + pi/4
    double lambda_right;  // beta*pi/2 + pi/4
    double theta_cap;     // Theta
    double tau;           // min(1, alpha + 1/2)
    static AsymptoticConstants from_spec(const OperatorSpec& spec);
};

/// Two-term eigenvalue square root: 2n + 1 + alpha + beta - Theta/(4n).
double predict_sigma(const OperatorSpec& spec, int n);

enum class UForm { bessel_left, bessel_right, cosine_left, cosine_right };

/// Main terms of the eigenfunction expansion in the requested form. The left
/// forms are valid for t in (0, pi/4] (cosine additionally needs t >= 1/n);
/// the right forms mirror with pi/2 - t, beta, X1 and carry a (-1)^n factor.
double predict_u(const OperatorSpec& spec, const AsymptoticConstants& constants, int n,
                 double sigma_n, double t, UForm form);

struct EndpointPrediction {
    double c_n;
    double d_n;
};

/// c_n = sigma^{a+1/2} / (2^{a-1/2} Gamma(a+1)),
/// d_n = (-1)^n sigma^{b+1/2} / (2^{b-1/2} Gamma(b+1)).
EndpointPrediction predict_endpoint_constants(const OperatorSpec& spec, int n,
                                              double sigma_n);

enum class LemmaKind {
    sigma2,
    u_bessel_left,
    u_cosine_left,
    u_bessel_right,
    u_cosine_right,
    cn,
    dn,
    delta_p3,
    delta_p4
};

std::string lemma_name(LemmaKind k);

struct ResidualRow {
    int n;
    double t_at_max;  // NaN for t-independent scans
    double raw;
    double scaled;
};

struct ResidualReport {
    LemmaKind lemma;
    std::vector<ResidualRow> rows;
    double max_scaled = 0.0;
    int skipped = 0;  // grid points outside the validity window

    /// Boundedness verdict: max scaled residual over the upper half of the
    /// n-range is at most `slack` times the max over the lower half. Values
    /// below `floor` count as numerically zero (exactly solvable cases reduce
    /// the residuals to rounding noise, where the ratio says nothing).
    bool bounded(double slack = 2.0, double floor = 1e-6) const;
};

/// Scans n in [n_lo, n_hi]. For t-dependent lemmas, t_grid points outside the
/// validity window are skipped and counted. When alpha (left forms) or beta
/// (right forms) is zero, scaled residuals are divided by the logarithmic
/// remainder factor log(2/min(1, sigma_n * t)).
ResidualReport residual_scan(const EigenDecomposition& decomp, LemmaKind lemma, int n_lo,
                             int n_hi, std::span<const double> t_grid);

}  // namespace equijac
