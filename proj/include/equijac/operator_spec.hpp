#pragma once

// The perturbed operator data: parameters (alpha, beta), the positive even
// perturbation B, the potential shift chi, the endpoint-regularized
// potentials eta0/eta1 with their integrals X0/X1, the eigenvalue-correction
// constant Theta, and the general-form weight A.

#include <vector>

namespace equijac {

struct JacobiParams {
    double alpha;
    double beta;
    JacobiParams(double a, double b);
};

/// B(t) = 1 + sum_k a_k cos(2kt) with sum |a_k| < 1. This family is smooth,
/// pi-periodic, even with respect to 0 and pi/2, and strictly positive, with
/// closed-form derivatives.
class PerturbationB {
  public:
    explicit PerturbationB(std::vector<double> cosine_coeffs = {});
    double value(double t) const;
    double deriv(double t) const;
    double deriv2(double t) const;
    bool is_constant() const { return coeffs_.empty(); }
    const std::vector<double>& coeffs() const { return coeffs_; }

  private:
    std::vector<double> coeffs_;  // a_1..a_K
};

enum class Side { left, right };

/// cot^2 t - 1/t^2, evaluated by a Maclaurin series for t < 0.1 and directly
/// otherwise. Even in t; the series branch is exposed for diagnostics.
double cot_sq_minus_inv_sq(double t);
namespace detail {
double cot_sq_minus_inv_sq_series(double t);
double cot_sq_minus_inv_sq_direct(double t);
}  // namespace detail

class OperatorSpec {
  public:
    OperatorSpec(JacobiParams params, PerturbationB b);

    const JacobiParams& params() const { return params_; }
    const PerturbationB& b() const { return b_; }

    /// chi on [0, pi/2]; the endpoint values are the analytic limits of the
    /// 0*inf products, used within 1e-6 of either endpoint.
    double chi(double t) const;

    /// chi formula without domain folding, for symmetry diagnostics. Valid
    /// wherever tan/cot are finite and t is not within 1e-6 of a multiple of
    /// pi/2 (where the indeterminate products need their limits).
    double chi_raw(double t) const;

    /// eta0 (side = left) or eta1 (side = right) on [0, pi/2).
    double eta(Side side, double t) const;

    /// X0(t) or X1(t) = integral of eta from 0 to t, composite Gauss-Legendre
    /// with panel width <= 0.05.
    double x_integral(Side side, double t) const;

    /// Theta = alpha^2 + beta^2 - 1/2 + (2/pi) * int_0^{pi/2} chi.
    double theta() const { return theta_; }
    double chi_integral() const { return chi_integral_; }

    /// A(t) = (sin t)^{2 alpha + 1} (cos t)^{2 beta + 1} B(t) on (0, pi/2).
    double weight_a(double t) const;

  private:
    JacobiParams params_;
    PerturbationB b_;
    double chi_integral_;
    double theta_;
};

}  // namespace equijac
