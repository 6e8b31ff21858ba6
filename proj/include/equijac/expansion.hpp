#pragma once

// Fourier coefficients against the eigenfunction and cosine bases, the means
// operators T_N f / D_N f, the general-form operator built from the weight A,
// and the equiconvergence experiment.

#include <span>
#include <string>
#include <vector>

#include "equijac/eigensolver.hpp"
#include "equijac/kernels.hpp"

namespace equijac {

class PiecewiseFunction {
  public:
    enum class Kind { indicator, smooth_bump, polynomial, cosine_mode };

    /// 1 on (a, b), 0 elsewhere; breakpoints {a, b} must lie inside (0, pi/2).
    static PiecewiseFunction indicator(double a, double b);
    /// exp(-1/(1-s^2)) with s = (t-center)/width on |s| < 1, 0 elsewhere.
    static PiecewiseFunction smooth_bump(double center, double width);
    /// sum_k coeffs[k] t^k; an empty list is the zero function.
    static PiecewiseFunction polynomial(std::vector<double> coeffs);
    /// cos(2kt).
    static PiecewiseFunction cosine_mode(int k);

    double operator()(double t) const;
    Kind kind() const { return kind_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& params() const { return params_; }
    std::string describe() const;

    /// Largest quadrature panel width that resolves the function's own
    /// scale (the mode-frequency rule handles the oscillatory factor).
    double resolution_scale() const;

    /// L2 norm on (0, pi/2), by breakpoint-split quadrature.
    double l2_norm() const;

  private:
    PiecewiseFunction(Kind kind, std::vector<double> params,
                      std::vector<double> breakpoints);
    Kind kind_;
    std::vector<double> params_;
    std::vector<double> breakpoints_;
};

/// hat f(n) = int f u_n dt, by composite Gauss-Legendre over panels split at
/// the breakpoints of f with width <= pi/(8(n+1)).
double coeff(const PiecewiseFunction& f, const EigenDecomposition& decomp, int n);

/// Cosine-basis coefficient int f(t) cos(2nt) dt with the same panel rule.
double coeff_cosine(const PiecewiseFunction& f, int n);

/// Coefficient tables for n = 0..count-1, sharing one quadrature grid fine
/// enough for the highest mode; experiments cache these across N.
std::vector<double> coeff_table(const PiecewiseFunction& f,
                                const EigenDecomposition& decomp, int count);
std::vector<double> coeff_table_cosine(const PiecewiseFunction& f, int count);

/// T_N f on the grid (eigen basis).
std::vector<double> apply_means(const PiecewiseFunction& f,
                                const EigenDecomposition& decomp,
                                const SummabilitySequence& r, int N,
                                std::span<const double> x_grid);

/// D_N f on the grid (cosine basis).
std::vector<double> apply_means_cosine(const PiecewiseFunction& f,
                                       const SummabilitySequence& r, int N,
                                       std::span<const double> x_grid);

/// General-form coefficient, the two quadrature routes: the identity route
/// integrates (A^{1/2} f) u_n; the direct route integrates f v_n A with
/// v_n = A^{-1/2} u_n evaluated as written.
double general_coeff_via_identity(const PiecewiseFunction& f,
                                  const EigenDecomposition& decomp, int n);
double general_coeff_direct(const PiecewiseFunction& f,
                            const EigenDecomposition& decomp, int n);

/// T^A_N f on an interior grid via A^{-1/2}(x) T_N(A^{1/2} f)(x).
std::vector<double> apply_means_general_form(const PiecewiseFunction& f,
                                             const EigenDecomposition& decomp,
                                             const SummabilitySequence& r, int N,
                                             std::span<const double> x_grid);

/// The same operator by the direct sum over F f(n) v_n(x), with F f(n)
/// integrated as written (f v_n A) on the identity route's quadrature grid;
/// the two routes restate one algebraic identity at evaluation level.
std::vector<double> apply_means_general_form_direct(const PiecewiseFunction& f,
                                                    const EigenDecomposition& decomp,
                                                    const SummabilitySequence& r, int N,
                                                    std::span<const double> x_grid);

struct EquiconvReport {
    std::string function_desc;
    double gamma_lo = 0.0, gamma_hi = 0.0;
    int grid_points = 0;
    std::vector<int> N_list;
    std::vector<double> e_N;  // sup over the grid of |T_N f - D_N f|
    std::vector<double> grid;
    int trace_N = 0;  // the N whose traces are stored (max of N_list)
    std::vector<double> trace_T, trace_D;
};

/// e_N = max over an equispaced grid in [gamma_lo, gamma_hi] of the
/// difference of the two means, for every N in N_list.
EquiconvReport equiconv_experiment(const PiecewiseFunction& f,
                                   const EigenDecomposition& decomp,
                                   const SummabilitySequence& r,
                                   std::span<const int> N_list, double gamma_lo,
                                   double gamma_hi, int grid_points);

/// Decay verdict: max e_N over N in [late_lo, late_hi] is at most `factor`
/// times the max over [early_lo, early_hi].
bool equiconv_decay(const EquiconvReport& report, int early_lo, int early_hi,
                    int late_lo, int late_hi, double factor = 0.5);

struct DecayFit {
    double slope = 0.0;
    bool degenerate = false;  // too few coefficients above the noise floor
    int used_lo = 0, used_hi = 0;
};

/// Log-log least-squares slope of |hat g(n)| over [n_lo, n_hi], trimming
/// coefficients below the quadrature noise floor.
DecayFit coefficient_decay_check(const PiecewiseFunction& g,
                                 const EigenDecomposition& decomp, int n_lo, int n_hi);

}  // namespace equijac
