#pragma once

// Galerkin eigensolver in the exact eigenbasis of the unperturbed operator.
// The basis functions are phi_n(t) = N_n^{-1} sin^{a+1/2} t cos^{b+1/2} t
// P_n^{(a,b)}(cos 2t), orthonormal on (0, pi/2); the perturbation enters only
// through the chi matrix, evaluated by Gauss-Jacobi quadrature after the
// substitution x = cos 2t.

#include <span>
#include <vector>

#include "equijac/operator_spec.hpp"

namespace equijac {

class SpectralBasis {
  public:
    SpectralBasis(JacobiParams params, int size);

    const JacobiParams& params() const { return params_; }
    int size() const { return size_; }

    /// Exact unperturbed eigenvalue (2n+1)^2 + 2(2n+1)(a+b) + 2ab + 1/2.
    double mu_unperturbed(int n) const;

    /// Normalization constant N_n with N_n^2 = 2^{-a-b-2} h_n.
    double norm_const(int n) const { return norm_const_[n]; }

    double phi(int n, double t) const;
    void phi_all(double t, std::span<double> out) const;

  private:
    JacobiParams params_;
    int size_;
    std::vector<double> norm_const_;
};

SpectralBasis build_basis(const JacobiParams& params, int size);

struct ConvergenceInfo {
    int basis_size = 0;
    int quad_points = 0;
    int usable = 0;  // lowest 3/4 of the computed pairs
    int sweeps = 0;
    double offdiag_residual = 0.0;
    // max relative eigenvalue movement over the smaller solve's usable range
    // when refined by solve_refined; NaN when no refinement was performed
    double refinement_shift = 0.0;
};

struct EndpointConstant {
    double value = 0.0;
    bool converged = true;
};

class EigenDecomposition {
  public:
    EigenDecomposition(OperatorSpec spec, SpectralBasis basis,
                       std::vector<double> eigenvalues,
                       std::vector<std::vector<double>> coefficients,
                       ConvergenceInfo info);

    const OperatorSpec& spec() const { return spec_; }
    const SpectralBasis& basis() const { return basis_; }
    const ConvergenceInfo& info() const { return info_; }

    int size() const { return static_cast<int>(mu_.size()); }
    int usable_count() const { return info_.usable; }

    double eigenvalue(int n) const;
    double sigma(int n) const;  // sqrt(mu_n)
    std::span<const double> coefficients(int n) const;

    /// u_n(t) for t in (0, pi/2). Indices in the flagged tail (top quarter)
    /// throw std::out_of_range unless allow_tail is set.
    double eigenfunction(int n, double t, bool allow_tail = false) const;

    /// Evaluates u_0(t)..u_{count-1}(t) sharing one basis recurrence.
    void eigenfunction_row(double t, std::span<double> out) const;

    /// c_n (side = left): limit of u_n(t)/t^{a+1/2} as t -> 0+, by Richardson
    /// extrapolation over t in {1e-3, 5e-4, 2.5e-4}. d_n (side = right) is
    /// the mirrored limit with exponent b+1/2. The converged flag drops when
    /// successive extrapolants differ by more than 1e-4 relative.
    EndpointConstant endpoint_constant(Side side, int n) const;

    /// Records the refinement diagnostic; called by solve_refined only.
    void set_refinement_shift(double shift) { info_.refinement_shift = shift; }

  private:
    void check_index(int n, bool allow_tail) const;

    OperatorSpec spec_;
    SpectralBasis basis_;
    std::vector<double> mu_;
    std::vector<std::vector<double>> coef_;  // coef_[n][k]: u_n over phi_k
    ConvergenceInfo info_;
};

/// Assembles M = diag(mu_k^J) - [chi matrix] and diagonalizes it. The sign of
/// each eigenvector is fixed so that u_n(t)/t^{a+1/2} -> positive as t -> 0+.
EigenDecomposition solve(const OperatorSpec& spec, int basis_size, int quad_points);

/// Solves at basis_size and again at 3/2 basis_size; returns the larger
/// decomposition with info().refinement_shift recording the largest relative
/// eigenvalue movement across the smaller solve's usable range.
EigenDecomposition solve_refined(const OperatorSpec& spec, int basis_size,
                                 int quad_points);

}  // namespace equijac
