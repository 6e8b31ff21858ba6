#pragma once

// Dense symmetric eigensolver (cyclic Jacobi rotations) and Gaussian
// quadrature rules built from it via Golub-Welsch.

#include <functional>
#include <span>
#include <vector>

namespace equijac {

class SymmetricMatrix {
  public:
    explicit SymmetricMatrix(int dim);

    /// Builds from row-major data of size dim*dim, symmetrizing as
    /// 0.5*(a_ij + a_ji) so the stored entries are exactly symmetric.
    static SymmetricMatrix from_rows(int dim, std::span<const double> data);

    int dim() const { return dim_; }
    double at(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
    void set(int i, int j, double v);  // sets (i,j) and (j,i)

    std::span<const double> data() const { return a_; }

    double norm_inf() const;
    double norm_frobenius() const;

  private:
    int dim_;
    std::vector<double> a_;
};

struct EigenResult {
    std::vector<double> values;                // ascending
    std::vector<std::vector<double>> vectors;  // vectors[k] is the k-th column
    int sweeps = 0;
    double offdiag_residual = 0.0;
};

/// Diagonalizes by cyclic Jacobi rotations. Stops when the off-diagonal
/// Frobenius norm drops below 1e-14 * ||M||_F; throws NumericalError after
/// 30 sweeps without convergence.
EigenResult symmetric_eigen(const SymmetricMatrix& m);

enum class QuadDomain { minus_one_one, zero_half_pi };

struct QuadratureRule {
    std::vector<double> nodes;    // strictly increasing
    std::vector<double> weights;  // positive
    QuadDomain domain = QuadDomain::minus_one_one;
};

/// q-point Gauss-Jacobi rule on [-1,1] for the weight (1-x)^alpha (1+x)^beta,
/// exact for polynomials of degree <= 2q-1.
QuadratureRule gauss_jacobi_rule(int q, double alpha, double beta);

/// q-point Gauss-Legendre rule on [-1,1] (alpha = beta = 0).
QuadratureRule gauss_legendre_rule(int q);

/// Affine image of a [-1,1] rule on [0, pi/2] (plain dt weight).
QuadratureRule map_to_zero_half_pi(const QuadratureRule& rule);

/// Composite Gauss-Legendre integration of f over [a, b] with panel width
/// <= max_panel and the given per-panel order.
double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           double max_panel, int order = 10);

}  // namespace equijac
