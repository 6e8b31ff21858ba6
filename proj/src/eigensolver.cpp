#include "equijac/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "equijac/errors.hpp"
#include "equijac/linalg.hpp"
#include "equijac/specfun.hpp"

namespace equijac {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

SpectralBasis::SpectralBasis(JacobiParams params, int size)
    : params_(params), size_(size) {
    if (size < 1) throw std::domain_error("SpectralBasis: size >= 1 required");
    const double a = params_.alpha, b = params_.beta;
    norm_const_.resize(size);
    for (int n = 0; n < size; ++n)
        norm_const_[n] =
            std::sqrt(jacobi_norm_h(n, a, b) * std::pow(2.0, -(a + b + 2.0)));
}

double SpectralBasis::mu_unperturbed(int n) const {
    const double a = params_.alpha, b = params_.beta;
    const double m = 2.0 * n + 1.0;
    return m * m + 2.0 * m * (a + b) + 2.0 * a * b + 0.5;
}

double SpectralBasis::phi(int n, double t) const {
    const double a = params_.alpha, b = params_.beta;
    const double pre = std::pow(std::sin(t), a + 0.5) * std::pow(std::cos(t), b + 0.5);
    return pre * jacobi_poly(n, a, b, std::cos(2.0 * t)) / norm_const_[n];
}

void SpectralBasis::phi_all(double t, std::span<double> out) const {
    const double a = params_.alpha, b = params_.beta;
    const double pre = std::pow(std::sin(t), a + 0.5) * std::pow(std::cos(t), b + 0.5);
    jacobi_poly_all(a, b, std::cos(2.0 * t), out);
    for (size_t n = 0; n < out.size(); ++n) out[n] *= pre / norm_const_[n];
}

SpectralBasis build_basis(const JacobiParams& params, int size) {
    return SpectralBasis(params, size);
}

EigenDecomposition::EigenDecomposition(OperatorSpec spec, SpectralBasis basis,
                                       std::vector<double> eigenvalues,
                                       std::vector<std::vector<double>> coefficients,
                                       ConvergenceInfo info)
    : spec_(std::move(spec)),
      basis_(std::move(basis)),
      mu_(std::move(eigenvalues)),
      coef_(std::move(coefficients)),
      info_(info) {}

void EigenDecomposition::check_index(int n, bool allow_tail) const {
    if (n < 0 || n >= size()) throw std::out_of_range("EigenDecomposition: index out of range");
    if (!allow_tail && n >= info_.usable) {
        std::ostringstream msg;
        msg << "EigenDecomposition: index " << n << " lies in the flagged tail (usable < "
            << info_.usable << "); pass allow_tail to override";
        throw std::out_of_range(msg.str());
    }
}

double EigenDecomposition::eigenvalue(int n) const {
    check_index(n, true);
    return mu_[n];
}

double EigenDecomposition::sigma(int n) const {
    const double mu = eigenvalue(n);
    if (mu < 0.0 && mu > -1e-8) return 0.0;  // rounding at a zero eigenvalue
    return std::sqrt(mu);
}

std::span<const double> EigenDecomposition::coefficients(int n) const {
    check_index(n, true);
    return coef_[n];
}

double EigenDecomposition::eigenfunction(int n, double t, bool allow_tail) const {
    check_index(n, allow_tail);
    if (!(t > 0.0) || !(t < kHalfPi))
        throw std::domain_error("eigenfunction: requires t in (0, pi/2)");
    std::vector<double> phi(basis_.size());
    basis_.phi_all(t, phi);
    double u = 0.0;
    for (int k = 0; k < basis_.size(); ++k) u += coef_[n][k] * phi[k];
    return u;
}

void EigenDecomposition::eigenfunction_row(double t, std::span<double> out) const {
    if (!(t > 0.0) || !(t < kHalfPi))
        throw std::domain_error("eigenfunction_row: requires t in (0, pi/2)");
    if (static_cast<int>(out.size()) > size())
        throw std::out_of_range("eigenfunction_row: more values requested than computed");
    std::vector<double> phi(basis_.size());
    basis_.phi_all(t, phi);
    for (size_t n = 0; n < out.size(); ++n) {
        double u = 0.0;
        for (int k = 0; k < basis_.size(); ++k) u += coef_[n][k] * phi[k];
        out[n] = u;
    }
}

EndpointConstant EigenDecomposition::endpoint_constant(Side side, int n) const {
    check_index(n, false);
    const double expo =
        (side == Side::left ? spec_.params().alpha : spec_.params().beta) + 0.5;
    const double ts[3] = {1e-3, 5e-4, 2.5e-4};
    double s[3];
    for (int i = 0; i < 3; ++i) {
        const double t = side == Side::left ? ts[i] : kHalfPi - ts[i];
        s[i] = eigenfunction(n, t) / std::pow(ts[i], expo);
    }
    // The scaled values expand in even powers of t; two Richardson levels
    // with halving steps.
    const double r1a = (4.0 * s[1] - s[0]) / 3.0;
    const double r1b = (4.0 * s[2] - s[1]) / 3.0;
    const double r2 = (16.0 * r1b - r1a) / 15.0;
    EndpointConstant out;
    out.value = r2;
    const double scale = std::max(std::fabs(r2), 1e-300);
    out.converged = std::fabs(r1b - r1a) <= 1e-4 * scale;
    return out;
}

EigenDecomposition solve(const OperatorSpec& spec, int basis_size, int quad_points) {
    if (basis_size < 8) throw std::invalid_argument("solve: requires basis_size >= 8");
    if (quad_points < 2 * basis_size)
        throw std::invalid_argument("solve: requires quad_points >= 2 * basis_size");

    const JacobiParams& p = spec.params();
    SpectralBasis basis(p, basis_size);
    const QuadratureRule rule = gauss_jacobi_rule(quad_points, p.alpha, p.beta);
    const int q = quad_points;
    const int k_count = basis_size;

    // psi[k*q + i] = 2^{-(a+b+2)/2} P_k(x_i) sqrt(w_i) / N_k, so that
    // int chi phi_j phi_k dt ~= sum_i chi(t_i) psi_j,i psi_k,i.
    const double scale = std::pow(2.0, -0.5 * (p.alpha + p.beta + 2.0));
    std::vector<double> psi(static_cast<size_t>(k_count) * q);
    std::vector<double> chi_v(q);
    std::vector<double> pk(k_count);
    for (int i = 0; i < q; ++i) {
        const double x = std::clamp(rule.nodes[i], -1.0, 1.0);
        const double t = 0.5 * std::acos(x);
        chi_v[i] = spec.chi(t);
        jacobi_poly_all(p.alpha, p.beta, x, pk);
        const double sw = std::sqrt(rule.weights[i]);
        for (int k = 0; k < k_count; ++k)
            psi[static_cast<size_t>(k) * q + i] =
                scale * pk[k] * sw / basis.norm_const(k);
    }

    // Quadrature sanity: the rule must reproduce the basis normalization.
    for (int k : {0, k_count - 1}) {
        double s = 0.0;
        for (int i = 0; i < q; ++i) {
            const double v = psi[static_cast<size_t>(k) * q + i];
            s += v * v;
        }
        if (std::fabs(s - 1.0) > 1e-8) {
            std::ostringstream msg;
            msg << "solve: quadrature failed to normalize basis function " << k
                << " (got " << s << ")";
            throw NumericalError(msg.str());
        }
    }

    SymmetricMatrix m(k_count);
    for (int j = 0; j < k_count; ++j) {
        const double* pj = &psi[static_cast<size_t>(j) * q];
        for (int k = j; k < k_count; ++k) {
            const double* pkrow = &psi[static_cast<size_t>(k) * q];
            double g = 0.0;
            for (int i = 0; i < q; ++i) g += chi_v[i] * pj[i] * pkrow[i];
            const double diag = (j == k) ? basis.mu_unperturbed(j) : 0.0;
            m.set(j, k, diag - g);
        }
    }

    EigenResult eig = symmetric_eigen(m);

    // Sign convention: u_n(t)/t^{a+1/2} -> positive as t -> 0+. The limit is
    // proportional to sum_k c_k P_k(1) / N_k with a positive prefactor.
    std::vector<double> p_one(k_count);
    jacobi_poly_all(p.alpha, p.beta, 1.0, p_one);
    for (int n = 0; n < k_count; ++n) {
        double s = 0.0;
        for (int k = 0; k < k_count; ++k)
            s += eig.vectors[n][k] * p_one[k] / basis.norm_const(k);
        if (s < 0.0)
            for (double& c : eig.vectors[n]) c = -c;
    }

    ConvergenceInfo info;
    info.basis_size = basis_size;
    info.quad_points = quad_points;
    info.usable = (3 * basis_size) / 4;
    info.sweeps = eig.sweeps;
    info.offdiag_residual = eig.offdiag_residual;
    info.refinement_shift = std::numeric_limits<double>::quiet_NaN();

    return EigenDecomposition(spec, std::move(basis), std::move(eig.values),
                              std::move(eig.vectors), info);
}

EigenDecomposition solve_refined(const OperatorSpec& spec, int basis_size,
                                 int quad_points) {
    const EigenDecomposition coarse = solve(spec, basis_size, quad_points);
    const int fine_basis = basis_size + basis_size / 2;
    EigenDecomposition fine =
        solve(spec, fine_basis, std::max(2 * fine_basis, quad_points));
    double shift = 0.0;
    for (int n = 0; n < coarse.usable_count(); ++n) {
        const double a = coarse.eigenvalue(n), b = fine.eigenvalue(n);
        shift = std::max(shift, std::fabs(a - b) / std::max(std::fabs(b), 1.0));
    }
    fine.set_refinement_shift(shift);
    return fine;
}

}  // namespace equijac
