#include "equijac/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "equijac/errors.hpp"
#include "equijac/specfun.hpp"

namespace equijac {

SymmetricMatrix::SymmetricMatrix(int dim) : dim_(dim) {
    if (dim < 1) throw std::domain_error("SymmetricMatrix: dimension >= 1 required");
    a_.assign(static_cast<size_t>(dim) * dim, 0.0);
}

SymmetricMatrix SymmetricMatrix::from_rows(int dim, std::span<const double> data) {
    if (data.size() != static_cast<size_t>(dim) * dim)
        throw std::invalid_argument("SymmetricMatrix::from_rows: size mismatch");
    SymmetricMatrix m(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
            m.set(i, j, 0.5 * (data[static_cast<size_t>(i) * dim + j] +
                               data[static_cast<size_t>(j) * dim + i]));
    return m;
}

void SymmetricMatrix::set(int i, int j, double v) {
    a_[static_cast<size_t>(i) * dim_ + j] = v;
    a_[static_cast<size_t>(j) * dim_ + i] = v;
}

double SymmetricMatrix::norm_inf() const {
    double best = 0.0;
    for (int i = 0; i < dim_; ++i) {
        double row = 0.0;
        for (int j = 0; j < dim_; ++j) row += std::fabs(at(i, j));
        best = std::max(best, row);
    }
    return best;
}

double SymmetricMatrix::norm_frobenius() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

namespace {

double offdiag_frobenius(const std::vector<double>& a, int n) {
    double s = 0.0;
    for (int p = 0; p < n - 1; ++p)
        for (int q = p + 1; q < n; ++q) {
            const double v = a[static_cast<size_t>(p) * n + q];
            s += 2.0 * v * v;
        }
    return std::sqrt(s);
}

}  // namespace

EigenResult symmetric_eigen(const SymmetricMatrix& m) {
    const int n = m.dim();
    std::vector<double> a(m.data().begin(), m.data().end());
    std::vector<double> v(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = 1.0;

    const double norm_f = m.norm_frobenius();
    const double thresh = 1e-14 * norm_f;
    const int max_sweeps = 30;

    auto idx = [n](int i, int j) { return static_cast<size_t>(i) * n + j; };

    double off = offdiag_frobenius(a, n);
    int sweep = 0;
    while (off > thresh && sweep < max_sweeps) {
        ++sweep;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[idx(p, q)];
                if (std::fabs(apq) <= 1e-300) continue;
                const double app = a[idx(p, p)];
                const double aqq = a[idx(q, q)];
                const double tau = (aqq - app) / (2.0 * apq);
                double t;
                if (std::fabs(tau) > 1e150)
                    t = 0.5 / tau;
                else
                    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(tau * tau + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                a[idx(p, p)] = app - t * apq;
                a[idx(q, q)] = aqq + t * apq;
                a[idx(p, q)] = 0.0;
                a[idx(q, p)] = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a[idx(i, p)];
                    const double aiq = a[idx(i, q)];
                    a[idx(i, p)] = c * aip - s * aiq;
                    a[idx(p, i)] = a[idx(i, p)];
                    a[idx(i, q)] = s * aip + c * aiq;
                    a[idx(q, i)] = a[idx(i, q)];
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v[idx(i, p)];
                    const double viq = v[idx(i, q)];
                    v[idx(i, p)] = c * vip - s * viq;
                    v[idx(i, q)] = s * vip + c * viq;
                }
            }
        }
        off = offdiag_frobenius(a, n);
    }
    if (off > thresh) {
        std::ostringstream msg;
        msg << "symmetric_eigen: no convergence after " << max_sweeps
            << " sweeps; ||M||_F = " << norm_f << ", off-diagonal residual = " << off;
        throw NumericalError(msg.str());
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a[idx(i, i)] < a[idx(j, j)]; });

    EigenResult r;
    r.values.resize(n);
    r.vectors.assign(n, std::vector<double>(n));
    for (int k = 0; k < n; ++k) {
        const int src = order[k];
        r.values[k] = a[idx(src, src)];
        for (int i = 0; i < n; ++i) r.vectors[k][i] = v[idx(i, src)];
    }
    r.sweeps = sweep;
    r.offdiag_residual = off;
    return r;
}

QuadratureRule gauss_jacobi_rule(int q, double alpha, double beta) {
    if (q < 1) throw std::domain_error("gauss_jacobi_rule: requires q >= 1");
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw std::domain_error("gauss_jacobi_rule: requires alpha, beta > -1");
    const double s = alpha + beta;
    SymmetricMatrix j(q);
    j.set(0, 0, (beta - alpha) / (s + 2.0));
    for (int k = 1; k < q; ++k) {
        const double den = (2.0 * k + s) * (2.0 * k + s + 2.0);
        j.set(k, k, (beta * beta - alpha * alpha) / den);
    }
    for (int k = 1; k < q; ++k) {
        double bk;
        if (k == 1)
            bk = 4.0 * (alpha + 1.0) * (beta + 1.0) / ((s + 2.0) * (s + 2.0) * (s + 3.0));
        else {
            const double d = 2.0 * k + s;
            bk = 4.0 * k * (k + alpha) * (k + beta) * (k + s) /
                 (d * d * (d + 1.0) * (d - 1.0));
        }
        j.set(k - 1, k, std::sqrt(bk));
    }
    const EigenResult eig = symmetric_eigen(j);
    const double mu0 = std::exp((s + 1.0) * std::log(2.0) + log_gamma_fn(alpha + 1.0) +
                                log_gamma_fn(beta + 1.0) - log_gamma_fn(s + 2.0));
    QuadratureRule rule;
    rule.nodes = eig.values;
    rule.weights.resize(q);
    for (int k = 0; k < q; ++k) {
        const double v0 = eig.vectors[k][0];
        rule.weights[k] = mu0 * v0 * v0;
    }
    return rule;
}

QuadratureRule gauss_legendre_rule(int q) { return gauss_jacobi_rule(q, 0.0, 0.0); }

QuadratureRule map_to_zero_half_pi(const QuadratureRule& rule) {
    if (rule.domain != QuadDomain::minus_one_one)
        throw std::invalid_argument("map_to_zero_half_pi: rule already mapped");
    QuadratureRule out;
    out.domain = QuadDomain::zero_half_pi;
    const double quarter_pi = std::acos(-1.0) / 4.0;
    out.nodes.reserve(rule.nodes.size());
    out.weights.reserve(rule.weights.size());
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        out.nodes.push_back((rule.nodes[i] + 1.0) * quarter_pi);
        out.weights.push_back(rule.weights[i] * quarter_pi);
    }
    return out;
}

namespace {

const QuadratureRule& cached_legendre(int order) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, gauss_legendre_rule(order)).first;
    return it->second;
}

}  // namespace

double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           double max_panel, int order) {
    if (!(max_panel > 0.0)) throw std::domain_error("integrate_composite: max_panel > 0");
    if (a == b) return 0.0;
    const QuadratureRule& gl = cached_legendre(order);
    const double len = b - a;
    const int panels = std::max(1, static_cast<int>(std::ceil(std::fabs(len) / max_panel)));
    const double h = len / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double acc = 0.0;
        for (size_t i = 0; i < gl.nodes.size(); ++i)
            acc += gl.weights[i] * f(mid + 0.5 * h * gl.nodes[i]);
        total += 0.5 * h * acc;
    }
    return total;
}

}  // namespace equijac
