#include "equijac/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "equijac/linalg.hpp"

namespace equijac {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;

// Panel edges over [0, pi/2]: breakpoints inserted, then each segment split
// to panels of width <= max_w.
std::vector<double> panel_edges(const std::vector<double>& breaks, double max_w) {
    std::vector<double> anchors{0.0};
    for (double b : breaks) anchors.push_back(b);
    anchors.push_back(kHalfPi);
    std::vector<double> edges;
    for (size_t s = 0; s + 1 < anchors.size(); ++s) {
        const double lo = anchors[s], hi = anchors[s + 1];
        const int parts = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_w)));
        for (int p = 0; p < parts; ++p) edges.push_back(lo + (hi - lo) * p / parts);
    }
    edges.push_back(kHalfPi);
    return edges;
}

double integrate_over_panels(const std::function<double(double)>& g,
                             const std::vector<double>& edges, int order = 8) {
    const QuadratureRule gl = gauss_legendre_rule(order);
    double total = 0.0;
    for (size_t p = 0; p + 1 < edges.size(); ++p) {
        const double h = edges[p + 1] - edges[p];
        if (h <= 0.0) continue;
        const double mid = edges[p] + 0.5 * h;
        double acc = 0.0;
        for (size_t i = 0; i < gl.nodes.size(); ++i)
            acc += gl.weights[i] * g(mid + 0.5 * h * gl.nodes[i]);
        total += 0.5 * h * acc;
    }
    return total;
}

double oscillation_panel_width(int n) { return kPi / (8.0 * (n + 1)); }

double panel_width_for(const PiecewiseFunction& f, int n) {
    return std::min(oscillation_panel_width(n), f.resolution_scale());
}

}  // namespace

PiecewiseFunction::PiecewiseFunction(Kind kind, std::vector<double> params,
                                     std::vector<double> breakpoints)
    : kind_(kind), params_(std::move(params)), breakpoints_(std::move(breakpoints)) {}

PiecewiseFunction PiecewiseFunction::indicator(double a, double b) {
    if (!(0.0 < a) || !(a < b) || !(b < kHalfPi))
        throw std::domain_error("indicator: requires 0 < a < b < pi/2");
    return PiecewiseFunction(Kind::indicator, {a, b}, {a, b});
}

PiecewiseFunction PiecewiseFunction::smooth_bump(double center, double width) {
    if (!(width > 0.0)) throw std::domain_error("smooth_bump: requires width > 0");
    return PiecewiseFunction(Kind::smooth_bump, {center, width}, {});
}

PiecewiseFunction PiecewiseFunction::polynomial(std::vector<double> coeffs) {
    return PiecewiseFunction(Kind::polynomial, std::move(coeffs), {});
}

PiecewiseFunction PiecewiseFunction::cosine_mode(int k) {
    if (k < 0) throw std::domain_error("cosine_mode: requires k >= 0");
    return PiecewiseFunction(Kind::cosine_mode, {static_cast<double>(k)}, {});
}

double PiecewiseFunction::operator()(double t) const {
    switch (kind_) {
        case Kind::indicator:
            return (t > params_[0] && t < params_[1]) ? 1.0 : 0.0;
        case Kind::smooth_bump: {
            const double s = (t - params_[0]) / params_[1];
            if (std::fabs(s) >= 1.0) return 0.0;
            return std::exp(-1.0 / (1.0 - s * s));
        }
        case Kind::polynomial: {
            double v = 0.0;
            for (size_t k = params_.size(); k-- > 0;) v = v * t + params_[k];
            return v;
        }
        case Kind::cosine_mode:
            return std::cos(2.0 * params_[0] * t);
    }
    return 0.0;
}

std::string PiecewiseFunction::describe() const {
    std::ostringstream s;
    switch (kind_) {
        case Kind::indicator:
            s << "indicator(" << params_[0] << "," << params_[1] << ")";
            break;
        case Kind::smooth_bump:
            s << "bump(" << params_[0] << "," << params_[1] << ")";
            break;
        case Kind::polynomial: {
            s << "poly(";
            for (size_t k = 0; k < params_.size(); ++k)
                s << (k ? "," : "") << params_[k];
            s << ")";
            break;
        }
        case Kind::cosine_mode:
            s << "cosine(" << static_cast<int>(params_[0]) << ")";
            break;
    }
    return s.str();
}

double PiecewiseFunction::resolution_scale() const {
    switch (kind_) {
        case Kind::smooth_bump:
            return params_[1] / 8.0;
        case Kind::cosine_mode:
            return kPi / (8.0 * std::max(1.0, params_[0]));
        default:
            return 1e9;  // indicators are handled by their breakpoints
    }
}

double PiecewiseFunction::l2_norm() const {
    const auto edges = panel_edges(breakpoints_, 0.01);
    const double sq = integrate_over_panels(
        [this](double t) {
            const double v = (*this)(t);
            return v * v;
        },
        edges);
    return std::sqrt(std::max(sq, 0.0));
}

double coeff(const PiecewiseFunction& f, const EigenDecomposition& decomp, int n) {
    if (n < 0 || n >= decomp.usable_count())
        throw std::out_of_range("coeff: n outside the usable spectrum");
    const auto edges = panel_edges(f.breakpoints(), panel_width_for(f, n));
    return integrate_over_panels(
        [&](double t) { return f(t) * decomp.eigenfunction(n, t); }, edges);
}

double coeff_cosine(const PiecewiseFunction& f, int n) {
    if (n < 0) throw std::domain_error("coeff_cosine: requires n >= 0");
    const auto edges = panel_edges(f.breakpoints(), panel_width_for(f, n));
    return integrate_over_panels([&](double t) { return f(t) * std::cos(2.0 * n * t); },
                                 edges);
}

std::vector<double> coeff_table(const PiecewiseFunction& f,
                                const EigenDecomposition& decomp, int count) {
    if (count < 1) return {};
    if (count > decomp.usable_count())
        throw std::out_of_range("coeff_table: count exceeds the usable spectrum");
    const auto edges = panel_edges(f.breakpoints(), panel_width_for(f, count - 1));
    const QuadratureRule gl = gauss_legendre_rule(8);
    std::vector<double> acc(count, 0.0);
    std::vector<double> u(count);
    for (size_t p = 0; p + 1 < edges.size(); ++p) {
        const double h = edges[p + 1] - edges[p];
        if (h <= 0.0) continue;
        const double mid = edges[p] + 0.5 * h;
        for (size_t i = 0; i < gl.nodes.size(); ++i) {
            const double t = mid + 0.5 * h * gl.nodes[i];
            const double fw = f(t) * 0.5 * h * gl.weights[i];
            if (fw == 0.0) continue;
            decomp.eigenfunction_row(t, u);
            for (int n = 0; n < count; ++n) acc[n] += fw * u[n];
        }
    }
    return acc;
}

std::vector<double> coeff_table_cosine(const PiecewiseFunction& f, int count) {
    if (count < 1) return {};
    const auto edges = panel_edges(f.breakpoints(), panel_width_for(f, count - 1));
    const QuadratureRule gl = gauss_legendre_rule(8);
    std::vector<double> acc(count, 0.0);
    for (size_t p = 0; p + 1 < edges.size(); ++p) {
        const double h = edges[p + 1] - edges[p];
        if (h <= 0.0) continue;
        const double mid = edges[p] + 0.5 * h;
        for (size_t i = 0; i < gl.nodes.size(); ++i) {
            const double t = mid + 0.5 * h * gl.nodes[i];
            const double fw = f(t) * 0.5 * h * gl.weights[i];
            if (fw == 0.0) continue;
            for (int n = 0; n < count; ++n) acc[n] += fw * std::cos(2.0 * n * t);
        }
    }
    return acc;
}

namespace {

std::vector<double> means_on_grid_eigen(const EigenDecomposition& decomp,
                                        std::span<const double> coeffs,
                                        const SummabilitySequence& r, int N,
                                        std::span<const double> x_grid) {
    const int n_cap = std::min<int>(N, static_cast<int>(coeffs.size()) - 1);
    std::vector<double> weighted(n_cap + 1);
    for (int n = 0; n <= n_cap; ++n) weighted[n] = r.r(n, N) * coeffs[n];
    std::vector<double> out(x_grid.size());
    std::vector<double> u(n_cap + 1);
    for (size_t j = 0; j < x_grid.size(); ++j) {
        decomp.eigenfunction_row(x_grid[j], u);
        double s = 0.0;
        for (int n = 0; n <= n_cap; ++n) s += weighted[n] * u[n];
        out[j] = s;
    }
    return out;
}

std::vector<double> means_on_grid_cosine(std::span<const double> coeffs,
                                         const SummabilitySequence& r, int N,
                                         std::span<const double> x_grid) {
    const int n_cap = std::min<int>(N, static_cast<int>(coeffs.size()) - 1);
    std::vector<double> out(x_grid.size());
    for (size_t j = 0; j < x_grid.size(); ++j) {
        const double x = x_grid[j];
        double s = (2.0 / kPi) * r.r(0, N) * coeffs[0];
        for (int n = 1; n <= n_cap; ++n)
            s += (4.0 / kPi) * r.r(n, N) * coeffs[n] * std::cos(2.0 * n * x);
        out[j] = s;
    }
    return out;
}

}  // namespace

std::vector<double> apply_means(const PiecewiseFunction& f,
                                const EigenDecomposition& decomp,
                                const SummabilitySequence& r, int N,
                                std::span<const double> x_grid) {
    if (N >= decomp.usable_count())
        throw std::out_of_range("apply_means: N exceeds the usable spectrum");
    const auto coeffs = coeff_table(f, decomp, N + 1);
    return means_on_grid_eigen(decomp, coeffs, r, N, x_grid);
}

std::vector<double> apply_means_cosine(const PiecewiseFunction& f,
                                       const SummabilitySequence& r, int N,
                                       std::span<const double> x_grid) {
    const auto coeffs = coeff_table_cosine(f, N + 1);
    return means_on_grid_cosine(coeffs, r, N, x_grid);
}

double general_coeff_via_identity(const PiecewiseFunction& f,
                                  const EigenDecomposition& decomp, int n) {
    if (n < 0 || n >= decomp.usable_count())
        throw std::out_of_range("general_coeff_via_identity: n outside usable range");
    const OperatorSpec& spec = decomp.spec();
    const auto edges = panel_edges(f.breakpoints(), panel_width_for(f, n));
    return integrate_over_panels(
        [&](double t) {
            return std::sqrt(spec.weight_a(t)) * f(t) * decomp.eigenfunction(n, t);
        },
        edges);
}

double general_coeff_direct(const PiecewiseFunction& f, const EigenDecomposition& decomp,
                            int n) {
    if (n < 0 || n >= decomp.usable_count())
        throw std::out_of_range("general_coeff_direct: n outside usable range");
    const OperatorSpec& spec = decomp.spec();
    const auto edges = panel_edges(f.breakpoints(), panel_width_for(f, n));
    return integrate_over_panels(
        [&](double t) {
            const double a = spec.weight_a(t);
            const double vn = decomp.eigenfunction(n, t) / std::sqrt(a);
            return f(t) * vn * a;
        },
        edges);
}

std::vector<double> apply_means_general_form(const PiecewiseFunction& f,
                                             const EigenDecomposition& decomp,
                                             const SummabilitySequence& r, int N,
                                             std::span<const double> x_grid) {
    if (N >= decomp.usable_count())
        throw std::out_of_range("apply_means_general_form: N exceeds the usable spectrum");
    for (double x : x_grid)
        if (!(x > 0.0) || !(x < kHalfPi))
            throw std::domain_error("apply_means_general_form: grid must be interior");
    const OperatorSpec& spec = decomp.spec();

    // Coefficients of A^{1/2} f over u_n, shared quadrature grid.
    const auto edges = panel_edges(f.breakpoints(), panel_width_for(f, N));
    const QuadratureRule gl = gauss_legendre_rule(8);
    std::vector<double> coeffs(N + 1, 0.0);
    std::vector<double> u(N + 1);
    for (size_t p = 0; p + 1 < edges.size(); ++p) {
        const double h = edges[p + 1] - edges[p];
        if (h <= 0.0) continue;
        const double mid = edges[p] + 0.5 * h;
        for (size_t i = 0; i < gl.nodes.size(); ++i) {
            const double t = mid + 0.5 * h * gl.nodes[i];
            const double fw =
                std::sqrt(spec.weight_a(t)) * f(t) * 0.5 * h * gl.weights[i];
            if (fw == 0.0) continue;
            decomp.eigenfunction_row(t, u);
            for (int n = 0; n <= N; ++n) coeffs[n] += fw * u[n];
        }
    }

    auto out = means_on_grid_eigen(decomp, coeffs, r, N, x_grid);
    for (size_t j = 0; j < x_grid.size(); ++j)
        out[j] /= std::sqrt(spec.weight_a(x_grid[j]));
    return out;
}

std::vector<double> apply_means_general_form_direct(const PiecewiseFunction& f,
                                                    const EigenDecomposition& decomp,
                                                    const SummabilitySequence& r, int N,
                                                    std::span<const double> x_grid) {
    if (N >= decomp.usable_count())
        throw std::out_of_range(
            "apply_means_general_form_direct: N exceeds the usable spectrum");
    for (double x : x_grid)
        if (!(x > 0.0) || !(x < kHalfPi))
            throw std::domain_error("apply_means_general_form_direct: grid must be interior");
    const OperatorSpec& spec = decomp.spec();

    // F f(n) = int f v_n A dt with v_n = A^{-1/2} u_n, factors as written.
    const auto edges = panel_edges(f.breakpoints(), panel_width_for(f, N));
    const QuadratureRule gl = gauss_legendre_rule(8);
    std::vector<double> coeffs(N + 1, 0.0);
    std::vector<double> u(N + 1);
    for (size_t p = 0; p + 1 < edges.size(); ++p) {
        const double h = edges[p + 1] - edges[p];
        if (h <= 0.0) continue;
        const double mid = edges[p] + 0.5 * h;
        for (size_t i = 0; i < gl.nodes.size(); ++i) {
            const double t = mid + 0.5 * h * gl.nodes[i];
            const double fv = f(t);
            if (fv == 0.0) continue;
            const double a = spec.weight_a(t);
            const double fw = fv * a * 0.5 * h * gl.weights[i];
            decomp.eigenfunction_row(t, u);
            for (int n = 0; n <= N; ++n) coeffs[n] += fw * (u[n] / std::sqrt(a));
        }
    }

    std::vector<double> out(x_grid.size());
    std::vector<double> ux(N + 1);
    for (size_t j = 0; j < x_grid.size(); ++j) {
        const double ax = std::sqrt(spec.weight_a(x_grid[j]));
        decomp.eigenfunction_row(x_grid[j], ux);
        double s = 0.0;
        for (int n = 0; n <= N; ++n) s += r.r(n, N) * coeffs[n] * (ux[n] / ax);
        out[j] = s;
    }
    return out;
}

EquiconvReport equiconv_experiment(const PiecewiseFunction& f,
                                   const EigenDecomposition& decomp,
                                   const SummabilitySequence& r,
                                   std::span<const int> N_list, double gamma_lo,
                                   double gamma_hi, int grid_points) {
    if (!(0.0 < gamma_lo) || !(gamma_lo < gamma_hi) || !(gamma_hi < kHalfPi))
        throw std::domain_error(
            "equiconv_experiment: requires 0 < gamma_lo < gamma_hi < pi/2");
    if (grid_points < 2) throw std::domain_error("equiconv_experiment: grid_points >= 2");
    if (N_list.empty()) throw std::domain_error("equiconv_experiment: empty N list");
    const int n_max = *std::max_element(N_list.begin(), N_list.end());
    if (n_max >= decomp.usable_count())
        throw std::out_of_range("equiconv_experiment: N exceeds the usable spectrum");

    EquiconvReport rep;
    rep.function_desc = f.describe();
    rep.gamma_lo = gamma_lo;
    rep.gamma_hi = gamma_hi;
    rep.grid_points = grid_points;
    rep.N_list.assign(N_list.begin(), N_list.end());
    rep.grid.resize(grid_points);
    for (int j = 0; j < grid_points; ++j)
        rep.grid[j] = gamma_lo + (gamma_hi - gamma_lo) * j / (grid_points - 1);

    // Coefficient caches, shared across all N.
    const auto eigen_coeffs = coeff_table(f, decomp, n_max + 1);
    const auto cosine_coeffs = coeff_table_cosine(f, n_max + 1);

    rep.trace_N = n_max;
    for (int N : N_list) {
        const auto tn = means_on_grid_eigen(decomp, eigen_coeffs, r, N, rep.grid);
        const auto dn = means_on_grid_cosine(cosine_coeffs, r, N, rep.grid);
        double e = 0.0;
        for (int j = 0; j < grid_points; ++j)
            e = std::max(e, std::fabs(tn[j] - dn[j]));
        rep.e_N.push_back(e);
        if (N == rep.trace_N) {
            rep.trace_T = tn;
            rep.trace_D = dn;
        }
    }
    return rep;
}

bool equiconv_decay(const EquiconvReport& report, int early_lo, int early_hi, int late_lo,
                    int late_hi, double factor) {
    double early = 0.0, late = 0.0;
    bool any_early = false, any_late = false;
    for (size_t i = 0; i < report.N_list.size(); ++i) {
        const int N = report.N_list[i];
        if (N >= early_lo && N <= early_hi) {
            early = std::max(early, report.e_N[i]);
            any_early = true;
        }
        if (N >= late_lo && N <= late_hi) {
            late = std::max(late, report.e_N[i]);
            any_late = true;
        }
    }
    if (!any_early || !any_late)
        throw std::domain_error("equiconv_decay: N windows not covered by the report");
    return late <= factor * std::max(early, 1e-300);
}

DecayFit coefficient_decay_check(const PiecewiseFunction& g,
                                 const EigenDecomposition& decomp, int n_lo, int n_hi) {
    if (n_lo < 1 || n_hi <= n_lo)
        throw std::domain_error("coefficient_decay_check: requires 1 <= n_lo < n_hi");
    const auto coeffs = coeff_table(g, decomp, n_hi + 1);
    constexpr double kNoiseFloor = 1e-11;
    std::vector<double> xs, ys;
    int used_lo = -1, used_hi = -1;
    for (int n = n_lo; n <= n_hi; ++n) {
        const double c = std::fabs(coeffs[n]);
        if (c < kNoiseFloor) continue;
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(c));
        if (used_lo < 0) used_lo = n;
        used_hi = n;
    }
    DecayFit fit;
    fit.used_lo = used_lo;
    fit.used_hi = used_hi;
    if (xs.size() < 4) {
        fit.degenerate = true;
        return fit;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return fit;
}

}  // namespace equijac
