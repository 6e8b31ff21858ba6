#include "equijac/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "equijac/specfun.hpp"

namespace equijac {

namespace {

using ld = long double;
constexpr ld kPiL = std::numbers::pi_v<ld>;

// Closed forms, evaluated in extended precision: the products of an integer
// multiplier <= ~2^11 with a double argument stay exact in the 64-bit
// mantissa, which keeps the cancellation near sin t = 0 under control.
ld c0_closed(int m, int n, ld t) {
    const ld s = sinl(t);
    if (fabsl(s) < 1e-12L) return static_cast<ld>(n - m + 1);
    return cosl((n + m) * t) * sinl((n - m + 1) * t) / s;
}

ld s0_closed(int m, int n, ld t) {
    const ld s = sinl(t);
    if (fabsl(s) < 1e-12L) return 0.0L;
    return sinl((n + m) * t) * sinl((n - m + 1) * t) / s;
}

ld c1_direct(int m, int n, ld t) {
    ld acc = 0.0L;
    for (int k = m; k <= n; ++k) acc += cosl((2 * k) * t) / k;
    return acc;
}

ld s1_direct(int m, int n, ld t) {
    ld acc = 0.0L;
    for (int k = m; k <= n; ++k) acc += sinl((2 * k) * t) / k;
    return acc;
}

}  // namespace

double cesaro_weight(double theta, int n, int N) {
    if (!(theta >= 0.0)) throw std::domain_error("cesaro_weight: requires theta >= 0");
    if (n < 0 || N < 0) throw std::domain_error("cesaro_weight: requires n, N >= 0");
    if (n > N) return 0.0;
    if (n == 0 || theta == 0.0) return n > N ? 0.0 : 1.0;
    const bool small_integer = theta == std::floor(theta) && theta <= 10.0;
    if (small_integer) {
        // A^theta_{N-n}/A^theta_N = prod_{j=N-n+1}^{N} j/(j+theta)
        double r = 1.0;
        for (int j = N - n + 1; j <= N; ++j) r *= j / (j + theta);
        return r;
    }
    return std::exp(log_gamma_fn(N - n + theta + 1.0) + log_gamma_fn(N + 1.0) -
                    log_gamma_fn(N - n + 1.0) - log_gamma_fn(N + theta + 1.0));
}

SummabilitySequence SummabilitySequence::rectangular() {
    return SummabilitySequence(Kind::rectangular, 0.0);
}

SummabilitySequence SummabilitySequence::cesaro(double theta) {
    if (!(theta >= 0.0))
        throw std::domain_error("SummabilitySequence::cesaro: requires theta >= 0");
    return SummabilitySequence(Kind::cesaro, theta);
}

double SummabilitySequence::r(int n, int N) const {
    if (kind_ == Kind::rectangular) return n <= N ? 1.0 : 0.0;
    return cesaro_weight(theta_, n, N);
}

double trig_sum(TrigKind kind, int M, int N, double t) {
    if (M < 0 || N < M) throw std::domain_error("trig_sum: requires 0 <= M <= N");
    const bool weighted = kind == TrigKind::C1 || kind == TrigKind::S1 ||
                          kind == TrigKind::C1m || kind == TrigKind::S1m;
    if (weighted && M < 1)
        throw std::domain_error("trig_sum: the 1/n-weighted sums require M >= 1");
    const ld tl = t;
    const ld half = kPiL / 2.0L;
    switch (kind) {
        case TrigKind::C0: return static_cast<double>(c0_closed(M, N, tl));
        case TrigKind::S0: return static_cast<double>(s0_closed(M, N, tl));
        case TrigKind::C1: return static_cast<double>(c1_direct(M, N, tl));
        case TrigKind::S1: return static_cast<double>(s1_direct(M, N, tl));
        case TrigKind::C0m:
            return static_cast<double>(
                0.5L * (c0_closed(M, N, tl + half) + c0_closed(M, N, half - tl)));
        case TrigKind::S0m:
            return static_cast<double>(
                0.5L * (s0_closed(M, N, tl + half) - s0_closed(M, N, half - tl)));
        case TrigKind::C1m:
            return static_cast<double>(
                0.5L * (c1_direct(M, N, tl + half) + c1_direct(M, N, tl - half)));
        case TrigKind::S1m:
            return static_cast<double>(
                0.5L * (s1_direct(M, N, tl + half) + s1_direct(M, N, tl - half)));
    }
    throw std::logic_error("trig_sum: unknown kind");
}

double dirichlet_kernel(const SummabilitySequence& r, int N, double x, double y,
                        int n_cap) {
    if (N < 0 || n_cap < 0) throw std::domain_error("dirichlet_kernel: N, n_cap >= 0");
    const ld xl = x, yl = y;
    ld acc = (2.0L / kPiL) * static_cast<ld>(r.r(0, N));
    for (int n = 1; n <= n_cap; ++n) {
        const double w = r.r(n, N);
        if (w == 0.0) continue;
        acc += (4.0L / kPiL) * static_cast<ld>(w) * cosl((2 * n) * xl) * cosl((2 * n) * yl);
    }
    return static_cast<double>(acc);
}

double dirichlet_kernel_closed_rect(int N, double x, double y) {
    if (N < 0) throw std::domain_error("dirichlet_kernel_closed_rect: N >= 0");
    const ld d = static_cast<ld>(x) - static_cast<ld>(y);
    const ld s = static_cast<ld>(x) + static_cast<ld>(y);
    ld acc = (2.0L / kPiL) * c0_closed(0, N, d);
    if (N >= 1) acc += (2.0L / kPiL) * c0_closed(1, N, s);
    return static_cast<double>(acc);
}

double eigen_kernel(const EigenDecomposition& decomp, const SummabilitySequence& r,
                    int N, double x, double y, int n_cap) {
    if (n_cap >= decomp.usable_count())
        throw std::out_of_range("eigen_kernel: n_cap exceeds the usable spectrum");
    std::vector<double> ux(n_cap + 1), uy(n_cap + 1);
    decomp.eigenfunction_row(x, ux);
    decomp.eigenfunction_row(y, uy);
    ld acc = 0.0L;
    for (int n = 0; n <= n_cap; ++n)
        acc += static_cast<ld>(r.r(n, N)) * static_cast<ld>(ux[n]) * static_cast<ld>(uy[n]);
    return static_cast<double>(acc);
}

std::vector<KernelDiffRow> kernel_diff_scan(const EigenDecomposition& decomp,
                                            const SummabilitySequence& r, double x,
                                            std::span<const int> N_list,
                                            std::span<const double> y_grid) {
    if (N_list.empty()) return {};
    const int n_cap = *std::max_element(N_list.begin(), N_list.end());
    if (n_cap >= decomp.usable_count())
        throw std::out_of_range("kernel_diff_scan: N exceeds the usable spectrum");

    const size_t ny = y_grid.size();
    std::vector<double> ux(n_cap + 1);
    decomp.eigenfunction_row(x, ux);

    // p[n][j] = u_n(x) u_n(y_j) - w_n cos(2nx) cos(2n y_j), the summand of
    // T_N - D_N before the summability weights.
    std::vector<double> p(static_cast<size_t>(n_cap + 1) * ny);
    std::vector<double> uy(n_cap + 1);
    const ld xl = x;
    for (size_t j = 0; j < ny; ++j) {
        const double y = y_grid[j];
        decomp.eigenfunction_row(y, uy);
        const ld yl = y;
        for (int n = 0; n <= n_cap; ++n) {
            const ld w = (n == 0 ? 2.0L : 4.0L) / kPiL;
            const ld cosTerm = w * cosl((2 * n) * xl) * cosl((2 * n) * yl);
            p[static_cast<size_t>(n) * ny + j] =
                static_cast<double>(static_cast<ld>(ux[n]) * static_cast<ld>(uy[n]) -
                                    cosTerm);
        }
    }

    std::vector<KernelDiffRow> rows;
    rows.reserve(N_list.size());
    for (int N : N_list) {
        double best = -1.0, best_y = y_grid.empty() ? 0.0 : y_grid[0];
        for (size_t j = 0; j < ny; ++j) {
            ld acc = 0.0L;
            for (int n = 0; n <= N; ++n) {
                const double w = r.r(n, N);
                if (w == 0.0) continue;
                acc += static_cast<ld>(w) * p[static_cast<size_t>(n) * ny + j];
            }
            const double v = std::fabs(static_cast<double>(acc));
            if (v > best) {
                best = v;
                best_y = y_grid[j];
            }
        }
        rows.push_back({N, best, best_y});
    }
    return rows;
}

bool no_growth_trend(const std::vector<KernelDiffRow>& rows, double slack) {
    if (rows.size() < 4) return true;
    const size_t quart = rows.size() / 4;
    double first = 0.0, last = 0.0;
    for (size_t i = 0; i < quart; ++i) first = std::max(first, rows[i].max_abs_diff);
    for (size_t i = rows.size() - quart; i < rows.size(); ++i)
        last = std::max(last, rows[i].max_abs_diff);
    return last <= slack * std::max(first, 1e-300);
}

}  // namespace equijac
