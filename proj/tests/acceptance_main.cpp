// Acceptance suite: one check per release criterion, each printed as a
// PASS/FAIL line. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "equijac/asymptotics.hpp"
#include "equijac/expansion.hpp"
#include "equijac/kernels.hpp"
#include "equijac/selftest.hpp"
#include "oracles.hpp"

using namespace equijac;
using equijac::testing::brute_trig_sum;
using equijac::testing::sine_eigenfunction;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

struct Lazy {
    std::unique_ptr<EigenDecomposition> sine_128, const_160, pert_160, pert_272;

    const EigenDecomposition& sine128() {
        if (!sine_128)
            sine_128 = std::make_unique<EigenDecomposition>(
                solve(OperatorSpec(JacobiParams(0.5, 0.5), PerturbationB{}), 128, 256));
        return *sine_128;
    }
    const EigenDecomposition& const160() {
        if (!const_160)
            const_160 = std::make_unique<EigenDecomposition>(
                solve(OperatorSpec(JacobiParams(0.6, 0.2), PerturbationB{}), 160, 320));
        return *const_160;
    }
    const EigenDecomposition& pert160() {
        if (!pert_160)
            pert_160 = std::make_unique<EigenDecomposition>(solve(
                OperatorSpec(JacobiParams(0.6, 0.2), PerturbationB({0.2})), 160, 320));
        return *pert_160;
    }
    const EigenDecomposition& pert272() {
        if (!pert_272)
            pert_272 = std::make_unique<EigenDecomposition>(solve(
                OperatorSpec(JacobiParams(0.6, 0.2), PerturbationB({0.2})), 272, 544));
        return *pert_272;
    }
};

Lazy lazy;

std::vector<double> quarter_grid(int points) {
    std::vector<double> g(points);
    for (int j = 0; j < points; ++j) g[j] = (kPi / 4.0) * (j + 1.0) / points;
    return g;
}

bool c01_exact_spectrum(std::string& msg) {
    const double t0 = now_seconds();
    const auto& d = lazy.sine128();
    double worst_mu = 0.0;
    for (int n = 0; n <= 20; ++n) {
        const double expect = 4.0 * n * (n + 2.0);
        worst_mu = std::max(worst_mu, std::fabs(d.eigenvalue(n) - expect) /
                                          std::max(expect, 1.0));
    }
    double worst_u = 0.0;
    for (int n = 0; n <= 20; ++n)
        for (int j = 1; j <= 200; ++j) {
            const double t = kHalfPi * j / 201.0;
            worst_u = std::max(
                worst_u, std::fabs(d.eigenfunction(n, t) - sine_eigenfunction(n, t)));
        }
    const double elapsed = now_seconds() - t0;
    std::ostringstream s;
    s << "max rel mu err " << worst_mu << ", sup u err " << worst_u << ", "
      << elapsed << " s";
    msg = s.str();
    return worst_mu <= 1e-8 && worst_u <= 1e-6 && elapsed <= 10.0;
}

bool c02_general_constant_spectrum(std::string& msg) {
    std::mt19937_64 rng(20260811);
    std::uniform_real_distribution<double> bdist(-0.4, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const double beta = bdist(rng);
        std::uniform_real_distribution<double> adist(beta, 2.0);
        const double alpha = adist(rng);
        const OperatorSpec spec(JacobiParams(alpha, beta), PerturbationB{});
        const auto d = solve(spec, 128, 256);
        for (int n = 0; n <= 20; ++n) {
            const double expect = 4.0 * n * (n + alpha + beta + 1.0);
            worst = std::max(worst, std::fabs(d.eigenvalue(n) - expect) /
                                        std::max(std::fabs(expect), 1.0));
        }
    }
    std::ostringstream s;
    s << "max rel err " << worst;
    msg = s.str();
    return worst <= 1e-7;
}

bool c03_eigenvalue_bracket(std::string& msg) {
    const auto& d = lazy.pert160();
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= 8192; ++i) {
        const double v = -d.spec().chi(kHalfPi * i / 8192.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double worst_slack = 1e300;
    for (int n = 0; n <= 40; ++n) {
        const double mu = d.eigenvalue(n);
        const double mu_j = d.basis().mu_unperturbed(n);
        worst_slack = std::min({worst_slack, mu - (mu_j + lo), (mu_j + hi) - mu});
    }
    msg = "min bracket slack " + std::to_string(worst_slack);
    return worst_slack >= -1e-8;
}

bool report_bounded(const ResidualReport& r, const std::string& tag, std::string& msg,
                    bool& ok) {
    const bool pass = r.bounded(2.0);
    std::ostringstream s;
    s << tag << " max " << r.max_scaled << (pass ? " ok; " : " UNBOUNDED; ");
    msg += s.str();
    ok = ok && pass;
    return pass;
}

bool c04_sigma_asymptotics(std::string& msg) {
    bool ok = true;
    report_bounded(residual_scan(lazy.const160(), LemmaKind::sigma2, 10, 60, {}),
                   "B=1", msg, ok);
    report_bounded(residual_scan(lazy.pert160(), LemmaKind::sigma2, 10, 60, {}),
                   "perturbed", msg, ok);
    return ok;
}

bool c05_eigenfunction_asymptotics(std::string& msg) {
    bool ok = true;
    const auto grid = quarter_grid(48);
    for (const EigenDecomposition* d : {&lazy.const160(), &lazy.pert160()}) {
        const char* tag = d == &lazy.const160() ? "B=1 " : "pert ";
        report_bounded(residual_scan(*d, LemmaKind::u_cosine_left, 16, 60, grid),
                       std::string(tag) + "cosine", msg, ok);
        report_bounded(residual_scan(*d, LemmaKind::u_bessel_left, 16, 60, grid),
                       std::string(tag) + "bessel", msg, ok);
    }
    return ok;
}

bool c06_endpoint_constants(std::string& msg) {
    bool ok = true;
    report_bounded(residual_scan(lazy.pert160(), LemmaKind::cn, 10, 60, {}), "c_n", msg,
                   ok);
    report_bounded(residual_scan(lazy.pert160(), LemmaKind::dn, 10, 60, {}), "d_n", msg,
                   ok);
    return ok;
}

bool c07_x_identity(std::string& msg) {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> bdist(-0.45, 1.5);
    std::uniform_real_distribution<double> coeff(-0.25, 0.25);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const double beta = bdist(rng);
        std::uniform_real_distribution<double> adist(beta, 1.5);
        const double alpha = adist(rng);
        const OperatorSpec spec(JacobiParams(alpha, beta),
                                PerturbationB({coeff(rng), coeff(rng)}));
        const double lhs = spec.x_integral(Side::left, kPi / 4.0) +
                           spec.x_integral(Side::right, kPi / 4.0);
        const double rhs = (alpha * alpha + beta * beta - 0.5) * (kHalfPi - 4.0 / kPi) +
                           spec.chi_integral();
        worst = std::max(worst, std::fabs(lhs - rhs));
    }
    const OperatorSpec sine(JacobiParams(0.5, 0.5), PerturbationB{});
    const double exact = sine.x_integral(Side::left, kPi / 4.0) +
                         sine.x_integral(Side::right, kPi / 4.0);
    worst = std::max(worst, std::fabs(exact - 2.0 * kPi));
    std::ostringstream s;
    s << "max identity error " << worst;
    msg = s.str();
    return worst <= 1e-9;
}

bool c08_trig_closed_forms(std::string& msg) {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> mn(0, 200);
    std::uniform_real_distribution<double> ts(-10.0, 10.0);
    const TrigKind kinds[] = {TrigKind::C0,  TrigKind::S0,  TrigKind::C1,
                              TrigKind::S1,  TrigKind::C0m, TrigKind::S0m,
                              TrigKind::C1m, TrigKind::S1m};
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const TrigKind k = kinds[i % 8];
        int M = mn(rng), N = mn(rng);
        if (M > N) std::swap(M, N);
        const bool weighted = k == TrigKind::C1 || k == TrigKind::S1 ||
                              k == TrigKind::C1m || k == TrigKind::S1m;
        if (weighted && M == 0) M = 1;
        const double t = ts(rng);
        worst = std::max(worst,
                         std::fabs(trig_sum(k, M, N, t) - brute_trig_sum(k, M, N, t)));
    }
    const auto rect = SummabilitySequence::rectangular();
    std::uniform_real_distribution<double> xy(1e-4, kHalfPi - 1e-4);
    double worst_d = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const int N = mn(rng);
        const double x = xy(rng), y = xy(rng);
        worst_d = std::max(worst_d, std::fabs(dirichlet_kernel(rect, N, x, y, N) -
                                              dirichlet_kernel_closed_rect(N, x, y)));
    }
    std::ostringstream s;
    s << "trig max err " << worst << ", kernel max err " << worst_d;
    msg = s.str();
    return worst <= 1e-11 && worst_d <= 1e-11;
}

bool c09_lemma_bounds(std::string& msg) {
    std::mt19937_64 rng(909);
    std::uniform_int_distribution<int> mn(1, 300);
    std::uniform_real_distribution<double> ts(-kPi, kPi);
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
        int M = mn(rng), N = mn(rng);
        if (M > N) std::swap(M, N);
        const double t = ts(rng);
        const double c1 = std::fabs(trig_sum(TrigKind::C1, M, N, t));
        const double bound =
            3.0 + std::log(1.0 + std::min(1.0 / std::fabs(std::sin(t)),
                                          static_cast<double>(N - M)) /
                                     M);
        if (c1 > bound) ++violations;
        if (std::fabs(std::cos(t)) > 1e-3) {
            const double lim = 1.0 / std::fabs(std::cos(t));
            if (std::fabs(trig_sum(TrigKind::C0m, M, N, t)) > lim) ++violations;
            if (std::fabs(trig_sum(TrigKind::S0m, M, N, t)) > lim) ++violations;
        }
    }
    msg = std::to_string(violations) + " violations";
    return violations == 0;
}

bool c10_kernel_difference(std::string& msg) {
    const double t0 = now_seconds();
    const auto& d = lazy.pert272();
    const auto rect = SummabilitySequence::rectangular();
    std::vector<int> Ns;
    for (int N = 25; N <= 200; N += 5) Ns.push_back(N);
    std::vector<double> y_grid(800);
    for (int j = 0; j < 800; ++j) y_grid[j] = kHalfPi * (j + 1.0) / 801.0;
    bool ok = true;
    std::vector<double> ratios;
    for (double x : {kPi / 8.0, kPi / 4.0, 3.0 * kPi / 8.0}) {
        const auto rows = kernel_diff_scan(d, rect, x, Ns, y_grid);
        const bool trend = no_growth_trend(rows, 1.2);
        double peak = 0.0;
        for (const auto& r : rows) peak = std::max(peak, r.max_abs_diff);
        ratios.push_back(peak / (1.0 / x + 1.0 / (kHalfPi - x)));
        ok = ok && trend;
        std::ostringstream s;
        s << "x=" << x << (trend ? " trend ok" : " GROWS") << " peak " << peak << "; ";
        msg += s.str();
    }
    double rmin = 1e300, rmax = 0.0;
    for (double q : ratios) {
        rmin = std::min(rmin, q);
        rmax = std::max(rmax, q);
    }
    const bool single_c = rmax <= 3.0 * rmin;
    ok = ok && single_c;
    const double elapsed = now_seconds() - t0;
    std::ostringstream s;
    s << "C=" << rmax << (single_c ? " fits sweep" : " NO single constant") << ", "
      << elapsed << " s";
    msg += s.str();
    return ok && elapsed <= 120.0;
}

bool c11_equiconvergence(std::string& msg) {
    const auto& d = lazy.pert272();
    std::vector<int> Ns;
    for (int N = 10; N <= 200; N += 10) Ns.push_back(N);
    bool ok = true;
    for (const auto& f : {PiecewiseFunction::indicator(0.3, 0.8),
                          PiecewiseFunction::smooth_bump(0.7, 0.3)}) {
        for (const auto& w :
             {SummabilitySequence::rectangular(), SummabilitySequence::cesaro(1.0)}) {
            const auto rep = equiconv_experiment(f, d, w, Ns, 0.2, 1.3, 240);
            const bool decays = equiconv_decay(rep, 10, 30, 150, 200, 0.5);
            ok = ok && decays;
            std::ostringstream s;
            s << rep.function_desc
              << (w.kind() == SummabilitySequence::Kind::rectangular ? "/rect"
                                                                     : "/cesaro1")
              << (decays ? " ok; " : " NO DECAY; ");
            msg += s.str();
        }
    }
    return ok;
}

bool c12_general_form_identity(std::string& msg) {
    const auto& d = lazy.pert160();
    const auto rect = SummabilitySequence::rectangular();
    const std::vector<double> grid{0.35, 0.7, 1.05, 1.3};
    double worst = 0.0;
    for (const auto& f : {PiecewiseFunction::polynomial({1.0}),
                          PiecewiseFunction::smooth_bump(0.7, 0.4),
                          PiecewiseFunction::indicator(0.3, 0.8)}) {
        const auto a = apply_means_general_form(f, d, rect, 24, grid);
        const auto b = apply_means_general_form_direct(f, d, rect, 24, grid);
        for (size_t j = 0; j < grid.size(); ++j)
            worst = std::max(worst, std::fabs(a[j] - b[j]));
    }
    msg = "max route difference " + std::to_string(worst);
    return worst <= 1e-10;
}

bool c13_smooth_coefficient_decay(std::string& msg) {
    const auto fit = coefficient_decay_check(PiecewiseFunction::smooth_bump(0.8, 0.3),
                                             lazy.sine128(), 8, 40);
    std::ostringstream s;
    s << "slope " << fit.slope << " over n in [" << fit.used_lo << ", " << fit.used_hi
      << "]";
    msg = s.str();
    return !fit.degenerate && fit.slope <= -2.0;
}

bool c14_selftest(std::string& msg) {
    const double t0 = now_seconds();
    std::ostringstream sink;
    const auto summary = run_selftest(sink);
    const double elapsed = now_seconds() - t0;
    std::ostringstream s;
    s << summary.passed << " passed, " << summary.failed << " failed, " << elapsed
      << " s";
    msg = s.str();
    for (const auto& f : summary.failures) msg += "; " + f;
    return summary.failed == 0 && elapsed <= 300.0;
}

}  // namespace

int main() {
    struct Criterion {
        const char* title;
        std::function<bool(std::string&)> fn;
    };
    const std::vector<Criterion> criteria = {
        {"exact spectrum oracle (half-integer, constant B)", c01_exact_spectrum},
        {"general-parameter constant-B spectrum", c02_general_constant_spectrum},
        {"eigenvalue bracket for perturbed B", c03_eigenvalue_bracket},
        {"second-order eigenvalue asymptotics", c04_sigma_asymptotics},
        {"eigenfunction asymptotics (cosine and bessel forms)",
         c05_eigenfunction_asymptotics},
        {"endpoint normalization constants", c06_endpoint_constants},
        {"X0 + X1 integral identity", c07_x_identity},
        {"trig-sum and kernel closed forms vs brute force", c08_trig_closed_forms},
        {"trigonometric lemma bounds", c09_lemma_bounds},
        {"kernel-difference boundedness", c10_kernel_difference},
        {"equiconvergence decay", c11_equiconvergence},
        {"general-form operator identity", c12_general_form_identity},
        {"smooth-coefficient decay exponent", c13_smooth_coefficient_decay},
        {"full example selftest", c14_selftest},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        std::string msg;
        bool ok = false;
        try {
            ok = criteria[i].fn(msg);
        } catch (const std::exception& e) {
            msg += std::string("exception: ") + e.what();
        }
        if (!ok) ++failures;
        std::printf("C%02zu %s — %s", i + 1, ok ? "PASS" : "FAIL", criteria[i].title);
        if (!msg.empty()) std::printf(" (%s)", msg.c_str());
        std::printf("\n");
        std::fflush(stdout);
    }
    if (failures) std::printf("%d criteria FAILED\n", failures);
    else std::printf("all %zu criteria passed\n", criteria.size());
    return failures == 0 ? 0 : 1;
}
