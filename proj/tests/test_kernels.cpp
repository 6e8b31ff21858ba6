#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "equijac/kernels.hpp"
#include "equijac/linalg.hpp"
#include "oracles.hpp"

using namespace equijac;
using equijac::testing::brute_trig_sum;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;
}  // namespace

TEST_CASE("summability sequences satisfy the bounded-variation axioms") {
    for (double theta : {0.0, 0.5, 1.0, 2.0}) {
        const auto seq = theta == 0.0 ? SummabilitySequence::rectangular()
                                      : SummabilitySequence::cesaro(theta);
        for (int N : {10, 100, 500}) {
            double var = 0.0;
            for (int n = 0; n <= 2 * N; ++n) {
                const double r = seq.r(n, N);
                CHECK(std::fabs(r) <= 1.0 + 1e-12);
                var += std::fabs(r - seq.r(n + 1, N));
            }
            CHECK(var <= 1.0 + 1e-9);  // monotone families: exactly the first weight
        }
        // pointwise limit R = 1 for every fixed n
        for (int n : {0, 3, 17}) CHECK(seq.r(n, 100000) == doctest::Approx(1.0).epsilon(1e-3));
    }
    CHECK(cesaro_weight(1.0, 2, 4) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(cesaro_weight(2.5, 3, 3) > 0.0);
    CHECK(cesaro_weight(0.7, 9, 4) == 0.0);
    CHECK_THROWS_AS(cesaro_weight(-0.5, 1, 2), std::domain_error);
}

TEST_CASE("gamma-ratio and product routes of the cesaro weight agree") {
    // theta = 3 integer goes through the product; 3.0000001 through lgamma
    for (int N : {6, 40, 300}) {
        for (int n = 0; n <= N; ++n) {
            const double a = cesaro_weight(3.0, n, N);
            const double b = cesaro_weight(3.0 + 1e-9, n, N);
            CHECK(a == doctest::Approx(b).epsilon(1e-6));
        }
    }
}

TEST_CASE("closed trig forms equal brute-force summation") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> mn(0, 200);
    std::uniform_real_distribution<double> ts(-8.0, 8.0);
    const TrigKind kinds[] = {TrigKind::C0,  TrigKind::S0,  TrigKind::C1,
                              TrigKind::S1,  TrigKind::C0m, TrigKind::S0m,
                              TrigKind::C1m, TrigKind::S1m};
    double worst = 0.0;
    for (int i = 0; i < 4000; ++i) {
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
    CHECK(worst <= 1e-11);
}

TEST_CASE("trig sums near removable singularities") {
    CHECK(trig_sum(TrigKind::C0, 1, 7, 0.0) == 7.0);
    CHECK(trig_sum(TrigKind::S0, 0, 9, kPi) == 0.0);
    CHECK(trig_sum(TrigKind::C0, 2, 11, kPi) == 10.0);
    // approach a multiple of pi
    for (double eps : {1e-6, 1e-9}) {
        const double direct = brute_trig_sum(TrigKind::C0, 1, 40, kPi + eps);
        CHECK(trig_sum(TrigKind::C0, 1, 40, kPi + eps) ==
              doctest::Approx(direct).epsilon(1e-12));
    }
    CHECK_THROWS_AS(trig_sum(TrigKind::C1, 0, 5, 0.3), std::domain_error);
    CHECK_THROWS_AS(trig_sum(TrigKind::S0, 3, 2, 0.3), std::domain_error);
}

TEST_CASE("lemma bounds hold on dense random sampling") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> mn(1, 300);
    std::uniform_real_distribution<double> ts(-kPi, kPi);
    double s1_ceiling = 0.0;
    for (int i = 0; i < 10000; ++i) {
        int M = mn(rng), N = mn(rng);
        if (M > N) std::swap(M, N);
        const double t = ts(rng);
        s1_ceiling = std::max(s1_ceiling, std::fabs(trig_sum(TrigKind::S1, M, N, t)));
        const double c1 = std::fabs(trig_sum(TrigKind::C1, M, N, t));
        const double bound =
            3.0 + std::log(1.0 + std::min(1.0 / std::fabs(std::sin(t)),
                                          static_cast<double>(N - M)) /
                                     M);
        CHECK(c1 <= bound);
        if (std::fabs(std::cos(t)) > 1e-3) {
            const double lim = 1.0 / std::fabs(std::cos(t));
            CHECK(std::fabs(trig_sum(TrigKind::C0m, M, N, t)) <= lim);
            CHECK(std::fabs(trig_sum(TrigKind::S0m, M, N, t)) <= lim);
        }
    }
    CHECK(s1_ceiling <= 4.0);
}

TEST_CASE("dirichlet kernel basics") {
    const auto rect = SummabilitySequence::rectangular();
    CHECK(dirichlet_kernel(rect, 0, 0.7, 0.2, 0) == doctest::Approx(2.0 / kPi));
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> xs(1e-4, kHalfPi - 1e-4);
    std::uniform_int_distribution<int> Ns(0, 200);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const int N = Ns(rng);
        const double x = xs(rng), y = xs(rng);
        worst = std::max(worst, std::fabs(dirichlet_kernel(rect, N, x, y, N) -
                                          dirichlet_kernel_closed_rect(N, x, y)));
    }
    CHECK(worst <= 1e-11);
    // unit mass against the constant function
    const double mass = integrate_composite(
        [&](double y) { return dirichlet_kernel(rect, 9, 1.1, y, 9); }, 0.0, kHalfPi,
        0.02);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    // cesaro mass equals r(0,N) = 1 as well
    const auto ces = SummabilitySequence::cesaro(1.0);
    const double mass_c = integrate_composite(
        [&](double y) { return dirichlet_kernel(ces, 9, 1.1, y, 9); }, 0.0, kHalfPi,
        0.02);
    CHECK(mass_c == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("eigen kernel bounds checking") {
    const OperatorSpec spec(JacobiParams(0.5, 0.5), PerturbationB{});
    const auto d = solve(spec, 32, 64);
    const auto rect = SummabilitySequence::rectangular();
    CHECK_THROWS_AS(eigen_kernel(d, rect, 10, 0.3, 0.4, 24), std::out_of_range);
    CHECK(eigen_kernel(d, rect, 10, 0.3, 0.4, 10) ==
          doctest::Approx(eigen_kernel(d, rect, 10, 0.4, 0.3, 10)).epsilon(1e-13));
}

TEST_CASE("kernel difference scan with cesaro weights stays bounded") {
    const OperatorSpec spec(JacobiParams(0.5, 0.5), PerturbationB{});
    const auto d = solve(spec, 96, 192);
    const auto ces = SummabilitySequence::cesaro(1.0);
    std::vector<double> y_grid;
    for (int j = 1; j <= 120; ++j) y_grid.push_back(kHalfPi * j / 121.0);
    std::vector<int> Ns;
    for (int N = 4; N <= 68; N += 4) Ns.push_back(N);
    const auto rows = kernel_diff_scan(d, ces, kPi / 3.0, Ns, y_grid);
    CHECK(no_growth_trend(rows, 1.2));
    CHECK(rows.size() == Ns.size());
    for (const auto& r : rows) {
        CHECK(std::isfinite(r.max_abs_diff));
        CHECK(r.argmax_y > 0.0);
        CHECK(r.argmax_y < kHalfPi);
    }
}
