#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "equijac/eigensolver.hpp"
#include "equijac/linalg.hpp"
#include "oracles.hpp"

using namespace equijac;

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;

const OperatorSpec& smooth_spec() {
    static const OperatorSpec s(JacobiParams(0.6, 0.2), PerturbationB({0.2}));
    return s;
}

const EigenDecomposition& smooth_decomp() {
    static const EigenDecomposition d = solve(smooth_spec(), 96, 192);
    return d;
}
}  // namespace

TEST_CASE("solve validates its inputs") {
    CHECK_THROWS_AS(solve(smooth_spec(), 4, 64), std::invalid_argument);
    CHECK_THROWS_AS(solve(smooth_spec(), 16, 16), std::invalid_argument);
}

TEST_CASE("basis-size robustness for low modes") {
    const auto d1 = solve(smooth_spec(), 128, 256);
    const auto d2 = solve(smooth_spec(), 192, 384);
    for (int n = 0; n <= 32; ++n) {
        const double a = d1.eigenvalue(n), b = d2.eigenvalue(n);
        CHECK(std::fabs(a - b) <= 1e-8 * std::max(std::fabs(b), 1.0));
    }
    // the refined solve records the movement as convergence metadata
    const auto dr = solve_refined(smooth_spec(), 64, 128);
    CHECK(dr.info().basis_size == 96);
    CHECK(std::isfinite(dr.info().refinement_shift));
    CHECK(dr.info().refinement_shift < 1e-6);
    CHECK(std::isnan(d1.info().refinement_shift));
}

TEST_CASE("first-order eigenvalue growth: sigma_n = 2n+1+a+b + O(1/n)") {
    const auto& d = smooth_decomp();
    // n |sigma_n - (2n+1+a+b)| tends to Theta/4; allow 2x plus slack
    const double limit = std::fabs(d.spec().theta()) / 4.0;
    for (int n = 8; n <= 60; ++n) {
        const double v = n * std::fabs(d.sigma(n) - (2.0 * n + 1.0 + 0.6 + 0.2));
        CHECK(v <= 2.0 * limit + 0.5);
    }
}

TEST_CASE("tail flag and domain checks") {
    const auto& d = smooth_decomp();
    const int usable = d.usable_count();
    CHECK(usable == 72);
    CHECK_THROWS_AS(d.eigenfunction(usable, 0.5), std::out_of_range);
    CHECK(std::isfinite(d.eigenfunction(usable, 0.5, /*allow_tail=*/true)));
    CHECK_THROWS_AS(d.eigenfunction(2, 0.0), std::domain_error);
    CHECK_THROWS_AS(d.eigenfunction(2, kHalfPi), std::domain_error);
    CHECK_THROWS_AS(d.eigenvalue(d.size()), std::out_of_range);
}

TEST_CASE("coefficient vectors are unit and eigenvalues increase") {
    const auto& d = smooth_decomp();
    double prev = -1e300;
    for (int n = 0; n < d.size(); ++n) {
        CHECK(d.eigenvalue(n) > prev);
        prev = d.eigenvalue(n);
        double norm = 0.0;
        for (double c : d.coefficients(n)) norm += c * c;
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("reflection parity when alpha = beta and B is symmetric") {
    const OperatorSpec spec(JacobiParams(0.7, 0.7), PerturbationB({0.0, 0.25}));
    const auto d = solve(spec, 48, 96);
    for (int n : {0, 1, 2, 7, 12}) {
        const double sign = n % 2 ? -1.0 : 1.0;
        for (double t : {0.2, 0.5, 0.71}) {
            CHECK(d.eigenfunction(n, kHalfPi - t) ==
                  doctest::Approx(sign * d.eigenfunction(n, t)).epsilon(1e-9));
        }
    }
}

TEST_CASE("endpoint constants: flag, sign, half-integer oracle") {
    const auto& d = smooth_decomp();
    for (int n : {1, 10, 30, 55}) {
        const auto c = d.endpoint_constant(Side::left, n);
        CHECK(c.converged);
        CHECK(c.value > 0.0);
        const auto dn = d.endpoint_constant(Side::right, n);
        CHECK(dn.converged);
        CHECK((n % 2 == 0 ? dn.value > 0.0 : dn.value < 0.0));
    }
    // exact constant-chi case: c_n = (2/sqrt(pi)) * 2(n+1)
    const OperatorSpec sine(JacobiParams(0.5, 0.5), PerturbationB{});
    const auto ds = solve(sine, 64, 128);
    for (int n : {0, 3, 12}) {
        const auto c = ds.endpoint_constant(Side::left, n);
        const double expect = 2.0 / std::sqrt(std::numbers::pi) * 2.0 * (n + 1);
        CHECK(c.value == doctest::Approx(expect).epsilon(1e-7));
    }
}

TEST_CASE("quadrature-converged eigenfunctions integrate to delta") {
    const auto& d = smooth_decomp();
    const auto norm = [&](int a, int b) {
        return integrate_composite(
            [&](double t) { return d.eigenfunction(a, t) * d.eigenfunction(b, t); },
            1e-10, kHalfPi - 1e-10, 0.01);
    };
    CHECK(norm(4, 4) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::fabs(norm(4, 9)) < 1e-8);
}
