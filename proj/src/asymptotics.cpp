#include "equijac/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "equijac/specfun.hpp"

namespace equijac {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;
constexpr double kQuarterPi = kPi / 4.0;
constexpr double kWindowSlack = 1e-9;

double mirror_parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }
}  // namespace

AsymptoticConstants AsymptoticConstants::from_spec(const OperatorSpec& spec) {
    const double a = spec.params().alpha, b = spec.params().beta;
    AsymptoticConstants k;
    k.nu = 1.0 + a + b;
    k.lambda_left = 0.5 * a * kPi + 0.25 * kPi;
    k.lambda_right = 0.5 * b * kPi + 0.25 * kPi;
    k.theta_cap = spec.theta();
    k.tau = std::min(1.0, a + 0.5);
    return k;
}

double predict_sigma(const OperatorSpec& spec, int n) {
    if (n < 1) throw std::domain_error("predict_sigma: requires n >= 1");
    return 2.0 * n + 1.0 + spec.params().alpha + spec.params().beta -
           spec.theta() / (4.0 * n);
}

double predict_u(const OperatorSpec& spec, const AsymptoticConstants& constants, int n,
                 double sigma_n, double t, UForm form) {
    const double a = spec.params().alpha, b = spec.params().beta;
    const double two_rt_pi = 2.0 / std::sqrt(kPi);
    switch (form) {
        case UForm::bessel_left: {
            if (!(t > 0.0) || !(t <= kQuarterPi + kWindowSlack))
                throw std::domain_error("predict_u: bessel_left needs t in (0, pi/4]");
            const double z = sigma_n * t;
            const double root = std::sqrt(z);
            return std::numbers::sqrt2 *
                   (root * bessel_j(a, z) -
                    0.5 * spec.x_integral(Side::left, t) * root * bessel_j(a + 1.0, z) /
                        sigma_n);
        }
        case UForm::bessel_right: {
            const double s = kHalfPi - t;
            if (!(s > 0.0) || !(s <= kQuarterPi + kWindowSlack))
                throw std::domain_error("predict_u: bessel_right needs pi/2 - t in (0, pi/4]");
            const double z = sigma_n * s;
            const double root = std::sqrt(z);
            return mirror_parity(n) * std::numbers::sqrt2 *
                   (root * bessel_j(b, z) -
                    0.5 * spec.x_integral(Side::right, s) * root * bessel_j(b + 1.0, z) /
                        sigma_n);
        }
        case UForm::cosine_left: {
            if (!(t >= 1.0 / n - kWindowSlack) || !(t <= kQuarterPi + kWindowSlack))
                throw std::domain_error("predict_u: cosine_left needs t in [1/n, pi/4]");
            const double phase = (2.0 * n + constants.nu) * t - constants.lambda_left;
            const double y0 = -(a * a - 0.25 + t * spec.x_integral(Side::left, t) -
                                constants.theta_cap * t * t) /
                              (4.0 * std::sqrt(kPi));
            return two_rt_pi * std::cos(phase) + y0 * (2.0 / (n * t)) * std::sin(phase);
        }
        case UForm::cosine_right: {
            const double s = kHalfPi - t;
            if (!(s >= 1.0 / n - kWindowSlack) || !(s <= kQuarterPi + kWindowSlack))
                throw std::domain_error(
                    "predict_u: cosine_right needs pi/2 - t in [1/n, pi/4]");
            const double phase = (2.0 * n + constants.nu) * s - constants.lambda_right;
            const double y1 = -(b * b - 0.25 + s * spec.x_integral(Side::right, s) -
                                constants.theta_cap * s * s) /
                              (4.0 * std::sqrt(kPi));
            return mirror_parity(n) *
                   (two_rt_pi * std::cos(phase) + y1 * (2.0 / (n * s)) * std::sin(phase));
        }
    }
    throw std::logic_error("predict_u: unknown form");
}

EndpointPrediction predict_endpoint_constants(const OperatorSpec& spec, int n,
                                              double sigma_n) {
    if (n < 1) throw std::domain_error("predict_endpoint_constants: requires n >= 1");
    const double a = spec.params().alpha, b = spec.params().beta;
    EndpointPrediction out;
    out.c_n = std::pow(sigma_n, a + 0.5) / (std::pow(2.0, a - 0.5) * gamma_fn(a + 1.0));
    out.d_n = mirror_parity(n) * std::pow(sigma_n, b + 0.5) /
              (std::pow(2.0, b - 0.5) * gamma_fn(b + 1.0));
    return out;
}

std::string lemma_name(LemmaKind k) {
    switch (k) {
        case LemmaKind::sigma2: return "sigma2";
        case LemmaKind::u_bessel_left: return "u_bessel_left";
        case LemmaKind::u_cosine_left: return "u_cosine_left";
        case LemmaKind::u_bessel_right: return "u_bessel_right";
        case LemmaKind::u_cosine_right: return "u_cosine_right";
        case LemmaKind::cn: return "cn";
        case LemmaKind::dn: return "dn";
        case LemmaKind::delta_p3: return "delta_p3";
        case LemmaKind::delta_p4: return "delta_p4";
    }
    return "unknown";
}

bool ResidualReport::bounded(double slack, double floor) const {
    if (rows.size() < 2) return true;
    const size_t half = rows.size() / 2;
    double lo = 0.0, hi = 0.0;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (i < half)
            lo = std::max(lo, rows[i].scaled);
        else
            hi = std::max(hi, rows[i].scaled);
    }
    return hi <= std::max(slack * lo, floor);
}

namespace {

// Logarithmic remainder loosening, active only when the relevant parameter
// vanishes.
double log_factor(double param, double sigma_n, double dist) {
    if (param != 0.0) return 1.0;
    return std::log(2.0 / std::min(1.0, sigma_n * dist));
}

}  // namespace

ResidualReport residual_scan(const EigenDecomposition& decomp, LemmaKind lemma, int n_lo,
                             int n_hi, std::span<const double> t_grid) {
    if (n_lo < 1 || n_hi < n_lo)
        throw std::domain_error("residual_scan: requires 1 <= n_lo <= n_hi");
    const bool needs_next =
        lemma == LemmaKind::delta_p3 || lemma == LemmaKind::delta_p4;
    if (n_hi + (needs_next ? 1 : 0) >= decomp.usable_count())
        throw std::out_of_range("residual_scan: n range exceeds the usable spectrum");

    const OperatorSpec& spec = decomp.spec();
    const double a = spec.params().alpha, b = spec.params().beta;
    const AsymptoticConstants constants = AsymptoticConstants::from_spec(spec);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    ResidualReport report;
    report.lemma = lemma;
    for (int n = n_lo; n <= n_hi; ++n) {
        const double sigma_n = decomp.sigma(n);
        ResidualRow row{n, nan, 0.0, 0.0};
        switch (lemma) {
            case LemmaKind::sigma2: {
                row.raw = std::fabs(sigma_n - predict_sigma(spec, n));
                row.scaled = row.raw * n * n;
                break;
            }
            case LemmaKind::cn:
            case LemmaKind::dn: {
                const Side side = lemma == LemmaKind::cn ? Side::left : Side::right;
                const EndpointConstant computed = decomp.endpoint_constant(side, n);
                const EndpointPrediction pred =
                    predict_endpoint_constants(spec, n, sigma_n);
                const double predicted = side == Side::left ? pred.c_n : pred.d_n;
                row.raw = std::fabs(computed.value - predicted);
                row.scaled = std::fabs(computed.value / predicted - 1.0) * n * n;
                break;
            }
            default: {
                double best_scaled = 0.0, best_raw = 0.0, best_t = nan;
                for (double t : t_grid) {
                    double dist;  // distance to the relevant endpoint
                    bool in_window;
                    const bool left = lemma == LemmaKind::u_bessel_left ||
                                      lemma == LemmaKind::u_cosine_left ||
                                      lemma == LemmaKind::delta_p3 ||
                                      lemma == LemmaKind::delta_p4;
                    dist = left ? t : kHalfPi - t;
                    switch (lemma) {
                        case LemmaKind::u_bessel_left:
                        case LemmaKind::u_bessel_right:
                            in_window = dist > 0.0 && dist <= kQuarterPi + kWindowSlack;
                            break;
                        case LemmaKind::delta_p4:
                            in_window = dist > 0.0 && dist <= 1.0 / n + kWindowSlack;
                            break;
                        default:  // cosine forms and delta_p3
                            in_window = dist >= 1.0 / n - kWindowSlack &&
                                        dist <= kQuarterPi + kWindowSlack;
                            break;
                    }
                    if (!in_window) {
                        ++report.skipped;
                        continue;
                    }
                    double raw, rate;
                    if (lemma == LemmaKind::delta_p3) {
                        raw = std::fabs(decomp.eigenfunction(n, t) -
                                        decomp.eigenfunction(n + 1, t));
                        rate = dist + 1.0 / n;
                    } else if (lemma == LemmaKind::delta_p4) {
                        raw = std::fabs(decomp.eigenfunction(n, t) -
                                        decomp.eigenfunction(n + 1, t));
                        rate = std::pow(n * dist, constants.tau) / n +
                               1.0 / (static_cast<double>(n) * n) + dist;
                    } else {
                        UForm form;
                        switch (lemma) {
                            case LemmaKind::u_bessel_left: form = UForm::bessel_left; break;
                            case LemmaKind::u_bessel_right: form = UForm::bessel_right; break;
                            case LemmaKind::u_cosine_left: form = UForm::cosine_left; break;
                            default: form = UForm::cosine_right; break;
                        }
                        raw = std::fabs(decomp.eigenfunction(n, t) -
                                        predict_u(spec, constants, n, sigma_n, t, form));
                        const double nd = n * dist;
                        rate = 1.0 / (nd * nd);
                        const double param = left ? a : b;
                        rate *= log_factor(param, sigma_n, dist);
                    }
                    const double scaled = raw / rate;
                    if (scaled >= best_scaled) {
                        best_scaled = scaled;
                        best_raw = raw;
                        best_t = t;
                    }
                }
                row.raw = best_raw;
                row.scaled = best_scaled;
                row.t_at_max = best_t;
                break;
            }
        }
        report.rows.push_back(row);
        report.max_scaled = std::max(report.max_scaled, row.scaled);
    }
    return report;
}

}  // namespace equijac
