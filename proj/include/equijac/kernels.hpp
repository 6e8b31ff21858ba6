#pragma once

// Closed-form trigonometric sums, summability weight sequences, and the
// means kernels T_N (eigenfunction basis) and D_N (cosine basis) with the
// kernel-difference diagnostic.

#include <span>
#include <vector>

#include "equijac/eigensolver.hpp"

namespace equijac {

/// Cesaro weight A^theta_{N-n} / A^theta_N with A^theta_m = binom(m+theta, m)
/// (zero for m < 0). Rectangular weights are the case theta = 0.
double cesaro_weight(double theta, int n, int N);

class SummabilitySequence {
  public:
    enum class Kind { rectangular, cesaro };

    static SummabilitySequence rectangular();
    static SummabilitySequence cesaro(double theta);

    double r(int n, int N) const;
    Kind kind() const { return kind_; }
    double theta() const { return theta_; }

  private:
    SummabilitySequence(Kind k, double theta) : kind_(k), theta_(theta) {}
    Kind kind_;
    double theta_;
};

/// The eight partial trigonometric sums over n = M..N:
///   C0 = sum cos(2nt)            S0 = sum sin(2nt)
///   C1 = sum cos(2nt)/n          S1 = sum sin(2nt)/n
/// and the alternating (-1)^n variants C0m, S0m, C1m, S1m.
/// C0/S0 use the closed forms cos((N+M)t) sin((N-M+1)t)/sin t (resp. sin*sin)
/// with the removable-singularity limits near sin t = 0; C1/S1 sum directly;
/// the alternating variants reduce to the plain ones by half-period shifts.
/// C1/S1/C1m/S1m require M >= 1.
enum class TrigKind { C0, S0, C1, S1, C0m, S0m, C1m, S1m };

double trig_sum(TrigKind kind, int M, int N, double t);

/// D_N kernel: (2/pi) r(0,N) + (4/pi) sum_{n=1}^{n_cap} r(n,N) cos 2nx cos 2ny.
/// The caller guarantees the weights vanish beyond n_cap.
double dirichlet_kernel(const SummabilitySequence& r, int N, double x, double y,
                        int n_cap);

/// Closed form of the rectangular D_N: (2/pi)[C0_{0,N}(x-y) + C0_{1,N}(x+y)].
double dirichlet_kernel_closed_rect(int N, double x, double y);

/// T_N kernel: sum_{n <= n_cap} r(n,N) u_n(x) u_n(y).
double eigen_kernel(const EigenDecomposition& decomp, const SummabilitySequence& r,
                    int N, double x, double y, int n_cap);

struct KernelDiffRow {
    int N;
    double max_abs_diff;
    double argmax_y;
};

/// For each N in N_list, the maximum of |T_N(x,y) - D_N(x,y)| over y_grid.
std::vector<KernelDiffRow> kernel_diff_scan(const EigenDecomposition& decomp,
                                            const SummabilitySequence& r, double x,
                                            std::span<const int> N_list,
                                            std::span<const double> y_grid);

/// Trend verdict: max over the last quartile of rows (by position in the
/// list) is at most `slack` times the max over the first quartile.
bool no_growth_trend(const std::vector<KernelDiffRow>& rows, double slack = 1.2);

}  // namespace equijac
