#pragma once

// The kernel K_M(x, t) = sum_xi e^{-i(t|xi|^2 + x.xi)} eta3(xi/M), i.e.
// e^{it Lap} P_{<=M} delta_0, its rational-time majorant and window suprema.
//
// K_M factors into three copies of the 1-D sum
//   k_M(y, t) = sum_n e^{-i(t n^2 + y n)} eta1(n/M)^2,   |n| < 2M,
// so sup over x of |K_M| is the cube of the 1-D sup.

#include <iosfwd>
#include <string>
#include <vector>

#include "tnls/even.hpp"
#include "tnls/field.hpp"

namespace tnls::weyl {

cplx kernel_1d(int M, double y, double t);
cplx kernel_eval(int M, const Vec3& x, double t);

// t/(2pi) = a/q + beta with gcd(a, q) = 1, 1 <= q <= M, |beta| <= 1/(Mq).
struct DirichletApprox {
  long long a = 0;
  long long q = 1;
  double beta = 0.0;
};
DirichletApprox dirichlet_approx(double t, long long M);

// [M / (sqrt(q) (1 + M |beta|^{1/2}))]^3 with (a, q, beta) at level M.
double majorant(int M, double t);

struct KernelSample {
  int M = 0;
  Vec3 x{};
  double t = 0.0;
  cplx value;
  double majorant = 0.0;
};
KernelSample sample(int M, const Vec3& x, double t);

// sup over y of |k_M(y, t)|: oversampled FFT on 64M points, then the best
// grid maxima refined by golden section.
struct Sup1D {
  double value = 0.0;
  double y = 0.0;
};
Sup1D sup_x_1d(int M, double t);

// Sampled supremum over a time window. resolution is the grid spacing.
struct WindowSup {
  double value = 0.0;
  double t = 0.0;
  Interval window;
  double resolution = 0.0;
  long long samples = 0;
};

// sup of |K_M| over T^3 x [S M^-2, S^-1], 1 <= S <= M. Uniform t grid of
// spacing M^-2 / points_per_period, best candidates refined in t.
WindowSup extinction_sup(int M, double S, int points_per_period = 8);

// sup over |t| in [T N^-2, T^-1] of ||e^{itLap} f||_{L^p}, 1 <= T <= N.
WindowSup window_linf_lp(const TorusField& f, double N, double T, double p = infinity,
                         int points_per_period = 8);
WindowSup window_linf_lp(const EvenTorusField& f, double N, double T, double p = infinity,
                         int points_per_period = 8);

struct SweepRow {
  double M = 0.0;
  double param = 0.0;
  double value = 0.0;
  double normalized = 0.0;
  double resolution = 0.0;
};
// Columns M, <param_name>, value, normalized_value, grid_resolution.
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, const std::string& param_name);

}  // namespace tnls::weyl
