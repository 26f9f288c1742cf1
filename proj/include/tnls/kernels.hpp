#pragma once

// Pointwise maps and reductions over field arrays.
//
// Two implementations of every kernel: `serial` is the plain-loop reference
// kept for testing, `parallel` is what the library calls. Parallel reductions
// sum fixed-size blocks and combine block sums by a pairwise tree, so the
// result does not depend on the thread count.

#include <cstddef>

#include "tnls/types.hpp"

namespace tnls::kernels {

inline constexpr std::size_t block_size = 4096;

// Per-axis description of a cubic n^3 array: squared frequency of each slot
// and an optional quadrature multiplicity (null means weight 1).
struct Axes {
  int n = 0;
  const double* freq2 = nullptr;
  const double* mult = nullptr;
  std::size_t volume() const { return static_cast<std::size_t>(n) * n * n; }
};

// log(value) = log_scale + log(sum); used for 100th powers. The pair form
// returns both exponents from one pass sharing the logarithm.
struct ScaledSum {
  double log_scale = -infinity;
  double sum = 0.0;
  double log_value() const;
};

#define TNLS_KERNEL_SET                                                                   \
  double sum_abs_pow(const cplx* a, std::size_t n, double p);                             \
  double sum_abs_pow(const cplx* a, const Axes& ax, double p);                            \
  ScaledSum log_sum_abs_pow(const cplx* a, std::size_t n, double p);                      \
  ScaledSum log_sum_abs_pow(const cplx* a, const Axes& ax, double p);                     \
  void log_sum_abs_pow_pair(const cplx* a, const Axes& ax, double p, double q, ScaledSum* sp,  \
                            ScaledSum* sq);                                               \
  double max_abs(const cplx* a, std::size_t n);                                           \
  double sobolev_abs2(const cplx* f, const Axes& ax, double s, bool homogeneous);         \
  cplx sobolev_inner(const cplx* f, const cplx* g, const Axes& ax, double s, bool homogeneous); \
  double cubed_inner(const cplx* a, const cplx* b, const Axes& ax);                       \
  void nonlinear_phase(cplx* u, std::size_t n, double rho_dt);                            \
  void multiply(cplx* a, const cplx* m, std::size_t n);                                   \
  void scale(cplx* a, double s, std::size_t n);

namespace serial {
TNLS_KERNEL_SET
}
namespace parallel {
TNLS_KERNEL_SET
}

#undef TNLS_KERNEL_SET

// Pairwise sum of a short array (used to combine block partials).
double pairwise_sum(const double* v, std::size_t n);

int max_threads();
void set_threads(int n);

}  // namespace tnls::kernels
