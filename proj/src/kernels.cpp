#include "tnls/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tnls::kernels {

double ScaledSum::log_value() const {
  if (sum <= 0.0) return -infinity;
  return log_scale + std::log(sum);
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

namespace {

inline double abs_pow(const cplx& z, double p) {
  double r2 = std::norm(z);
  if (p == 2.0) return r2;
  if (p == 6.0) return r2 * r2 * r2;
  if (p == 4.0) return r2 * r2;
  if (r2 == 0.0) return 0.0;
  return std::pow(r2, 0.5 * p);
}

struct Cell {
  int i1, i2, i3;
};

inline Cell cell_of(std::size_t i, int n) {
  auto nn = static_cast<std::size_t>(n);
  return {static_cast<int>(i / (nn * nn)), static_cast<int>((i / nn) % nn), static_cast<int>(i % nn)};
}

inline double mult_of(const Axes& ax, std::size_t i) {
  if (!ax.mult) return 1.0;
  Cell c = cell_of(i, ax.n);
  return ax.mult[c.i1] * ax.mult[c.i2] * ax.mult[c.i3];
}

inline double sobolev_weight(const Axes& ax, std::size_t i, double s, bool homogeneous) {
  Cell c = cell_of(i, ax.n);
  double k2 = ax.freq2[c.i1] + ax.freq2[c.i2] + ax.freq2[c.i3];
  double base = homogeneous ? k2 : 1.0 + k2;
  double w = s == 1.0 ? base : (base == 0.0 ? 0.0 : std::pow(base, s));
  if (ax.mult) w *= ax.mult[c.i1] * ax.mult[c.i2] * ax.mult[c.i3];
  return w;
}

// Reference: one left-to-right loop.
template <class Term>
double plain_sum(std::size_t n, Term term) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += term(i);
  return s;
}

template <class Term>
cplx plain_csum(std::size_t n, Term term) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += term(i);
  return s;
}

template <class Term>
double blocked_sum(std::size_t n, Term term) {
  const std::size_t nb = (n + block_size - 1) / block_size;
  std::vector<double> part(nb);
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < static_cast<long long>(nb); ++b) {
    std::size_t lo = static_cast<std::size_t>(b) * block_size;
    std::size_t hi = std::min(n, lo + block_size);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    part[static_cast<std::size_t>(b)] = s;
  }
  return pairwise_sum(part.data(), nb);
}

template <class Term>
cplx blocked_csum(std::size_t n, Term term) {
  const std::size_t nb = (n + block_size - 1) / block_size;
  std::vector<double> re(nb), im(nb);
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < static_cast<long long>(nb); ++b) {
    std::size_t lo = static_cast<std::size_t>(b) * block_size;
    std::size_t hi = std::min(n, lo + block_size);
    cplx s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    re[static_cast<std::size_t>(b)] = s.real();
    im[static_cast<std::size_t>(b)] = s.imag();
  }
  return {pairwise_sum(re.data(), nb), pairwise_sum(im.data(), nb)};
}

template <class Term>
double blocked_max(std::size_t n, Term term) {
  const std::size_t nb = (n + block_size - 1) / block_size;
  std::vector<double> part(nb, 0.0);
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < static_cast<long long>(nb); ++b) {
    std::size_t lo = static_cast<std::size_t>(b) * block_size;
    std::size_t hi = std::min(n, lo + block_size);
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, term(i));
    part[static_cast<std::size_t>(b)] = m;
  }
  double m = 0.0;
  for (double v : part) m = std::max(m, v);
  return m;
}

// Both sums of mult |a/m|^p and mult |a/m|^q; each term costs one log and two exps.
template <bool Parallel>
void pair_sums(const cplx* a, const Axes& ax, double m, double p, double q, double* sp, double* sq) {
  const int n = ax.n;
  const std::size_t rows = static_cast<std::size_t>(n) * n;
  const double inv2 = 1.0 / (m * m), hp = 0.5 * p, hq = 0.5 * q;
  // One partial per (i1, i2) row: a fixed partition, independent of the thread count.
  std::vector<double> pp(rows), pq(rows);
  auto row = [&](std::size_t r) {
    int i1 = static_cast<int>(r / n), i2 = static_cast<int>(r % n);
    double w12 = ax.mult ? ax.mult[i1] * ax.mult[i2] : 1.0;
    const cplx* base = a + r * n;
    double s0 = 0.0, s1 = 0.0;
    for (int i3 = 0; i3 < n; ++i3) {
      double r2 = std::norm(base[i3]) * inv2;
      if (r2 == 0.0) continue;
      double lr = std::log(r2), w = ax.mult ? w12 * ax.mult[i3] : 1.0;
      s0 += w * std::exp(hp * lr);
      s1 += w * std::exp(hq * lr);
    }
    pp[r] = s0;
    pq[r] = s1;
  };
  if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < static_cast<long long>(rows); ++r) row(static_cast<std::size_t>(r));
  } else {
    for (std::size_t r = 0; r < rows; ++r) row(r);
  }
  if constexpr (Parallel) {
    *sp = pairwise_sum(pp.data(), rows);
    *sq = pairwise_sum(pq.data(), rows);
  } else {
    *sp = plain_sum(rows, [&](std::size_t r) { return pp[r]; });
    *sq = plain_sum(rows, [&](std::size_t r) { return pq[r]; });
  }
}

}  // namespace

namespace serial {

double sum_abs_pow(const cplx* a, std::size_t n, double p) {
  return plain_sum(n, [&](std::size_t i) { return abs_pow(a[i], p); });
}

double sum_abs_pow(const cplx* a, const Axes& ax, double p) {
  return plain_sum(ax.volume(), [&](std::size_t i) { return mult_of(ax, i) * abs_pow(a[i], p); });
}

double max_abs(const cplx* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

ScaledSum log_sum_abs_pow(const cplx* a, std::size_t n, double p) {
  double m = max_abs(a, n);
  if (m == 0.0) return {};
  double inv = 1.0 / m;
  return {p * std::log(m), plain_sum(n, [&](std::size_t i) { return abs_pow(a[i] * inv, p); })};
}

ScaledSum log_sum_abs_pow(const cplx* a, const Axes& ax, double p) {
  double m = max_abs(a, ax.volume());
  if (m == 0.0) return {};
  double inv = 1.0 / m;
  return {p * std::log(m),
          plain_sum(ax.volume(), [&](std::size_t i) { return mult_of(ax, i) * abs_pow(a[i] * inv, p); })};
}

void log_sum_abs_pow_pair(const cplx* a, const Axes& ax, double p, double q, ScaledSum* sp, ScaledSum* sq) {
  double m = max_abs(a, ax.volume());
  *sp = {};
  *sq = {};
  if (m == 0.0) return;
  double lm = std::log(m);
  sp->log_scale = p * lm;
  sq->log_scale = q * lm;
  pair_sums<false>(a, ax, m, p, q, &sp->sum, &sq->sum);
}

double sobolev_abs2(const cplx* f, const Axes& ax, double s, bool homogeneous) {
  return plain_sum(ax.volume(),
                   [&](std::size_t i) { return sobolev_weight(ax, i, s, homogeneous) * std::norm(f[i]); });
}

cplx sobolev_inner(const cplx* f, const cplx* g, const Axes& ax, double s, bool homogeneous) {
  return plain_csum(ax.volume(), [&](std::size_t i) {
    return sobolev_weight(ax, i, s, homogeneous) * f[i] * std::conj(g[i]);
  });
}

double cubed_inner(const cplx* a, const cplx* b, const Axes& ax) {
  return plain_sum(ax.volume(), [&](std::size_t i) {
    double x = std::abs(a[i]) * std::abs(b[i]);
    return mult_of(ax, i) * x * x * x;
  });
}

void nonlinear_phase(cplx* u, std::size_t n, double rho_dt) {
  for (std::size_t i = 0; i < n; ++i) {
    double r2 = std::norm(u[i]);
    u[i] *= std::polar(1.0, -rho_dt * r2 * r2);
  }
}

void multiply(cplx* a, const cplx* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] *= m[i];
}

void scale(cplx* a, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] *= s;
}

}  // namespace serial

namespace parallel {

double sum_abs_pow(const cplx* a, std::size_t n, double p) {
  return blocked_sum(n, [&](std::size_t i) { return abs_pow(a[i], p); });
}

double sum_abs_pow(const cplx* a, const Axes& ax, double p) {
  return blocked_sum(ax.volume(), [&](std::size_t i) { return mult_of(ax, i) * abs_pow(a[i], p); });
}

double max_abs(const cplx* a, std::size_t n) {
  return blocked_max(n, [&](std::size_t i) { return std::abs(a[i]); });
}

ScaledSum log_sum_abs_pow(const cplx* a, std::size_t n, double p) {
  double m = max_abs(a, n);
  if (m == 0.0) return {};
  double inv = 1.0 / m;
  return {p * std::log(m), blocked_sum(n, [&](std::size_t i) { return abs_pow(a[i] * inv, p); })};
}

ScaledSum log_sum_abs_pow(const cplx* a, const Axes& ax, double p) {
  double m = max_abs(a, ax.volume());
  if (m == 0.0) return {};
  double inv = 1.0 / m;
  return {p * std::log(m),
          blocked_sum(ax.volume(), [&](std::size_t i) { return mult_of(ax, i) * abs_pow(a[i] * inv, p); })};
}

void log_sum_abs_pow_pair(const cplx* a, const Axes& ax, double p, double q, ScaledSum* sp, ScaledSum* sq) {
  double m = max_abs(a, ax.volume());
  *sp = {};
  *sq = {};
  if (m == 0.0) return;
  double lm = std::log(m);
  sp->log_scale = p * lm;
  sq->log_scale = q * lm;
  pair_sums<true>(a, ax, m, p, q, &sp->sum, &sq->sum);
}

double sobolev_abs2(const cplx* f, const Axes& ax, double s, bool homogeneous) {
  return blocked_sum(ax.volume(),
                     [&](std::size_t i) { return sobolev_weight(ax, i, s, homogeneous) * std::norm(f[i]); });
}

cplx sobolev_inner(const cplx* f, const cplx* g, const Axes& ax, double s, bool homogeneous) {
  return blocked_csum(ax.volume(), [&](std::size_t i) {
    return sobolev_weight(ax, i, s, homogeneous) * f[i] * std::conj(g[i]);
  });
}

double cubed_inner(const cplx* a, const cplx* b, const Axes& ax) {
  return blocked_sum(ax.volume(), [&](std::size_t i) {
    double x = std::abs(a[i]) * std::abs(b[i]);
    return mult_of(ax, i) * x * x * x;
  });
}

void nonlinear_phase(cplx* u, std::size_t n, double rho_dt) {
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    double r2 = std::norm(u[i]);
    double ph = -rho_dt * r2 * r2;
    u[i] *= cplx(std::cos(ph), std::sin(ph));
  }
}

void multiply(cplx* a, const cplx* m, std::size_t n) {
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) a[i] *= m[i];
}

void scale(cplx* a, double s, std::size_t n) {
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) a[i] *= s;
}

}  // namespace parallel

}  // namespace tnls::kernels
