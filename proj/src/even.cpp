#include "tnls/even.hpp"

#include <cmath>

#include "tnls/fft.hpp"

namespace tnls {

EvenTorusField::EvenTorusField(Lattice l, double t) : lattice(l), timestamp(t) {
  std::size_t k = static_cast<std::size_t>(n());
  values.assign(k * k * k, 0.0);
}

EvenSpectralField::EvenSpectralField(Lattice l) : lattice(l) {
  std::size_t k = static_cast<std::size_t>(n());
  coeffs.assign(k * k * k, 0.0);
}

void EvenSpectralField::zero_nyquist() {
  int h = n() - 1;
  for (int a = 0; a <= h; ++a)
    for (int b = 0; b <= h; ++b)
      for (int c = 0; c <= h; ++c)
        if (a == h || b == h || c == h) at(a, b, c) = 0.0;
}

namespace even {

namespace {

int mirror(int k, int m) { return k == 0 ? 0 : m - k; }

std::vector<double> physical_mult(int m) {
  std::vector<double> w(m / 2 + 1, 2.0);
  w.front() = 1.0;
  w.back() = 1.0;
  return w;
}

std::vector<double> spectral_mult(int m) {
  std::vector<double> w(m / 2 + 1, 2.0);
  w.front() = 1.0;
  w.back() = 0.0;
  return w;
}

}  // namespace

kernels::Axes physical_axes(const Lattice& l, std::vector<double>& f2, std::vector<double>& mult) {
  int n = l.m() / 2 + 1;
  f2.assign(n, 0.0);
  mult = physical_mult(l.m());
  return {n, f2.data(), mult.data()};
}

kernels::Axes spectral_axes(const Lattice& l, std::vector<double>& f2, std::vector<double>& mult) {
  int n = l.m() / 2 + 1;
  f2.resize(n);
  for (int j = 0; j < n; ++j) f2[j] = static_cast<double>(j) * j;
  mult = spectral_mult(l.m());
  return {n, f2.data(), mult.data()};
}

bool is_even(const TorusField& f, double rel_tol) {
  int m = f.lattice.m();
  double scale = kernels::parallel::max_abs(f.values.data(), f.values.size());
  double tol = rel_tol * (scale > 0 ? scale : 1.0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        const cplx& v = f(a, b, c);
        if (std::abs(v - f(mirror(a, m), b, c)) > tol) return false;
        if (std::abs(v - f(a, mirror(b, m), c)) > tol) return false;
        if (std::abs(v - f(a, b, mirror(c, m))) > tol) return false;
      }
  return true;
}

EvenTorusField restrict_field(const TorusField& f) {
  if (!is_even(f, 1e-10)) throw ValidationError("field is not even in every coordinate");
  EvenTorusField out(f.lattice, f.timestamp);
  int n = out.n();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) out(a, b, c) = f(a, b, c);
  return out;
}

TorusField expand(const EvenTorusField& f) {
  int m = f.lattice.m(), h = m / 2;
  TorusField out(f.lattice, f.timestamp);
  auto fold = [h, m](int k) { return k <= h ? k : m - k; };
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) out(a, b, c) = f(fold(a), fold(b), fold(c));
  return out;
}

EvenSpectralField restrict_spectrum(const SpectralField& F) {
  EvenSpectralField out(F.lattice);
  int n = out.n();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) out.at(a, b, c) = F.at(a, b, c);
  out.zero_nyquist();
  return out;
}

SpectralField expand(const EvenSpectralField& F) {
  const Lattice& l = F.lattice;
  int m = l.m();
  SpectralField out(l);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        if (l.nyquist(a) || l.nyquist(b) || l.nyquist(c)) continue;
        out.coeffs[l.index(a, b, c)] =
            F.at(std::abs(l.frequency(a)), std::abs(l.frequency(b)), std::abs(l.frequency(c)));
      }
  return out;
}

EvenSpectralField forward(const EvenTorusField& f) {
  EvenSpectralField out(f.lattice);
  out.coeffs = f.values;
  fft::dct1_3d(out.n(), out.coeffs.data());
  double m = f.lattice.m();
  kernels::parallel::scale(out.coeffs.data(), std::pow(two_pi, 1.5) / (m * m * m), out.coeffs.size());
  out.zero_nyquist();
  return out;
}

EvenTorusField inverse(const EvenSpectralField& F, double timestamp) {
  EvenTorusField out(F.lattice, timestamp);
  out.values = F.coeffs;
  int h = out.n() - 1;
  for (int a = 0; a <= h; ++a)
    for (int b = 0; b <= h; ++b)
      for (int c = 0; c <= h; ++c)
        if (a == h || b == h || c == h) out(a, b, c) = 0.0;
  fft::dct1_3d(out.n(), out.values.data());
  kernels::parallel::scale(out.values.data(), std::pow(two_pi, -1.5), out.values.size());
  return out;
}

namespace {

template <class T>
void multiply_axes(cvec& data, int n, const std::vector<T>& a) {
#pragma omp parallel for schedule(static)
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      auto f12 = a[i1] * a[i2];
      std::size_t base = (static_cast<std::size_t>(i1) * n + i2) * n;
      for (int i3 = 0; i3 < n; ++i3) data[base + i3] *= f12 * a[i3];
    }
}

}  // namespace

void separable_multiply(EvenSpectralField& F, const std::vector<double>& a) {
  require(static_cast<int>(a.size()) == F.n(), "axis factor length mismatch");
  multiply_axes(F.coeffs, F.n(), a);
}

void propagate_inplace(EvenSpectralField& F, double t) {
  require(std::isfinite(t), "propagation time must be finite");
  if (t == 0.0) return;
  int n = F.n();
  std::vector<cplx> ph(n);
  for (int j = 0; j < n; ++j) {
    double th = -t * j * j;
    ph[j] = cplx(std::cos(th), std::sin(th));
  }
  multiply_axes(F.coeffs, n, ph);
}

EvenSpectralField lp_project(const EvenSpectralField& F, double N, LpMode mode) {
  require(is_dyadic(N), "Littlewood-Paley scale must be a power of two");
  int n = F.n();
  auto factor = [n](double s) {
    std::vector<double> a(n);
    for (int j = 0; j < n; ++j) {
      double e = j == n - 1 ? 0.0 : eta1(j / s);
      a[j] = e * e;
    }
    return a;
  };
  EvenSpectralField out = F;
  multiply_axes(out.coeffs, n, factor(N));
  if (mode == LpMode::shell && N > 1.0) {
    EvenSpectralField low = F;
    multiply_axes(low.coeffs, n, factor(N / 2));
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= low.coeffs[i];
  }
  return out;
}

double sobolev_norm(const EvenSpectralField& F, double s) {
  std::vector<double> f2, w;
  auto ax = spectral_axes(F.lattice, f2, w);
  return std::sqrt(kernels::parallel::sobolev_abs2(F.coeffs.data(), ax, s, false));
}

double homogeneous_sobolev_norm(const EvenSpectralField& F, double s) {
  std::vector<double> f2, w;
  auto ax = spectral_axes(F.lattice, f2, w);
  return std::sqrt(kernels::parallel::sobolev_abs2(F.coeffs.data(), ax, s, true));
}

cplx sobolev_inner(const EvenSpectralField& F, const EvenSpectralField& G, double s, bool homogeneous) {
  if (F.lattice != G.lattice) throw ValidationError("lattice mismatch");
  std::vector<double> f2, w;
  auto ax = spectral_axes(F.lattice, f2, w);
  return kernels::parallel::sobolev_inner(F.coeffs.data(), G.coeffs.data(), ax, s, homogeneous);
}

double log_lebesgue_integral(const EvenTorusField& f, double p) {
  require(p >= 1.0 && std::isfinite(p), "Lebesgue exponent must be finite and >= 1");
  std::vector<double> f2, w;
  auto ax = physical_axes(f.lattice, f2, w);
  auto s = kernels::parallel::log_sum_abs_pow(f.values.data(), ax, p);
  return std::log(f.lattice.cell_volume()) + s.log_value();
}

std::pair<double, double> log_lebesgue_integral_pair(const EvenTorusField& f, double p, double q) {
  require(p >= 1.0 && std::isfinite(p) && q >= 1.0 && std::isfinite(q), "Lebesgue exponents must be finite and >= 1");
  std::vector<double> f2, w;
  auto ax = physical_axes(f.lattice, f2, w);
  kernels::ScaledSum sp, sq;
  kernels::parallel::log_sum_abs_pow_pair(f.values.data(), ax, p, q, &sp, &sq);
  double lv = std::log(f.lattice.cell_volume());
  return {lv + sp.log_value(), lv + sq.log_value()};
}

void shell_physical(const EvenSpectralField& U, double N, EvenTorusField& out) {
  require(is_dyadic(N), "Littlewood-Paley scale must be a power of two");
  int n = U.n();
  if (out.lattice.m() != U.lattice.m()) out = EvenTorusField(U.lattice);
  out.timestamp = 0.0;
  std::vector<double> hi(n), lo(n, 0.0);
  for (int j = 0; j < n - 1; ++j) {
    double e = eta1(j / N);
    hi[j] = e * e;
    if (N > 1.0) {
      double g = eta1(j / (N / 2));
      lo[j] = g * g;
    }
  }
  const double c = std::pow(two_pi, -1.5);
  const cplx* in = U.coeffs.data();
  cplx* o = out.values.data();
#pragma omp parallel for schedule(static)
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double h12 = hi[a] * hi[b], l12 = lo[a] * lo[b];
      std::size_t base = (static_cast<std::size_t>(a) * n + b) * n;
      for (int k = 0; k < n; ++k) o[base + k] = (c * (h12 * hi[k] - l12 * lo[k])) * in[base + k];
    }
  fft::dct1_3d(n, o);
}

double lebesgue_norm(const EvenTorusField& f, double p) {
  require(p >= 1.0, "Lebesgue exponent must be >= 1");
  if (std::isinf(p)) return kernels::parallel::max_abs(f.values.data(), f.values.size());
  if (p <= 16.0) {
    std::vector<double> f2, w;
    auto ax = physical_axes(f.lattice, f2, w);
    double s = kernels::parallel::sum_abs_pow(f.values.data(), ax, p);
    return std::pow(f.lattice.cell_volume() * s, 1.0 / p);
  }
  double lg = log_lebesgue_integral(f, p);
  return std::isinf(lg) ? 0.0 : std::exp(lg / p);
}

}  // namespace even

}  // namespace tnls
