#include "tnls/spectral.hpp"

#include <cmath>

#include "tnls/fft.hpp"

namespace tnls {

double mollifier_b(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

double eta1(double y) {
  double a = std::fabs(y);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  double u = mollifier_b(2.0 - a), v = mollifier_b(a - 1.0);
  return u / (u + v);
}

double eta3(const Vec3& xi) {
  double p = eta1(xi[0]) * eta1(xi[1]) * eta1(xi[2]);
  return p * p;
}

double eta_radial(double r) { return eta1(r); }

namespace {

void check_finite(const cvec& v, const char* what) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ValidationError(std::string(what) + " contains non-finite values");
}

// Applies out[i1,i2,i3] = in * a1[i1] * a2[i2] * a3[i3].
template <class T>
void separable_multiply(const cvec& in, cvec& out, int m, const std::vector<T>& a1,
                        const std::vector<T>& a2, const std::vector<T>& a3) {
#pragma omp parallel for schedule(static)
  for (int i1 = 0; i1 < m; ++i1)
    for (int i2 = 0; i2 < m; ++i2) {
      auto f12 = a1[i1] * a2[i2];
      std::size_t base = (static_cast<std::size_t>(i1) * m + i2) * m;
      for (int i3 = 0; i3 < m; ++i3) out[base + i3] = in[base + i3] * (f12 * a3[i3]);
    }
}

std::vector<cplx> axis_phase(const Lattice& l, double t, double x) {
  int m = l.m();
  std::vector<cplx> ph(m);
  for (int j = 0; j < m; ++j) {
    if (l.nyquist(j)) {
      ph[j] = 0.0;
      continue;
    }
    double xi = l.frequency(j);
    double th = t * xi * xi - x * xi;
    ph[j] = cplx(std::cos(th), std::sin(th));
  }
  return ph;
}

}  // namespace

SpectralField forward_transform(const TorusField& f) {
  check_finite(f.values, "field");
  const Lattice& l = f.lattice;
  SpectralField out(l);
  fft::dft3(l.m(), f.values.data(), out.coeffs.data(), -1);
  double m = l.m();
  kernels::parallel::scale(out.coeffs.data(), std::pow(two_pi, 1.5) / (m * m * m), out.coeffs.size());
  out.zero_nyquist();
  return out;
}

TorusField inverse_transform(const SpectralField& F, double timestamp) {
  const Lattice& l = F.lattice;
  SpectralField work(l, F.coeffs);
  work.zero_nyquist();
  TorusField out(l, timestamp);
  fft::dft3(l.m(), work.coeffs.data(), out.values.data(), +1);
  kernels::parallel::scale(out.values.data(), std::pow(two_pi, -1.5), out.values.size());
  return out;
}

void propagate_inplace(SpectralField& F, double t) {
  require(std::isfinite(t), "propagation time must be finite");
  if (t == 0.0) return;
  auto ph = axis_phase(F.lattice, -t, 0.0);
  separable_multiply(F.coeffs, F.coeffs, F.lattice.m(), ph, ph, ph);
}

SpectralField propagate(const SpectralField& F, double t) {
  SpectralField out(F.lattice, F.coeffs);
  propagate_inplace(out, t);
  return out;
}

void propagate_physical(const SpectralField& F, double t, cvec& out) {
  require(std::isfinite(t), "propagation time must be finite");
  const Lattice& l = F.lattice;
  auto ph = axis_phase(l, -t, 0.0);
  auto ph1 = ph;
  for (auto& z : ph1) z *= std::pow(two_pi, -1.5);
  out.resize(F.coeffs.size());
  separable_multiply(F.coeffs, out, l.m(), ph1, ph, ph);
  fft::dft3(l.m(), out.data(), out.data(), +1);
}

std::vector<double> lp_axis_factor(const Lattice& l, double N) {
  int m = l.m();
  std::vector<double> a(m);
  for (int j = 0; j < m; ++j) {
    double e = l.nyquist(j) ? 0.0 : eta1(l.frequency(j) / N);
    a[j] = e * e;
  }
  return a;
}

std::vector<double> dyadic_shells(const Lattice& l) {
  std::vector<double> out;
  for (int n = 1; n <= l.m() / 2; n *= 2) out.push_back(n);
  return out;
}

SpectralField lp_project(const SpectralField& F, double N, LpMode mode) {
  require(is_dyadic(N), "Littlewood-Paley scale must be a power of two");
  const Lattice& l = F.lattice;
  SpectralField out(l);
  auto a = lp_axis_factor(l, N);
  separable_multiply(F.coeffs, out.coeffs, l.m(), a, a, a);
  if (mode == LpMode::shell && N > 1.0) {
    SpectralField low(l);
    auto b = lp_axis_factor(l, N / 2);
    separable_multiply(F.coeffs, low.coeffs, l.m(), b, b, b);
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= low.coeffs[i];
  }
  return out;
}

SpectralField cube_project(const SpectralField& F, const Int3& center, int side) {
  require(side >= 1, "cube side must be positive");
  const Lattice& l = F.lattice;
  int m = l.m();
  std::vector<double> inside[3];
  for (int d = 0; d < 3; ++d) {
    inside[d].assign(m, 0.0);
    for (int j = 0; j < m; ++j) {
      double xi = l.frequency(j);
      double lo = center[d] - side / 2.0, hi = center[d] + side / 2.0;
      if (!l.nyquist(j) && xi >= lo && xi < hi) inside[d][j] = 1.0;
    }
  }
  SpectralField out(l);
  separable_multiply(F.coeffs, out.coeffs, m, inside[0], inside[1], inside[2]);
  return out;
}

SpectralField frame_operator(const SpectralField& F, double t0, const Vec3& x0) {
  require(std::isfinite(t0) && std::isfinite(x0[0]) && std::isfinite(x0[1]) && std::isfinite(x0[2]),
          "frame parameters must be finite");
  const Lattice& l = F.lattice;
  SpectralField out(l);
  auto p1 = axis_phase(l, t0, x0[0]);
  auto p2 = axis_phase(l, t0, x0[1]);
  auto p3 = axis_phase(l, t0, x0[2]);
  separable_multiply(F.coeffs, out.coeffs, l.m(), p1, p2, p3);
  return out;
}

TorusField frame_operator(const TorusField& f, double t0, const Vec3& x0) {
  return inverse_transform(frame_operator(forward_transform(f), t0, x0), f.timestamp);
}

kernels::Axes spectral_axes(const Lattice& l, std::vector<double>& storage) {
  int m = l.m();
  storage.resize(m);
  for (int j = 0; j < m; ++j) {
    double xi = l.nyquist(j) ? m / 2.0 : l.frequency(j);
    storage[j] = xi * xi;
  }
  return {m, storage.data(), nullptr};
}

double sobolev_norm(const SpectralField& F, double s) {
  std::vector<double> st;
  auto ax = spectral_axes(F.lattice, st);
  return std::sqrt(kernels::parallel::sobolev_abs2(F.coeffs.data(), ax, s, false));
}

double homogeneous_sobolev_norm(const SpectralField& F, double s) {
  std::vector<double> st;
  auto ax = spectral_axes(F.lattice, st);
  return std::sqrt(kernels::parallel::sobolev_abs2(F.coeffs.data(), ax, s, true));
}

cplx sobolev_inner(const SpectralField& F, const SpectralField& G, double s, bool homogeneous) {
  if (F.lattice != G.lattice) throw ValidationError("lattice mismatch");
  std::vector<double> st;
  auto ax = spectral_axes(F.lattice, st);
  return kernels::parallel::sobolev_inner(F.coeffs.data(), G.coeffs.data(), ax, s, homogeneous);
}

double log_lebesgue_integral(const TorusField& f, double p) {
  require(p >= 1.0 && std::isfinite(p), "Lebesgue exponent must be finite and >= 1");
  auto s = kernels::parallel::log_sum_abs_pow(f.values.data(), f.values.size(), p);
  return std::log(f.lattice.cell_volume()) + s.log_value();
}

double lebesgue_norm(const TorusField& f, double p) {
  require(p >= 1.0, "Lebesgue exponent must be >= 1");
  if (std::isinf(p)) return kernels::parallel::max_abs(f.values.data(), f.values.size());
  if (p <= 16.0) {
    double s = kernels::parallel::sum_abs_pow(f.values.data(), f.values.size(), p);
    return std::pow(f.lattice.cell_volume() * s, 1.0 / p);
  }
  double lg = log_lebesgue_integral(f, p);
  return std::isinf(lg) ? 0.0 : std::exp(lg / p);
}

Pairings inner_products(const TorusField& f, const SpectralField& F, const TorusField& g,
                        const SpectralField& G) {
  if (f.lattice != g.lattice || F.lattice != f.lattice || G.lattice != g.lattice)
    throw ValidationError("lattice mismatch");
  std::vector<double> st;
  auto ax = spectral_axes(F.lattice, st);
  Pairings out;
  kernels::Axes flat{f.lattice.m(), st.data(), nullptr};
  double cell = f.lattice.cell_volume();
  out.l2 = cell * kernels::parallel::sobolev_inner(f.values.data(), g.values.data(), flat, 0.0, false);
  out.hdot1 = kernels::parallel::sobolev_inner(F.coeffs.data(), G.coeffs.data(), ax, 1.0, true);
  out.h1 = kernels::parallel::sobolev_inner(F.coeffs.data(), G.coeffs.data(), ax, 1.0, false);
  out.l6 = cell * kernels::parallel::cubed_inner(f.values.data(), g.values.data(), flat);
  return out;
}

Pairings inner_products(const TorusField& f, const TorusField& g) {
  if (f.lattice != g.lattice) throw ValidationError("lattice mismatch");
  return inner_products(f, forward_transform(f), g, forward_transform(g));
}

}  // namespace tnls
