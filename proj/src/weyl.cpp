#include "tnls/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "tnls/fft.hpp"
#include "tnls/spectral.hpp"

namespace tnls::weyl {

namespace {

constexpr long double two_pi_l = 6.283185307179586476925286766559005768L;

void check_M(int M) { require(M >= 1 && is_dyadic(M), "kernel level M must be a power of two, got " + std::to_string(M)); }

// n^2 t mod 2pi, with the product formed in extended precision.
double reduced_phase(double t, long long n2) {
  long double p = std::fmod(static_cast<long double>(t) * n2, two_pi_l);
  return static_cast<double>(p);
}

struct Coeffs {
  int M;
  int nmax;                // |n| <= nmax carries weight
  std::vector<cplx> c;     // c[n + nmax] = eta1(n/M)^2 e^{-itn^2}
};

Coeffs coefficients(int M, double t) {
  Coeffs k{M, 2 * M - 1, {}};
  k.c.resize(2 * k.nmax + 1);
  for (int n = -k.nmax; n <= k.nmax; ++n) {
    double e = eta1(static_cast<double>(n) / M);
    k.c[n + k.nmax] = std::polar(e * e, -reduced_phase(t, static_cast<long long>(n) * n));
  }
  return k;
}

double abs_at(const Coeffs& k, double y) {
  cplx z = std::polar(1.0, -y), zn = std::polar(1.0, y * k.nmax), s = 0.0;
  for (const auto& c : k.c) {
    s += c * zn;
    zn *= z;
  }
  return std::abs(s);
}

// Golden-section maximization of f on [a, b].
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, int iters) {
  const double g = 0.6180339887498949;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

// Indices of the largest local maxima of a sampled curve, best first.
std::vector<std::size_t> top_maxima(const std::vector<double>& v, std::size_t count, bool periodic) {
  std::vector<std::size_t> idx;
  std::size_t n = v.size();
  for (std::size_t j = 0; j < n; ++j) {
    double l = j > 0 ? v[j - 1] : (periodic ? v[n - 1] : -infinity);
    double r = j + 1 < n ? v[j + 1] : (periodic ? v[0] : -infinity);
    if (v[j] >= l && v[j] >= r) idx.push_back(j);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  if (idx.size() > count) idx.resize(count);
  return idx;
}

Sup1D refine_sup(const Coeffs& k, const std::vector<double>& grid_abs, int refine) {
  std::size_t L = grid_abs.size();
  double h = two_pi / L;
  Sup1D best;
  double grid_best = *std::max_element(grid_abs.begin(), grid_abs.end());
  for (std::size_t j : top_maxima(grid_abs, refine, true)) {
    if (grid_abs[j] < 0.95 * grid_best) break;
    double y0 = h * j;
    if (grid_abs[j] > best.value) best = {grid_abs[j], y0};
    auto [y, v] = golden_max([&](double y) { return abs_at(k, y); }, y0 - h, y0 + h, 40);
    if (v > best.value) best = {v, y};
  }
  return best;
}

Sup1D sup_impl(int M, double t, std::vector<cplx>& buf) {
  auto k = coefficients(M, t);
  int L = 64 * M;
  buf.assign(L, cplx(0.0));
  for (int n = -k.nmax; n <= k.nmax; ++n) buf[(n + L) % L] = k.c[n + k.nmax];
  fft::dft1(L, buf.data(), buf.data(), -1);
  std::vector<double> a(L);
  for (int j = 0; j < L; ++j) a[j] = std::abs(buf[j]);
  return refine_sup(k, a, 16);
}

std::vector<double> uniform_grid(Interval w, double spacing) {
  if (w.length() <= 0.0) return {w.a};
  auto n = static_cast<long long>(std::ceil(w.length() / spacing - 1e-9));
  n = std::max<long long>(n, 1);
  std::vector<double> t(n + 1);
  for (long long k = 0; k <= n; ++k) t[k] = k == n ? w.b : w.a + w.length() * static_cast<double>(k) / n;
  return t;
}

// Sampled max of g over a grid, then golden refinement around the best few
// local maxima (clipped to the window).
template <class G>
WindowSup sampled_sup(const std::vector<double>& ts, Interval w, G&& g, std::size_t refine,
                      bool parallel) {
  std::vector<double> v(ts.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long long k = 0; k < static_cast<long long>(ts.size()); ++k) v[k] = g(ts[k]);
  } else {
    for (std::size_t k = 0; k < ts.size(); ++k) v[k] = g(ts[k]);
  }
  WindowSup r;
  r.window = w;
  r.resolution = ts.size() > 1 ? w.length() / (ts.size() - 1) : 0.0;
  r.samples = static_cast<long long>(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k)
    if (v[k] > r.value) {
      r.value = v[k];
      r.t = ts[k];
    }
  if (ts.size() > 1)
    for (std::size_t k : top_maxima(v, refine, false)) {
      double lo = k > 0 ? ts[k - 1] : ts[k], hi = k + 1 < ts.size() ? ts[k + 1] : ts[k];
      auto [t, val] = golden_max(g, lo, hi, 24);
      r.samples += 26;
      if (val > r.value) {
        r.value = val;
        r.t = t;
      }
    }
  return r;
}

void check_window(double N, double T) {
  require(N >= 1.0, "window_linf_lp: N must be >= 1");
  require(T >= 1.0, "window_linf_lp: T must be >= 1");
  require(T <= N, "window_linf_lp: T > N gives an empty window");
}

// Imaginary parts at rounding level (<= 1e-14 max |z|) count as real: the sup over
// -t then equals the sup over t up to that level.
bool is_real(const cvec& v) {
  double im = 0.0, mx = 0.0;
  for (const auto& z : v) {
    im = std::max(im, std::fabs(z.imag()));
    mx = std::max(mx, std::abs(z));
  }
  return im <= 1e-14 * mx;
}

}  // namespace

cplx kernel_1d(int M, double y, double t) {
  check_M(M);
  cplx s = 0.0;
  for (int n = -(2 * M - 1); n <= 2 * M - 1; ++n) {
    double e = eta1(static_cast<double>(n) / M);
    if (e == 0.0) continue;
    long double ph = static_cast<long double>(t) * n * n + static_cast<long double>(y) * n;
    s += std::polar(e * e, -static_cast<double>(std::fmod(ph, two_pi_l)));
  }
  return s;
}

cplx kernel_eval(int M, const Vec3& x, double t) {
  return kernel_1d(M, x[0], t) * kernel_1d(M, x[1], t) * kernel_1d(M, x[2], t);
}

DirichletApprox dirichlet_approx(double t, long long M) {
  require(M >= 1, "dirichlet_approx: M must be >= 1");
  require(std::isfinite(t), "dirichlet_approx: t must be finite");
  long double theta = static_cast<long double>(t) / two_pi_l;
  long double fl = std::floor(theta);
  long double r = theta - fl;
  // r ~ P / 2^62 exactly, then continued fraction convergents in integers.
  using i128 = __int128;
  const i128 Q = static_cast<i128>(1) << 62;
  i128 P = static_cast<i128>(std::llround(std::ldexp(r, 62)));
  i128 x = P, y = Q;
  i128 h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  i128 pa = 0, pq = 1;
  while (y != 0) {
    i128 ai = x / y;
    i128 h = ai * h1 + h2, k = ai * k1 + k2;
    if (k > M) break;
    pa = h;
    pq = k;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    i128 rem = x - ai * y;
    x = y;
    y = rem;
  }
  DirichletApprox d;
  d.q = static_cast<long long>(pq);
  d.a = static_cast<long long>(pa) + static_cast<long long>(fl) * d.q;
  d.beta = static_cast<double>(r - static_cast<long double>(pa) / static_cast<long double>(pq));
  // Offsets below the representation error of t itself are not resolvable.
  if (std::fabs(d.beta) <= 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(t) / (2 * pi)) d.beta = 0.0;
  long long g = std::gcd(d.a < 0 ? -d.a : d.a, d.q);
  if (g != 1 || d.q < 1 || d.q > M || std::fabs(d.beta) > 1.0 / (static_cast<double>(M) * d.q) * (1 + 1e-12))
    throw NumericalAbort("dirichlet_approx: postcondition failed at t=" + std::to_string(t));
  return d;
}

double majorant(int M, double t) {
  check_M(M);
  auto d = dirichlet_approx(t, M);
  double v = M / (std::sqrt(static_cast<double>(d.q)) * (1.0 + M * std::sqrt(std::fabs(d.beta))));
  return v * v * v;
}

KernelSample sample(int M, const Vec3& x, double t) { return {M, x, t, kernel_eval(M, x, t), majorant(M, t)}; }

Sup1D sup_x_1d(int M, double t) {
  check_M(M);
  std::vector<cplx> buf;
  return sup_impl(M, t, buf);
}

WindowSup extinction_sup(int M, double S, int points_per_period) {
  check_M(M);
  require(S >= 1.0 && S <= M, "extinction_sup: S must lie in [1, M]");
  require(points_per_period >= 1, "extinction_sup: points_per_period must be >= 1");
  Interval w{S / (static_cast<double>(M) * M), 1.0 / S};
  double spacing = 1.0 / (static_cast<double>(M) * M * points_per_period);
  auto ts = uniform_grid(w, spacing);
  auto g = [M](double t) {
    thread_local std::vector<cplx> buf;
    double s = sup_impl(M, t, buf).value;
    return s * s * s;
  };
  return sampled_sup(ts, w, g, 4, true);
}

namespace {

template <class Spec, class Prop, class Inv, class Norm>
WindowSup window_sup(const Spec& F, bool real, double N, double T, double p, int ppp, Prop prop, Inv inv, Norm norm) {
  check_window(N, T);
  require(p >= 1.0, "window_linf_lp: p must be >= 1");
  require(ppp >= 1, "window_linf_lp: points_per_period must be >= 1");
  Interval w{T / (N * N), 1.0 / T};
  double spacing = 1.0 / (N * N * ppp);
  auto g = [&](double t) {
    Spec G = F;
    prop(G, t);
    return norm(inv(G), p);
  };
  auto ts = uniform_grid(w, spacing);
  auto best = sampled_sup(ts, w, g, 2, false);
  if (!real) {
    auto gm = [&](double t) { return g(-t); };
    auto neg = sampled_sup(ts, w, gm, 2, false);
    best.samples += neg.samples;
    if (neg.value > best.value) {
      best.value = neg.value;
      best.t = -neg.t;
    }
  }
  return best;
}

}  // namespace

WindowSup window_linf_lp(const TorusField& f, double N, double T, double p, int points_per_period) {
  return window_sup(
      forward_transform(f), is_real(f.values), N, T, p, points_per_period,
      [](SpectralField& G, double t) { propagate_inplace(G, t); },
      [](const SpectralField& G) { return inverse_transform(G); },
      [](const TorusField& u, double q) { return lebesgue_norm(u, q); });
}

WindowSup window_linf_lp(const EvenTorusField& f, double N, double T, double p, int points_per_period) {
  return window_sup(
      even::forward(f), is_real(f.values), N, T, p, points_per_period,
      [](EvenSpectralField& G, double t) { even::propagate_inplace(G, t); },
      [](const EvenSpectralField& G) { return even::inverse(G); },
      [](const EvenTorusField& u, double q) { return even::lebesgue_norm(u, q); });
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, const std::string& param_name) {
  os << "M," << param_name << ",value,normalized_value,grid_resolution\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.M, r.param, r.value, r.normalized,
                  r.resolution);
    os << buf;
  }
}

}  // namespace tnls::weyl
