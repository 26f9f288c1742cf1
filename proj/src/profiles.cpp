#include "tnls/profiles.hpp"

#include <algorithm>
#include <cmath>

#include "tnls/fft.hpp"

namespace tnls::profile {

std::string to_string(Kind k) {
  switch (k) {
    case Kind::bump: return "bump";
    case Kind::gaussian: return "gaussian";
    case Kind::callable: return "callable";
    case Kind::sampled: return "sampled";
  }
  return "?";
}

Kind parse_kind(const std::string& s) {
  if (s == "bump") return Kind::bump;
  if (s == "gaussian") return Kind::gaussian;
  if (s == "callable") return Kind::callable;
  if (s == "sampled") return Kind::sampled;
  throw ValidationError("unknown profile kind '" + s + "'");
}

namespace {

void check_radius(double r) {
  require(std::isfinite(r) && r > 0.0, "profile support radius must be positive");
  require(r <= 64.0, "profile support radius " + std::to_string(r) + " exceeds 64");
}

}  // namespace

EuclideanProfile bump(double radius, double amplitude) {
  check_radius(radius);
  EuclideanProfile p;
  p.kind = Kind::bump;
  p.support_radius = radius;
  p.even = true;
  double r2 = radius * radius;
  p.phi = [amplitude, r2](const Vec3& x) { return cplx(amplitude * mollifier_b(1.0 - norm2(x) / r2)); };
  p.hdot1 = hdot1_norm(p);
  return p;
}

EuclideanProfile default_bump() { return normalized(bump(1.0, 1.0)); }

EuclideanProfile gaussian(double sigma, double radius, double amplitude) {
  check_radius(radius);
  require(sigma > 0.0, "gaussian width must be positive");
  EuclideanProfile p;
  p.kind = Kind::gaussian;
  p.support_radius = radius;
  p.even = true;
  p.phi = [=](const Vec3& x) {
    double r = std::sqrt(norm2(x));
    double cut = r <= 0.8 * radius ? 1.0 : eta1(1.0 + 5.0 * (r / radius - 0.8));
    return cplx(amplitude * std::exp(-0.5 * r * r / (sigma * sigma)) * cut);
  };
  p.hdot1 = hdot1_norm(p);
  return p;
}

EuclideanProfile callable(std::function<cplx(const Vec3&)> f, double radius, bool even) {
  check_radius(radius);
  require(static_cast<bool>(f), "callable profile needs a function");
  EuclideanProfile p;
  p.kind = Kind::callable;
  p.support_radius = radius;
  p.even = even;
  p.phi = [f = std::move(f), radius](const Vec3& x) {
    if (std::fabs(x[0]) >= radius || std::fabs(x[1]) >= radius || std::fabs(x[2]) >= radius) return cplx(0.0);
    return f(x);
  };
  p.hdot1 = hdot1_norm(p);
  return p;
}

EuclideanProfile sampled(int n, double radius, std::vector<cplx> values) {
  check_radius(radius);
  require(n >= 2, "sampled profile needs at least 2 points per axis");
  require(values.size() == static_cast<std::size_t>(n) * n * n, "sampled profile: expected n^3 values");
  EuclideanProfile p;
  p.kind = Kind::sampled;
  p.support_radius = radius;
  p.even = false;
  double h = 2.0 * radius / n;
  auto v = std::make_shared<std::vector<cplx>>(std::move(values));
  p.phi = [v, n, h, radius](const Vec3& x) {
    // Cell-center coordinates; zero outside the outermost centers' hull.
    double u[3];
    int i0[3];
    for (int d = 0; d < 3; ++d) {
      double s = (x[d] + radius) / h - 0.5;
      if (s < 0.0 || s > n - 1) return cplx(0.0);
      i0[d] = std::min(static_cast<int>(s), n - 2);
      u[d] = s - i0[d];
    }
    cplx acc = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          double w = (a ? u[0] : 1 - u[0]) * (b ? u[1] : 1 - u[1]) * (c ? u[2] : 1 - u[2]);
          acc += w * (*v)[(static_cast<std::size_t>(i0[0] + a) * n + i0[1] + b) * n + i0[2] + c];
        }
    return acc;
  };
  p.hdot1 = hdot1_norm(p);
  return p;
}

EuclideanProfile combine(cplx a, const EuclideanProfile& phi, cplx b, const EuclideanProfile& psi) {
  EuclideanProfile p;
  p.kind = Kind::callable;
  p.support_radius = std::max(phi.support_radius, psi.support_radius);
  p.even = phi.even && psi.even;
  auto f = phi.phi, g = psi.phi;
  p.phi = [=](const Vec3& x) { return a * f(x) + b * g(x); };
  p.hdot1 = hdot1_norm(p);
  return p;
}

EuclideanProfile normalized(const EuclideanProfile& phi) {
  require(phi.hdot1 > 0.0, "cannot normalize a profile with zero Hdot1 norm");
  EuclideanProfile p = phi;
  double s = 1.0 / phi.hdot1;
  auto f = phi.phi;
  p.phi = [f, s](const Vec3& x) { return s * f(x); };
  p.hdot1 = hdot1_norm(p);
  return p;
}

namespace {

constexpr int norm_nodes = 128;

// DFT of samples on the periodic box [-r, r)^3.
struct BoxSpectrum {
  int n;
  double r;
  cvec c;
};

BoxSpectrum box_spectrum(const EuclideanProfile& phi, double r) {
  int n = norm_nodes;
  double h = 2.0 * r / n;
  BoxSpectrum b{n, r, cvec(static_cast<std::size_t>(n) * n * n)};
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        b.c[(static_cast<std::size_t>(i) * n + j) * n + k] = phi({-r + i * h, -r + j * h, -r + k * h});
  fft::dft3(n, b.c.data(), b.c.data(), -1);
  return b;
}

cplx box_inner(const BoxSpectrum& a, const BoxSpectrum& b, bool gradient) {
  int n = a.n;
  double h = 2.0 * a.r / n, dk = pi / a.r;
  std::vector<double> k2(n);
  for (int j = 0; j < n; ++j) {
    int m = j < n / 2 ? j : j - n;
    k2[j] = j == n / 2 ? 0.0 : (m * dk) * (m * dk);
  }
  cplx s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i == n / 2 || j == n / 2 || k == n / 2) continue;
        std::size_t idx = (static_cast<std::size_t>(i) * n + j) * n + k;
        double w = gradient ? k2[i] + k2[j] + k2[k] : 1.0;
        s += w * a.c[idx] * std::conj(b.c[idx]);
      }
  // Parseval on the box: int f conj(g) = h^3 / n^3 sum F conj(G).
  return s * (h * h * h / (static_cast<double>(n) * n * n));
}

}  // namespace

double hdot1_norm(const EuclideanProfile& phi) {
  auto b = box_spectrum(phi, phi.support_radius);
  return std::sqrt(std::max(0.0, box_inner(b, b, true).real()));
}

cplx hdot1_inner(const EuclideanProfile& phi, const EuclideanProfile& psi) {
  double r = std::max(phi.support_radius, psi.support_radius);
  return box_inner(box_spectrum(phi, r), box_spectrum(psi, r), true);
}

double l2_norm(const EuclideanProfile& phi) {
  auto b = box_spectrum(phi, phi.support_radius);
  return std::sqrt(std::max(0.0, box_inner(b, b, false).real()));
}

void Frame::validate() const {
  require(std::isfinite(N) && N >= 1.0, "frame scale N must be >= 1");
  require(std::isfinite(t0) && std::isfinite(x0[0]) && std::isfinite(x0[1]) && std::isfinite(x0[2]),
          "frame parameters must be finite");
}

namespace {

void check_transplant(double N, const Lattice& l, const TransplantOptions& opt, std::vector<std::string>* flags) {
  require(std::isfinite(N) && N >= 1.0, "rescale: N must be >= 1");
  require(opt.nodes >= 8, "rescale: need at least 8 quadrature nodes per axis");
  if (l.m() < 4 * N)
    throw ValidationError("rescale: lattice M=" + std::to_string(l.m()) + " under-resolves N=" + std::to_string(N) +
                          " (need M >= 4N)");
  if (flags && l.m() < 8 * N) flags->push_back("under-resolved: M < 8N");
}

// Half width of the cube carrying Q_N phi, in profile coordinates.
double cube_half_width(const EuclideanProfile& phi, double N) {
  return std::min(phi.support_radius, 2.0 * std::sqrt(N));
}

cplx cut_profile(const EuclideanProfile& phi, double N, const Vec3& z) {
  double s = 1.0 / std::sqrt(N);
  double c = eta3({z[0] * s, z[1] * s, z[2] * s});
  return c == 0.0 ? cplx(0.0) : c * phi(z);
}

// out[j1][j2][j3] = sum E[j1][a] E[j2][b] E[j3][c] V[a][b][c]; E is K x G.
// Split real arithmetic so the inner loops vectorize.
cvec separable_transform(const std::vector<cplx>& V, int G, const std::vector<cplx>& E, int K) {
  auto* e = reinterpret_cast<const double*>(E.data());
  std::vector<cplx> T1(static_cast<std::size_t>(G) * G * K), T2(static_cast<std::size_t>(G) * K * K);
#pragma omp parallel for schedule(static)
  for (int ab = 0; ab < G * G; ++ab) {
    const cplx* v = V.data() + static_cast<std::size_t>(ab) * G;
    for (int j = 0; j < K; ++j) {
      double re = 0.0, im = 0.0;
      const double* row = e + 2 * static_cast<std::size_t>(j) * G;
      for (int c = 0; c < G; ++c) {
        re += row[2 * c] * v[c].real() - row[2 * c + 1] * v[c].imag();
        im += row[2 * c] * v[c].imag() + row[2 * c + 1] * v[c].real();
      }
      T1[static_cast<std::size_t>(ab) * K + j] = {re, im};
    }
  }
#pragma omp parallel for schedule(static)
  for (int a = 0; a < G; ++a)
    for (int j2 = 0; j2 < K; ++j2) {
      auto* out = reinterpret_cast<double*>(T2.data() + (static_cast<std::size_t>(a) * K + j2) * K);
      for (int b = 0; b < G; ++b) {
        double cr = e[2 * (static_cast<std::size_t>(j2) * G + b)], ci = e[2 * (static_cast<std::size_t>(j2) * G + b) + 1];
        auto* in = reinterpret_cast<const double*>(T1.data() + (static_cast<std::size_t>(a) * G + b) * K);
        for (int j3 = 0; j3 < K; ++j3) {
          out[2 * j3] += cr * in[2 * j3] - ci * in[2 * j3 + 1];
          out[2 * j3 + 1] += cr * in[2 * j3 + 1] + ci * in[2 * j3];
        }
      }
    }
  cvec out(static_cast<std::size_t>(K) * K * K);
  std::size_t slab = static_cast<std::size_t>(K) * K;
#pragma omp parallel for schedule(static)
  for (int j1 = 0; j1 < K; ++j1) {
    auto* o = reinterpret_cast<double*>(out.data() + j1 * slab);
    for (int a = 0; a < G; ++a) {
      double cr = e[2 * (static_cast<std::size_t>(j1) * G + a)], ci = e[2 * (static_cast<std::size_t>(j1) * G + a) + 1];
      auto* in = reinterpret_cast<const double*>(T2.data() + a * slab);
      for (std::size_t s = 0; s < slab; ++s) {
        o[2 * s] += cr * in[2 * s] - ci * in[2 * s + 1];
        o[2 * s + 1] += cr * in[2 * s + 1] + ci * in[2 * s];
      }
    }
  }
  return out;
}

// Coefficients of f_N at the frequencies xi_j (Nyquist entries given as a
// flag), by the midpoint rule on the cube carrying Q_N phi.
cvec transplant_coeffs(const EuclideanProfile& phi, double N, const Lattice& l, const std::vector<int>& freqs,
                       const std::vector<char>& zero, int nodes) {
  double rho = cube_half_width(phi, N);
  int M = l.m();
  // Keep at least four nodes per shortest lattice wavelength across the cube.
  int G = std::max(nodes, static_cast<int>(std::ceil(4.0 * rho * M / (pi * N))));
  double h = 2.0 * rho / G;
  std::vector<double> z(G);
  for (int c = 0; c < G; ++c) z[c] = -rho + (c + 0.5) * h;
  std::vector<cplx> V(static_cast<std::size_t>(G) * G * G);
#pragma omp parallel for schedule(static)
  for (int a = 0; a < G; ++a)
    for (int b = 0; b < G; ++b)
      for (int c = 0; c < G; ++c)
        V[(static_cast<std::size_t>(a) * G + b) * G + c] = cut_profile(phi, N, {z[a], z[b], z[c]});
  int K = static_cast<int>(freqs.size());
  std::vector<cplx> E(static_cast<std::size_t>(K) * G);
  for (int j = 0; j < K; ++j)
    for (int c = 0; c < G; ++c)
      E[static_cast<std::size_t>(j) * G + c] = zero[j] ? cplx(0.0) : h * std::polar(1.0, -z[c] * freqs[j] / N);
  auto out = separable_transform(V, G, E, K);
  double scale = std::pow(two_pi, -1.5) * std::pow(N, -2.5);
  for (auto& v : out) v *= scale;
  return out;
}

cplx transplant_point(const EuclideanProfile& phi, double N, double x1, double x2, double x3) {
  auto wrap = [](double x) { return x > pi ? x - two_pi : x; };
  Vec3 y{wrap(x1), wrap(x2), wrap(x3)};
  return std::sqrt(N) * cut_profile(phi, N, {N * y[0], N * y[1], N * y[2]});
}

}  // namespace

SpectralField rescale_spectrum(const EuclideanProfile& phi, double N, const Lattice& l, const TransplantOptions& opt,
                               std::vector<std::string>* flags) {
  check_transplant(N, l, opt, flags);
  if (opt.mode == Transplant::sampled) return forward_transform(rescale_to_torus(phi, N, l, opt, nullptr));
  int M = l.m();
  std::vector<int> freqs(M);
  std::vector<char> zero(M, 0);
  for (int j = 0; j < M; ++j) {
    freqs[j] = l.frequency(j);
    zero[j] = l.nyquist(j);
  }
  return SpectralField(l, transplant_coeffs(phi, N, l, freqs, zero, opt.nodes));
}

EvenSpectralField rescale_spectrum_even(const EuclideanProfile& phi, double N, const Lattice& l,
                                        const TransplantOptions& opt, std::vector<std::string>* flags) {
  require(phi.even, "rescale: the even path needs a coordinate-even profile");
  check_transplant(N, l, opt, flags);
  if (opt.mode == Transplant::sampled) return even::forward(rescale_to_torus_even(phi, N, l, opt, nullptr));
  int n = l.m() / 2 + 1;
  std::vector<int> freqs(n);
  std::vector<char> zero(n, 0);
  for (int j = 0; j < n; ++j) freqs[j] = j;
  zero[n - 1] = 1;
  EvenSpectralField F(l);
  F.coeffs = transplant_coeffs(phi, N, l, freqs, zero, opt.nodes);
  return F;
}

TorusField rescale_to_torus(const EuclideanProfile& phi, double N, const Lattice& l, const TransplantOptions& opt,
                            std::vector<std::string>* flags) {
  check_transplant(N, l, opt, flags);
  if (opt.mode == Transplant::band_limited) return inverse_transform(rescale_spectrum(phi, N, l, opt, nullptr));
  TorusField f(l);
  int M = l.m();
  double h = l.spacing();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      for (int k = 0; k < M; ++k) f(i, j, k) = transplant_point(phi, N, i * h, j * h, k * h);
  return f;
}

EvenTorusField rescale_to_torus_even(const EuclideanProfile& phi, double N, const Lattice& l,
                                     const TransplantOptions& opt, std::vector<std::string>* flags) {
  require(phi.even, "rescale: the even path needs a coordinate-even profile");
  check_transplant(N, l, opt, flags);
  if (opt.mode == Transplant::band_limited) return even::inverse(rescale_spectrum_even(phi, N, l, opt, nullptr));
  EvenTorusField f(l);
  int n = f.n();
  double h = l.spacing();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) f(i, j, k) = transplant_point(phi, N, i * h, j * h, k * h);
  return f;
}

SpectralField make_profile_spectrum(const EuclideanProfile& phi, const Frame& fr, const Lattice& l,
                                    const TransplantOptions& opt, std::vector<std::string>* flags) {
  fr.validate();
  return frame_operator(rescale_spectrum(phi, fr.N, l, opt, flags), fr.t0, fr.x0);
}

TorusField make_profile(const EuclideanProfile& phi, const Frame& fr, const Lattice& l, const TransplantOptions& opt,
                        std::vector<std::string>* flags) {
  return inverse_transform(make_profile_spectrum(phi, fr, l, opt, flags));
}

double torus_distance(const Vec3& a, const Vec3& b) {
  double s = 0.0;
  for (int d = 0; d < 3; ++d) {
    double u = std::remainder(a[d] - b[d], two_pi);
    s += u * u;
  }
  return std::sqrt(s);
}

double frame_divergence(const Frame& a, const Frame& b) {
  a.validate();
  b.validate();
  auto one = [](const Frame& p, const Frame& q) {
    return std::fabs(std::log(p.N / q.N)) + p.N * p.N * std::fabs(p.t0 - q.t0) + p.N * torus_distance(p.x0, q.x0);
  };
  return std::max(one(a, b), one(b, a));
}

bool classified_orthogonal(const std::vector<Frame>& a, const std::vector<Frame>& b, double threshold) {
  require(a.size() == b.size(), "frame sequences differ in length");
  if (a.empty()) return false;
  double prev = -1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = frame_divergence(a[k], b[k]);
    if (d < prev) return false;
    prev = d;
  }
  return prev > threshold;
}

namespace {

bool nonincreasing(const std::vector<double>& v, const std::vector<double>& scale, double floor) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    double cur = v[k] <= floor * scale[k] ? 0.0 : v[k];
    double prev = v[k - 1] <= floor * scale[k - 1] ? 0.0 : v[k - 1];
    if (cur > prev * (1 + 1e-12)) return false;
  }
  return true;
}

bool centered(const Frame& f) { return f.x0[0] == 0.0 && f.x0[1] == 0.0 && f.x0[2] == 0.0; }

}  // namespace

OrthogonalityReport orthogonality_decay(const EuclideanProfile& psi, const EuclideanProfile& phi,
                                        const std::vector<Frame>& a, const std::vector<Frame>& b,
                                        const std::vector<int>& lattices, const TransplantOptions& opt) {
  require(a.size() == b.size() && a.size() == lattices.size(), "orthogonality: sequences differ in length");
  OrthogonalityReport rep;
  rep.target_h1 = hdot1_inner(psi, phi).real();
  std::vector<double> h1, l2, l6, s1, s2, s6;
  for (std::size_t k = 0; k < a.size(); ++k) {
    Lattice l(lattices[k]);
    PairingRow row;
    row.k = k;
    row.a = a[k];
    row.b = b[k];
    row.M = l.m();
    row.divergence = frame_divergence(a[k], b[k]);
    double na1, nb1, na6, nb6;
    if (psi.even && phi.even && centered(a[k]) && centered(b[k])) {
      // Half-grid path: frames differ at most in scale and time.
      auto A = rescale_spectrum_even(psi, a[k].N, l, opt, &row.flags);
      auto B = rescale_spectrum_even(phi, b[k].N, l, opt, &row.flags);
      even::propagate_inplace(A, -a[k].t0);
      even::propagate_inplace(B, -b[k].t0);
      auto fa = even::inverse(A), fb = even::inverse(B);
      std::vector<double> f2, w;
      auto ax = even::physical_axes(l, f2, w);
      double cell = l.cell_volume();
      row.h1 = even::sobolev_inner(A, B, 1.0, false);
      row.l2 = cell * kernels::parallel::sobolev_inner(fa.values.data(), fb.values.data(), ax, 0.0, false);
      row.l6 = cell * kernels::parallel::cubed_inner(fa.values.data(), fb.values.data(), ax);
      row.l2_norm_a = std::sqrt(cell * kernels::parallel::sobolev_abs2(fa.values.data(), ax, 0.0, false));
      row.l2_norm_b = std::sqrt(cell * kernels::parallel::sobolev_abs2(fb.values.data(), ax, 0.0, false));
      na1 = even::sobolev_norm(A, 1.0);
      nb1 = even::sobolev_norm(B, 1.0);
      na6 = std::pow(even::lebesgue_norm(fa, 6.0), 3);
      nb6 = std::pow(even::lebesgue_norm(fb, 6.0), 3);
    } else {
      auto A = make_profile_spectrum(psi, a[k], l, opt, &row.flags);
      auto B = make_profile_spectrum(phi, b[k], l, opt, &row.flags);
      auto fa = inverse_transform(A), fb = inverse_transform(B);
      auto pr = inner_products(fa, A, fb, B);
      row.h1 = pr.h1;
      row.l2 = pr.l2;
      row.l6 = pr.l6;
      row.l2_norm_a = lebesgue_norm(fa, 2.0);
      row.l2_norm_b = lebesgue_norm(fb, 2.0);
      na1 = sobolev_norm(A, 1.0);
      nb1 = sobolev_norm(B, 1.0);
      na6 = std::pow(lebesgue_norm(fa, 6.0), 3);
      nb6 = std::pow(lebesgue_norm(fb, 6.0), 3);
    }
    std::sort(row.flags.begin(), row.flags.end());
    row.flags.erase(std::unique(row.flags.begin(), row.flags.end()), row.flags.end());
    h1.push_back(std::abs(row.h1));
    l2.push_back(std::abs(row.l2));
    l6.push_back(row.l6);
    s1.push_back(na1 * nb1);
    s2.push_back(row.l2_norm_a * row.l2_norm_b);
    s6.push_back(na6 * nb6);
    rep.rows.push_back(std::move(row));
  }
  rep.h1_decreasing = nonincreasing(h1, s1, rep.floor);
  rep.l2_decreasing = nonincreasing(l2, s2, rep.floor);
  rep.l6_decreasing = nonincreasing(l6, s6, rep.floor);
  return rep;
}

nlohmann::ordered_json OrthogonalityReport::to_json() const {
  nlohmann::ordered_json j;
  j["target_h1"] = target_h1;
  j["floor"] = floor;
  j["h1_decreasing"] = h1_decreasing;
  j["l2_decreasing"] = l2_decreasing;
  j["l6_decreasing"] = l6_decreasing;
  auto frame = [](const Frame& f) { return nlohmann::ordered_json{f.N, f.t0, f.x0[0], f.x0[1], f.x0[2]}; };
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["k"] = r.k;
    o["frame_a"] = frame(r.a);
    o["frame_b"] = frame(r.b);
    o["M"] = r.M;
    o["divergence"] = r.divergence;
    o["h1"] = {r.h1.real(), r.h1.imag()};
    o["l2"] = {r.l2.real(), r.l2.imag()};
    o["l6"] = r.l6;
    o["l2_norm_a"] = r.l2_norm_a;
    o["l2_norm_b"] = r.l2_norm_b;
    o["flags"] = r.flags;
    j["rows"].push_back(o);
  }
  return j;
}

PythagoreanReport pythagorean_report(const TorusField& g, const std::vector<TorusField>& profiles,
                                     const TorusField& remainder) {
  const Lattice& l = g.lattice;
  require(remainder.lattice == l, "pythagorean_report: lattice mismatch");
  for (const auto& p : profiles) require(p.lattice == l, "pythagorean_report: lattice mismatch");
  TorusField f = g;
  for (const auto& p : profiles) f = f + p;
  f = f + remainder;
  auto pieces = [&](auto&& norm) {
    double s = norm(g);
    for (const auto& p : profiles) s += norm(p);
    return s + norm(remainder);
  };
  auto l2 = [](const TorusField& u) { return std::pow(lebesgue_norm(u, 2.0), 2); };
  auto h1 = [](const TorusField& u) { return std::pow(homogeneous_sobolev_norm(forward_transform(u), 1.0), 2); };
  auto l6 = [](const TorusField& u) { return std::pow(lebesgue_norm(u, 6.0), 6); };
  auto defect = [](double total, double sum) { return total == 0.0 ? std::fabs(sum) : std::fabs(total - sum) / total; };
  PythagoreanReport r;
  r.l2_total = l2(f);
  r.l2_pieces = pieces(l2);
  r.l2_defect = defect(r.l2_total, r.l2_pieces);
  r.h1_total = h1(f);
  r.h1_pieces = pieces(h1);
  r.h1_defect = defect(r.h1_total, r.h1_pieces);
  r.l6_total = l6(f);
  r.l6_pieces = pieces(l6);
  r.l6_defect = defect(r.l6_total, r.l6_pieces);
  return r;
}

nlohmann::ordered_json PythagoreanReport::to_json() const {
  nlohmann::ordered_json j;
  j["l2"] = {{"total", l2_total}, {"pieces", l2_pieces}, {"defect", l2_defect}};
  j["hdot1"] = {{"total", h1_total}, {"pieces", h1_pieces}, {"defect", h1_defect}};
  j["l6"] = {{"total", l6_total}, {"pieces", l6_pieces}, {"defect", l6_defect}};
  return j;
}

double smallness(const TorusField& r, const std::vector<double>& times) {
  auto R = forward_transform(r);
  double best = 0.0;
  for (double N : dyadic_shells(r.lattice)) {
    auto P = lp_project(R, N, LpMode::shell);
    for (double t : times)
      best = std::max(best, lebesgue_norm(inverse_transform(propagate(P, t)), infinity) / std::sqrt(N));
  }
  return best;
}

}  // namespace tnls::profile
