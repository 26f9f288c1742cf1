#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "tnls/critical_norms.hpp"
#include "tnls/fit.hpp"

using namespace tnls;
using namespace testutil;

namespace {

const double vol = std::pow(two_pi, 3);

Trajectory linear_trajectory(const TorusField& f, double a, double b, int n) {
  Trajectory tr;
  auto F = forward_transform(f);
  for (int k = 0; k <= n; ++k) {
    double t = k == n ? b : a + (b - a) * k / n;
    tr.times.push_back(t);
    tr.fields.push_back(inverse_transform(propagate(F, t), t));
  }
  tr.dt = (b - a) / n;
  return tr;
}

TorusField mode(const Lattice& l, cplx A, const Int3& xi) {
  return TorusField::from_function(l, [&](const Vec3& x) {
    return A * std::polar(1.0, xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2]);
  });
}

// Shell weight eta3(xi/N) - eta3(2 xi/N) of a single frequency.
double shell_weight(const Int3& xi, double N) {
  Vec3 v{double(xi[0]), double(xi[1]), double(xi[2])};
  auto e = [&](double s) { return eta3({v[0] / s, v[1] / s, v[2] / s}); };
  return N == 1.0 ? e(1.0) : e(N) - e(N / 2);
}

}  // namespace

TEST_SUITE("norms") {

TEST_CASE("Z-norm of zero and of single modes") {
  Lattice l(16);
  auto zero = linear_trajectory(TorusField(l), 0.0, 0.5, 10);
  CHECK(z_norm(zero, {0.0, 0.5}).value == 0.0);

  cplx A(0.7, -0.2);
  for (Int3 xi : {Int3{2, 0, 0}, Int3{3, 1, 0}, Int3{5, -6, 2}}) {
    auto tr = linear_trajectory(mode(l, A, xi), 0.0, 0.5, 20);
    Interval J{0.1, 0.4};
    auto r = z_norm(tr, J);
    double want = 0.0;
    for (double p : {4.1, 100.0}) {
      double s = 0.0;
      for (double N = 1; N <= 8; N *= 2) {
        double w = shell_weight(xi, N);
        s += std::pow(N, 5 - p / 2) * std::pow(std::abs(A) * w, p) * vol * J.length();
      }
      want += std::pow(s, 1.0 / p);
    }
    CHECK(r.value == doctest::Approx(want).epsilon(1e-6));
    double sum = 0.0;
    for (const auto& [N, c] : r.shells) sum += c;
    CHECK(sum == doctest::Approx(r.value).epsilon(1e-12));
    CHECK(r.window.a == doctest::Approx(0.1));
    CHECK(r.window.b == doctest::Approx(0.4));
  }
}

TEST_CASE("Z-norm homogeneity, windows and coverage") {
  Lattice l(16);
  auto f = random_field(l, 22, 6, 0.05);
  auto tr = linear_trajectory(f, 0.0, 2.5, 50);
  auto tab = shell_table(tr, {});
  auto base = z_norm(tab, {0.0, 2.5});
  auto scaled = tr;
  for (auto& u : scaled.fields) u = 3.5 * u;
  CHECK(z_norm(scaled, {0.0, 2.5}).value == doctest::Approx(3.5 * base.value).epsilon(1e-10));

  double prev = 0.0;
  for (double b : {0.3, 0.7, 1.0, 1.3, 1.9, 2.5}) {
    double v = z_norm(tab, {0.0, b}).value;
    CHECK(v >= prev * (1 - 1e-14));
    prev = v;
  }
  CHECK(base.window.b - base.window.a == doctest::Approx(1.0));

  ZNormSpec coarse;
  coarse.window_stride = 0.05;
  ZNormSpec fine;
  fine.window_stride = 0.001;
  double vc = z_norm(tab, {0.0, 2.5}, coarse).value, vf = z_norm(tab, {0.0, 2.5}, fine).value;
  CHECK(vc <= base.value * (1 + 1e-12));
  CHECK(vf <= base.value * (1 + 1e-12));
  CHECK(vf >= vc * (1 - 1e-12));
  CHECK(vf == doctest::Approx(base.value).epsilon(1e-4));

  CHECK_THROWS_AS(z_norm(tab, {-0.1, 1.0}), ValidationError);
  CHECK_THROWS_AS(z_norm(tab, {0.0, 2.6}), ValidationError);
  ZNormSpec bad;
  bad.window_length = 2.0;
  CHECK_THROWS_AS(z_norm(tab, {0.0, 1.0}, bad), ValidationError);
  CHECK(z_norm(tab, {1.0, 1.0}).value == 0.0);

  auto js = base.to_json();
  CHECK(js["value"].get<double>() == base.value);
  CHECK(js["shells"].size() == 4);
  CHECK(js["window"].size() == 2);
}

TEST_CASE("Z-norm of linear flows is controlled by H1 of the data") {
  Lattice l(16);
  std::vector<double> coarse, fine;
  for (int s = 0; s < 4; ++s) {
    auto f = random_field(l, 60 + s, 7, 0.02);
    double h1 = sobolev_norm(forward_transform(f), 1.0);
    coarse.push_back(z_norm(linear_trajectory(f, 0.0, 1.0, 800), {0.0, 1.0}).value / h1);
    fine.push_back(z_norm(linear_trajectory(f, 0.0, 1.0, 1600), {0.0, 1.0}).value / h1);
  }
  double c1 = *std::max_element(coarse.begin(), coarse.end());
  double c2 = *std::max_element(fine.begin(), fine.end());
  CHECK(std::isfinite(c1));
  CHECK(std::abs(c1 / c2 - 1.0) < 0.02);
}

TEST_CASE("X1 upper bound") {
  Lattice l(16);
  auto f = random_field(l, 2, 6, 0.05);
  auto tr = linear_trajectory(f, 0.0, 1.0, 10);
  Trajectory zero_forcing = tr;
  for (auto& u : zero_forcing.fields) u = TorusField(l, u.timestamp);
  double h1 = sobolev_norm(forward_transform(f), 1.0);
  for (double t : {0.0, 0.3, 1.0})
    CHECK(x1_upper(tr, zero_forcing, t) == doctest::Approx(h1).epsilon(1e-12));
  CHECK(x1_upper(zero_forcing, zero_forcing, 0.0) == 0.0);
  CHECK_THROWS_AS(x1_upper(tr, zero_forcing, 0.05), ValidationError);

  auto data = (0.8 / max_abs(f.values)) * random_field(l, 7, 2, 0.3);
  auto run = [&](double dt) {
    IVP ivp{data, 1.0, {0.0, 0.2}, dt, Dealias::zero_pad_3x, static_cast<int>(std::lround(0.01 / dt))};
    auto g = solve(ivp);
    Trajectory F = g;
    for (std::size_t k = 0; k < g.size(); ++k) F.fields[k] = inverse_transform(nonlinearity(g.fields[k], 1.0, g.dealias));
    return x1_upper(g, F, 0.0);
  };
  double a = run(0.002), b = run(0.001);
  CHECK(std::isfinite(a));
  CHECK(std::abs(a / b - 1.0) < 0.01);
}

TEST_CASE("N-norm upper bound") {
  Lattice l(16);
  Trajectory zero;
  for (int k = 0; k <= 4; ++k) {
    zero.times.push_back(0.1 * k);
    zero.fields.emplace_back(l, 0.1 * k);
  }
  CHECK(n_norm_upper(zero, {0.0, 0.4}) == 0.0);

  auto g = inverse_transform(lp_project(forward_transform(random_field(l, 3)), 4, LpMode::shell));
  Trajectory c;
  for (int k = 0; k <= 4; ++k) {
    c.times.push_back(0.1 * k);
    c.fields.push_back(g);
  }
  double pn = 0.0;
  for (double N : dyadic_shells(l)) pn += std::pow(sobolev_norm(lp_project(forward_transform(g), N, LpMode::shell), 1.0), 2);
  pn = std::sqrt(pn);
  CHECK(n_norm_upper(c, {0.0, 0.4}) == doctest::Approx(0.4 * pn).epsilon(1e-12));
  CHECK(n_norm_upper(c, {0.05, 0.25}) == doctest::Approx(0.2 * pn).epsilon(1e-12));

  // Two shells, time profiles cos(3t) and 1 + t^2: the L1H1 integrals are known in closed form.
  Xoshiro256 rng(9);
  SpectralField G1(l), G2(l);
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int d = -1; d <= 1; ++d) G1.at(a, b, d) = rng.complex_normal();
  // |xi_1| = 7 lies outside shell 1 and inside shells 2, 4 and 8 on M = 16.
  for (int a = -7; a <= 7; ++a)
    for (int b = -7; b <= 7; ++b) G2.at(7, a, b) = rng.complex_normal();
  auto s1 = sobolev_norm(lp_project(G1, 1, LpMode::shell), 1.0);
  auto g1 = inverse_transform(G1), g2 = inverse_transform(G2);
  Trajectory h;
  int n = 4000;
  double T = 0.5;
  for (int k = 0; k <= n; ++k) {
    double t = T * k / n;
    h.times.push_back(t);
    h.fields.push_back(std::cos(3 * t) * g1 + (1 + t * t) * g2);
  }
  std::vector<double> want_sq;
  auto F2 = forward_transform(g2);
  want_sq.push_back(s1 * std::sin(3 * T) / 3);
  for (double N = 2; N <= 8; N *= 2) {
    double sN = sobolev_norm(lp_project(F2, N, LpMode::shell), 1.0);
    want_sq.push_back(sN * (T + T * T * T / 3));
  }
  double want = 0.0;
  for (double v : want_sq) want += v * v;
  CHECK(n_norm_upper(h, {0.0, T}) == doctest::Approx(std::sqrt(want)).epsilon(1e-8));

  double whole = n_norm_upper(h, {0.0, T});
  CHECK(whole <= n_norm_upper(h, {0.0, 0.2}) + n_norm_upper(h, {0.2, T}) + 1e-12);
}

TEST_CASE("Z prime") {
  Lattice l(16);
  auto zero = linear_trajectory(TorusField(l), 0.0, 0.5, 10);
  zero.rho = 0.0;
  CHECK(zprime(zero, {0.0, 0.5}).value == 0.0);

  auto m = mode(l, cplx(0.5, 0.1), {2, 1, 0});
  auto tr = linear_trajectory(m, 0.0, 0.5, 10);
  tr.rho = 0.0;
  auto r = zprime(tr, {0.0, 0.5});
  double z = z_norm(tr, {0.0, 0.5}).value, h1 = sobolev_norm(forward_transform(m), 1.0);
  CHECK(r.value == doctest::Approx(std::sqrt(z * h1)).epsilon(1e-12));
  auto scaled = tr;
  for (auto& u : scaled.fields) u = 2.5 * u;
  CHECK(zprime(scaled, {0.0, 0.5}).value == doctest::Approx(2.5 * r.value).epsilon(1e-10));
  CHECK(std::find(r.surrogate_flags.begin(), r.surrogate_flags.end(), "X1-surrogate") != r.surrogate_flags.end());
}

TEST_CASE("Strichartz ratio") {
  Lattice l(16);
  cplx A(0.3, 0.4);
  Int3 xi{3, 1, 0};
  auto F = forward_transform(mode(l, A, xi));
  for (double N : {2.0, 4.0}) {
    double w = shell_weight(xi, N);
    auto r = strichartz_ratio(F, N, 6.0);
    double lhs = std::pow(vol * 2.0, 1.0 / 6.0) * std::abs(A) * w;
    CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-6));
    CHECK(r.ratio == doctest::Approx(lhs / (std::pow(N, 1.5 - 5.0 / 6.0) * std::abs(A) * w * std::pow(two_pi, 1.5)))
                         .epsilon(1e-6));
  }
  CHECK_THROWS_AS(strichartz_ratio(F, 2, 4.0), ValidationError);
  CHECK_THROWS_AS(strichartz_ratio(F, 3, 6.0), ValidationError);

  // N = 1 Gaussian-weighted data against a dense trapezoid oracle.
  Lattice s(8);
  SpectralField G(s);
  Xoshiro256 rng(5);
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c) G.at(a, b, c) = rng.complex_normal() * std::exp(-0.5 * (a * a + b * b + c * c));
  auto r = strichartz_ratio(G, 1, 6.0, {-1.0, 1.0}, 0.0, 1e-8);
  auto P = lp_project(G, 1, LpMode::shell);
  int n = 40000;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    double t = -1.0 + 2.0 * k / n;
    double v = std::pow(lebesgue_norm(inverse_transform(propagate(P, t)), 6.0), 6);
    sum += (k == 0 || k == n ? 0.5 : 1.0) * v * (2.0 / n);
  }
  CHECK(r.lhs == doctest::Approx(std::pow(sum, 1.0 / 6.0)).epsilon(1e-6));
}

TEST_CASE("trilinear ratio") {
  Lattice l(16);
  SpectralField zero(l);
  auto f = forward_transform(random_field(l, 1, 3));
  auto r0 = trilinear_ratio(zero, f, f, {4, 2, 1}, {0.0, 0.5}, 0.05);
  CHECK(r0.lhs == 0.0);
  cplx A1(0.5, 0), A2(0, 0.7), A3(0.3, 0.3);
  auto m1 = forward_transform(mode(l, A1, {1, 0, 0}));
  auto m2 = forward_transform(mode(l, A2, {0, -1, 0}));
  auto m3 = forward_transform(mode(l, A3, {0, 0, 0}));
  auto r = trilinear_ratio(m1, m2, m3, {1, 1, 1}, {0.0, 0.5}, 0.05);
  CHECK(r.lhs == doctest::Approx(std::abs(A1 * A2 * A3) * std::sqrt(vol * 0.5)).epsilon(1e-12));
  CHECK(r.scale == 2.0);
  CHECK(r.rhs_factor > 0.0);
  CHECK_THROWS_AS(trilinear_ratio(m1, m2, m3, {1, 2, 1}, {0.0, 0.5}, 0.05), ValidationError);
}

TEST_CASE("line fits") {
  std::vector<double> x{1, 2, 3, 4, 5}, y;
  for (double v : x) y.push_back(2.0 - 0.5 * v);
  auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.verdict == "fit");
  std::vector<double> noisy{1.0, 3.0, 0.5, 2.5, 1.2};
  auto g = fit_line(x, noisy);
  CHECK(g.verdict == "inconclusive");
  CHECK(g.ci_low < g.slope);
  CHECK(g.ci_high > g.slope);
  // t_{0.975, 3} = 3.182446305284263
  CHECK((g.ci_high - g.slope) / g.slope_stderr == doctest::Approx(3.182446305284263).epsilon(1e-10));
  auto h = fit_loglog({1, 2, 4, 8}, {1, 0.25, 0.0625, 0.015625});
  CHECK(h.slope == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK_THROWS_AS(fit_line({1, 1}, {2, 3}), ValidationError);
}

}
