#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "tnls/spectral.hpp"

using namespace tnls;
using namespace testutil;

namespace {
const double c32 = std::pow(two_pi, 1.5);
}

TEST_SUITE("spectral") {

TEST_CASE("cutoff profile properties") {
  CHECK(eta1(0.0) == 1.0);
  CHECK(eta1(1.0) == 1.0);
  CHECK(eta1(2.0) == 0.0);
  CHECK(eta1(-1.5) == doctest::Approx(0.5));
  double prev = 1.0;
  for (double y = 1.0; y <= 2.0; y += 1e-3) {
    double v = eta1(y);
    CHECK(v <= prev + 1e-15);
    CHECK(v >= 0.0);
    CHECK(eta1(-y) == v);
    prev = v;
  }
  CHECK(eta3({0.5, -0.9, 1.0}) == 1.0);
  CHECK(eta3({1.5, 0.0, 0.0}) == doctest::Approx(0.25));
  CHECK(eta_radial(2.5) == 0.0);
}

TEST_CASE("lattice validation") {
  CHECK_THROWS_AS(Lattice(3), ValidationError);
  CHECK_THROWS_AS(Lattice(2), ValidationError);
  CHECK_THROWS_AS(Lattice(7), ValidationError);
  Lattice l(8);
  CHECK(l.frequency(3) == 3);
  CHECK(l.frequency(4) == -4);
  CHECK(l.frequency(7) == -1);
  CHECK(l.max_shell() == 4);
}

TEST_CASE("forward transform of constants and single modes") {
  Lattice l(8);
  auto one = TorusField::from_function(l, [](const Vec3&) { return cplx(1.0); });
  auto F = forward_transform(one);
  CHECK(std::abs(F.at(0, 0, 0) - c32) < 1e-12);
  F.at(0, 0, 0) = 0.0;
  CHECK(max_abs(F.coeffs) < 1e-12);

  auto wave = TorusField::from_function(l, [](const Vec3& x) { return std::polar(1.0, x[0]); });
  auto W = forward_transform(wave);
  CHECK(std::abs(W.at(1, 0, 0) - c32) < 1e-12);
  W.at(1, 0, 0) = 0.0;
  CHECK(max_abs(W.coeffs) < 1e-12);
}

TEST_CASE("forward transform rejects non-finite samples") {
  Lattice l(4);
  TorusField f(l);
  f(1, 2, 3) = cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS(forward_transform(f), ValidationError);
}

TEST_CASE("4^3 transforms match direct summation") {
  Lattice l(4);
  Xoshiro256 rng(11);
  TorusField f(l);
  for (auto& z : f.values) z = rng.complex_normal();
  auto F = forward_transform(f);
  auto D = direct_forward(f);
  CHECK(rel_diff(F.coeffs, D.coeffs) < 1e-12);

  SpectralField G(l);
  for (auto& z : G.coeffs) z = rng.complex_normal();
  G.zero_nyquist();
  auto g = inverse_transform(G);
  auto d = direct_inverse(G);
  CHECK(rel_diff(g.values, d.values) < 1e-12);
}

TEST_CASE("round trip") {
  for (int m : {8, 16, 32}) {
    Lattice l(m);
    auto f = random_field(l, 100 + m);
    auto back = inverse_transform(forward_transform(f));
    CHECK(rel_diff(back.values, f.values) < 1e-12);
  }
  Lattice l(8);
  SpectralField delta(l);
  delta.at(0, 0, 0) = c32;
  auto one = inverse_transform(delta);
  for (const auto& z : one.values) CHECK(std::abs(z - 1.0) < 1e-13);
}

TEST_CASE("propagator phases, unitarity, group law") {
  Lattice l(16);
  auto F = forward_transform(random_field(l, 5));
  auto same = propagate(F, 0.0);
  CHECK(max_abs_diff(same.coeffs, F.coeffs) == 0.0);

  SpectralField mode(l);
  mode.at(1, 0, 0) = 1.0;
  auto rot = propagate(mode, pi);
  CHECK(std::abs(rot.at(1, 0, 0) + 1.0) < 1e-15);

  for (double t : {0.1, 1.7, -3.3, 250.0}) {
    auto G = propagate(F, t);
    double n0 = sobolev_norm(F, 0.0), n1 = sobolev_norm(G, 0.0);
    CHECK(std::abs(n1 - n0) <= 1e-13 * n0);
    double worst = 0.0;
    for (std::size_t i = 0; i < F.coeffs.size(); ++i)
      if (std::abs(F.coeffs[i]) > 0)
        worst = std::max(worst, std::abs(std::abs(G.coeffs[i]) / std::abs(F.coeffs[i]) - 1.0));
    CHECK(worst < 1e-15);
  }

  double s = 0.37, t = -1.21;
  auto a = propagate(propagate(F, s), t);
  auto b = propagate(F, s + t);
  CHECK(rel_diff(a.coeffs, b.coeffs) < 1e-13);
}

TEST_CASE("fused physical propagation matches the separate route") {
  Lattice l(16);
  auto F = forward_transform(random_field(l, 8));
  F.coeffs[l.index(8, 3, 1)] = 2.0;
  cvec buf;
  for (double t : {0.0, 0.3, -2.9}) {
    propagate_physical(F, t, buf);
    auto ref = inverse_transform(propagate(F, t));
    CHECK(rel_diff(buf, ref.values) < 1e-14);
  }
  auto* data = buf.data();
  propagate_physical(F, 1.0, buf);
  CHECK(buf.data() == data);
}

TEST_CASE("Littlewood-Paley projections") {
  Lattice l(16);
  auto one = TorusField::from_function(l, [](const Vec3&) { return cplx(1.0); });
  auto P2 = lp_project(forward_transform(one), 2, LpMode::shell);
  CHECK(max_abs(P2.coeffs) == 0.0);

  SpectralField mode(l);
  mode.at(3, 0, 0) = 1.0;
  CHECK(max_abs(lp_project(mode, 1, LpMode::leq).coeffs) == 0.0);

  CHECK_THROWS_AS(lp_project(mode, 3, LpMode::leq), ValidationError);
  CHECK_THROWS_AS(lp_project(mode, 0.5, LpMode::shell), ValidationError);

  auto F = forward_transform(random_field(l, 77));
  SpectralField sum(l);
  for (double N = 1; N <= 16; N *= 2) sum = sum + lp_project(F, N, LpMode::shell);
  CHECK(rel_diff(sum.coeffs, F.coeffs) < 1e-12);
  auto leq16 = lp_project(F, 16, LpMode::leq);
  CHECK(rel_diff(leq16.coeffs, F.coeffs) < 1e-12);
  SpectralField partial(l);
  for (double N = 1; N <= 4; N *= 2) partial = partial + lp_project(F, N, LpMode::shell);
  CHECK(rel_diff(partial.coeffs, lp_project(F, 4, LpMode::leq).coeffs) < 1e-12);

  for (double Np = 1; Np <= 2; Np *= 2)
    for (double N = 4 * Np; N <= 8; N *= 2) {
      auto A = lp_project(F, N, LpMode::shell), B = lp_project(F, Np, LpMode::shell);
      CHECK(sobolev_inner(A, B, 0.0) == cplx(0.0, 0.0));
    }
}

TEST_CASE("cube projections") {
  Lattice l(8);
  auto F = forward_transform(random_field(l, 3));
  auto all = cube_project(F, {0, 0, 0}, 8);
  CHECK(max_abs_diff(all.coeffs, F.coeffs) == 0.0);

  SpectralField mode(l);
  mode.at(2, 1, -1) = 1.0;
  CHECK(max_abs(cube_project(mode, {-2, -2, -2}, 2).coeffs) == 0.0);

  SpectralField sum(l);
  std::vector<SpectralField> parts;
  for (int c1 = -3; c1 <= 3; c1 += 2)
    for (int c2 = -3; c2 <= 3; c2 += 2)
      for (int c3 = -3; c3 <= 3; c3 += 2) {
        parts.push_back(cube_project(F, {c1, c2, c3}, 2));
        sum = sum + parts.back();
      }
  CHECK(max_abs_diff(sum.coeffs, F.coeffs) == 0.0);
  CHECK(sobolev_inner(parts[0], parts[5], 0.0) == cplx(0.0, 0.0));
}

TEST_CASE("frame operator") {
  Lattice l(16);
  auto f = random_field(l, 9, 7);
  auto id = frame_operator(f, 0.0, {0, 0, 0});
  CHECK(rel_diff(id.values, f.values) < 1e-12);

  double h = l.spacing();
  auto shifted = frame_operator(f, 0.0, {2 * h, 0.0, 5 * h});
  double worst = 0.0;
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b)
      for (int c = 0; c < 16; ++c)
        worst = std::max(worst, std::abs(shifted(a, b, c) - f((a + 14) % 16, b, (c + 11) % 16)));
  CHECK(worst < 1e-12 * max_abs(f.values));

  for (int k = 0; k < 10; ++k) {
    auto g = random_field(l, 40 + k);
    auto G = forward_transform(g);
    auto moved = forward_transform(frame_operator(g, 0.3 * k - 1.0, {0.1 * k, -0.7, 2.9}));
    CHECK(std::abs(sobolev_norm(moved, 1.0) / sobolev_norm(G, 1.0) - 1.0) < 1e-12);
  }

  auto F = forward_transform(f);
  auto ab = frame_operator(frame_operator(F, 0.4, {0, 0, 0}), -1.1, {0, 0, 0});
  auto c = frame_operator(F, -0.7, {0, 0, 0});
  CHECK(rel_diff(ab.coeffs, c.coeffs) < 1e-13);
}

TEST_CASE("Sobolev norms") {
  Lattice l(8);
  auto c = TorusField::from_function(l, [](const Vec3&) { return cplx(0.0, 2.0); });
  CHECK(sobolev_norm(forward_transform(c), 1.0) == doctest::Approx(2.0 * c32).epsilon(1e-13));
  auto w = TorusField::from_function(l, [](const Vec3& x) { return std::polar(1.0, x[0]); });
  CHECK(sobolev_norm(forward_transform(w), 1.0) == doctest::Approx(std::sqrt(2.0) * c32).epsilon(1e-13));
  CHECK(homogeneous_sobolev_norm(forward_transform(c), 1.0) < 1e-12);

  // |f|^2 + |grad f|^2 by rectangle rule, gradient from spectral differentiation.
  Lattice L(16);
  auto f = random_field(L, 21, 7, 0.05);
  auto F = forward_transform(f);
  double quad = std::pow(lebesgue_norm(f, 2.0), 2);
  for (int d = 0; d < 3; ++d) {
    SpectralField D(L);
    for (int a = 0; a < 16; ++a)
      for (int b = 0; b < 16; ++b)
        for (int e = 0; e < 16; ++e) {
          int idx[3] = {a, b, e};
          D.coeffs[L.index(a, b, e)] = cplx(0.0, L.frequency(idx[d])) * F.coeffs[L.index(a, b, e)];
        }
    quad += std::pow(lebesgue_norm(inverse_transform(D), 2.0), 2);
  }
  CHECK(std::abs(sobolev_norm(F, 1.0) / std::sqrt(quad) - 1.0) < 1e-10);
}

TEST_CASE("Lebesgue norms") {
  Lattice l(8);
  auto one = TorusField::from_function(l, [](const Vec3&) { return cplx(1.0); });
  for (double p : {1.0, 2.0, 4.1, 6.0, 100.0})
    CHECK(lebesgue_norm(one, p) == doctest::Approx(std::pow(two_pi, 3.0 / p)).epsilon(1e-13));
  CHECK(lebesgue_norm(one, infinity) == 1.0);
  auto wave = TorusField::from_function(l, [](const Vec3& x) { return 1.5 * std::polar(1.0, x[1] - 2 * x[2]); });
  CHECK(lebesgue_norm(wave, 3.0) == doctest::Approx(1.5 * two_pi).epsilon(1e-13));

  Lattice L(64);
  auto bump = TorusField::from_function(L, [](const Vec3& x) {
    double r2 = 0;
    for (double c : x) r2 += (c - pi) * (c - pi);
    return cplx(std::exp(-r2 / 0.32));
  });
  CHECK(lebesgue_norm(bump, 2.0) ==
        doctest::Approx(sobolev_norm(forward_transform(bump), 0.0)).epsilon(1e-12));
  CHECK_THROWS_AS(lebesgue_norm(bump, 0.5), ValidationError);
}

TEST_CASE("pairings") {
  Lattice l(16);
  auto f = random_field(l, 1), g = random_field(l, 2);
  auto self = inner_products(f, f);
  auto F = forward_transform(f), G = forward_transform(g);
  CHECK(std::abs(self.l2 - std::pow(lebesgue_norm(f, 2.0), 2)) < 1e-10 * std::abs(self.l2));
  CHECK(std::abs(self.h1 - std::pow(sobolev_norm(F, 1.0), 2)) < 1e-10 * std::abs(self.h1));
  CHECK(self.l6 == doctest::Approx(std::pow(lebesgue_norm(f, 6.0), 6)).epsilon(1e-12));

  auto pr = inner_products(f, g);
  cplx oracle = 0.0;
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b)
      for (int c = 0; c < 16; ++c) {
        double k2 = 1.0 + std::pow(l.frequency(a), 2) + std::pow(l.frequency(b), 2) + std::pow(l.frequency(c), 2);
        std::size_t i = l.index(a, b, c);
        oracle += k2 * F.coeffs[i] * std::conj(G.coeffs[i]);
      }
  CHECK(std::abs(pr.h1 - oracle) < 1e-10 * std::abs(oracle));
  auto rev = inner_products(g, f);
  CHECK(std::abs(rev.h1 - std::conj(pr.h1)) < 1e-10 * std::abs(oracle));
  auto scaled = inner_products(f, cplx(0, 2) * g);
  CHECK(std::abs(scaled.l2 - cplx(0, -2) * pr.l2) < 1e-10 * std::abs(pr.l2) + 1e-12);

  auto lump = [](double cx) {
    return [cx](const Vec3& x) {
      double r2 = (x[0] - cx) * (x[0] - cx) + (x[1] - pi) * (x[1] - pi) + (x[2] - pi) * (x[2] - pi);
      return cplx(r2 < 0.5 ? std::exp(-1.0 / (0.5 - r2)) : 0.0);
    };
  };
  Lattice L(32);
  auto p = TorusField::from_function(L, lump(1.5)), q = TorusField::from_function(L, lump(4.5));
  CHECK(std::abs(inner_products(p, q).l2) < 1e-12);
  CHECK(inner_products(p, q).l6 == 0.0);
  CHECK_THROWS_AS(inner_products(p, f), ValidationError);
}

}
