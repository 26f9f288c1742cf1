#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "helpers.hpp"
#include "oracles.hpp"
#include "tnls/profiles.hpp"

using namespace tnls;
using namespace tnls::profile;

namespace {

// Radial R^3 quadrature of the unit bump b(1 - r^2): L2 and Hdot1 squared norms.
double bump_l2_sq() {
  boost::math::quadrature::tanh_sinh<double> q;
  return 4 * pi * q.integrate([](double r) { return r * r * std::exp(-2.0 / (1.0 - r * r)); }, 0.0, 1.0);
}

double bump_hdot1_sq() {
  boost::math::quadrature::tanh_sinh<double> q;
  return 4 * pi * q.integrate(
                      [](double r) {
                        double s = 1.0 - r * r;
                        if (s <= 0.0) return 0.0;
                        double d = std::exp(-1.0 / s) / (s * s) * 2.0 * r;
                        return r * r * d * d;
                      },
                      0.0, 1.0);
}

std::vector<double> ladder{2, 5, 10, 20};

}  // namespace

TEST_SUITE("profiles") {

TEST_CASE("profile norms against radial quadrature") {
  auto b = bump(1.0);
  CHECK(b.hdot1 == doctest::Approx(std::sqrt(bump_hdot1_sq())).epsilon(1e-10));
  CHECK(l2_norm(b) == doctest::Approx(std::sqrt(bump_l2_sq())).epsilon(1e-10));
  auto d = default_bump();
  CHECK(d.hdot1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(hdot1_inner(d, d) - 1.0) < 1e-12);
  // Dilation: phi(x / r) has Hdot1 norm r^{1/2} times that of phi.
  CHECK(bump(0.5).hdot1 == doctest::Approx(std::sqrt(0.5) * b.hdot1).epsilon(1e-9));
  CHECK_THROWS_AS(bump(65.0), ValidationError);
  CHECK_THROWS_AS(bump(-1.0), ValidationError);
  auto g = gaussian(0.3, pi);
  // Hdot1^2 of e^{-r^2/2s^2} on R^3 is (3/2) pi^{3/2} s.
  CHECK(g.hdot1 == doctest::Approx(std::sqrt(1.5 * std::pow(pi, 1.5) * 0.3)).epsilon(1e-10));
  std::vector<cplx> v(8 * 8 * 8, 1.0);
  auto s = sampled(8, 1.0, v);
  CHECK(s({0.0, 0.0, 0.0}) == cplx(1.0));
  CHECK(s({0.99, 0.0, 0.0}) == cplx(0.0));
  CHECK_THROWS_AS(sampled(8, 1.0, {}), ValidationError);
  CHECK(parse_kind(to_string(Kind::gaussian)) == Kind::gaussian);
  CHECK_THROWS_AS(parse_kind("square"), ValidationError);
}

TEST_CASE("transplant at scale 1 and scaling of norms") {
  Lattice l(64);
  auto phi = bump(0.5);
  TransplantOptions s;
  s.mode = Transplant::sampled;
  auto f = rescale_to_torus(phi, 1.0, l, s);
  double h = l.spacing(), err = 0.0;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j)
      for (int k = 0; k < 64; ++k) {
        auto w = [&](int n) { return n * h > pi ? n * h - two_pi : n * h; };
        err = std::max(err, std::abs(f(i, j, k) - phi({w(i), w(j), w(k)})));
      }
  CHECK(err == 0.0);

  // Band-limited coefficients against the FFT of samples on a 4x finer lattice.
  auto gs = gaussian(0.3, pi);
  auto F = rescale_spectrum(gs, 4.0, Lattice(32));
  auto fine = forward_transform(rescale_to_torus(gs, 4.0, Lattice(256), s));
  double d = 0.0, mx = 0.0;
  for (int a = -15; a <= 15; ++a)
    for (int b = -15; b <= 15; ++b)
      for (int c = -15; c <= 15; ++c) {
        d = std::max(d, std::abs(F.at(a, b, c) - fine.at(a, b, c)));
        mx = std::max(mx, std::abs(fine.at(a, b, c)));
      }
  CHECK(d < 1e-9 * mx);

  auto u = default_bump();
  double l2 = l2_norm(u);
  for (auto [N, M] : {std::pair{4.0, 64}, std::pair{16.0, 256}}) {
    auto E = rescale_spectrum_even(u, N, Lattice(M));
    CHECK(std::abs(N * even::sobolev_norm(E, 0.0) - l2) < 0.01 * l2);
  }
  std::vector<std::string> flags;
  auto E = rescale_spectrum_even(u, 16, Lattice(512), {}, &flags);
  CHECK(std::abs(even::homogeneous_sobolev_norm(E, 1.0) - 1.0) < 0.03);
  CHECK(flags.empty());
  rescale_spectrum_even(u, 16, Lattice(64), {}, &flags);
  CHECK(flags.size() == 1);
  CHECK_THROWS_AS(rescale_spectrum(u, 16, Lattice(32)), ValidationError);
  CHECK_THROWS_AS(rescale_spectrum(u, 0.5, Lattice(32)), ValidationError);

  // Even and full paths agree.
  auto full = rescale_spectrum(u, 4, Lattice(32));
  auto half = rescale_spectrum_even(u, 4, Lattice(32));
  auto back = even::expand(half);
  double e = 0.0;
  for (std::size_t i = 0; i < full.coeffs.size(); ++i) e = std::max(e, std::abs(full.coeffs[i] - back.coeffs[i]));
  CHECK(e < 1e-14);
}

TEST_CASE("profiles on frames") {
  Lattice l(64);
  auto u = default_bump();
  auto base = rescale_spectrum(u, 4, l);
  auto same = make_profile_spectrum(u, {4, 0, {0, 0, 0}}, l);
  CHECK(same.coeffs == base.coeffs);
  double h1 = sobolev_norm(base, 1.0);
  for (Frame f : {Frame{4, 0.3, {1, 2, 3}}, Frame{4, -0.01, {pi, 0, 0}}, Frame{4, 2.0, {0.1, 0.0, 5.0}}})
    CHECK(sobolev_norm(make_profile_spectrum(u, f, l), 1.0) == doctest::Approx(h1).epsilon(1e-12));

  // Composition oracle: explicit multiplier loop on the rescaled coefficients.
  Frame fr{4, 0.01, {pi, 0, 0}};
  auto P = make_profile_spectrum(u, fr, l);
  double d = 0.0;
  for (int a = -31; a < 32; ++a)
    for (int b = -31; b < 32; ++b)
      for (int c = -31; c < 32; ++c) {
        double ph = fr.t0 * (a * a + b * b + c * c) - (fr.x0[0] * a + fr.x0[1] * b + fr.x0[2] * c);
        d = std::max(d, std::abs(P.at(a, b, c) - base.at(a, b, c) * std::polar(1.0, ph)));
      }
  CHECK(d < 1e-14);

  auto g = gaussian(0.3, 1.0);
  cplx A(0.5, -1.0), B(2.0, 0.25);
  auto lin = make_profile_spectrum(combine(A, u, B, g), fr, l);
  auto sum = A * make_profile_spectrum(u, fr, l) + B * make_profile_spectrum(g, fr, l);
  double e = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < lin.coeffs.size(); ++i) {
    e = std::max(e, std::abs(lin.coeffs[i] - sum.coeffs[i]));
    mx = std::max(mx, std::abs(sum.coeffs[i]));
  }
  CHECK(e < 1e-12 * mx);
}

TEST_CASE("frame divergence") {
  Frame a{4, 0, {0, 0, 0}};
  CHECK(frame_divergence(a, a) == 0.0);
  CHECK(frame_divergence({3, 0.1, {1, 1, 1}}, {6, 0.1, {1, 1, 1}}) == doctest::Approx(std::log(2.0)));
  CHECK(frame_divergence(a, {4, 0.5, {0, 0, 0}}) == doctest::Approx(8.0));
  Frame b{2, 0.25, {0.5, 0, 0}};
  CHECK(frame_divergence(a, b) == frame_divergence(b, a));
  CHECK(frame_divergence(a, b) == doctest::Approx(std::log(2.0) + 4.0 + 2.0));
  CHECK(torus_distance({0.1, 0, 0}, {two_pi - 0.1, 0, 0}) == doctest::Approx(0.2));
  std::vector<Frame> A, B;
  for (int k = 0; k < 6; ++k) {
    A.push_back({double(1 << k), 0, {0, 0, 0}});
    B.push_back({double(1 << k), 0, {0.5, 0, 0}});
  }
  CHECK(classified_orthogonal(A, B, 10.0));
  CHECK_FALSE(classified_orthogonal(A, A, 0.5));
  std::swap(B[2], B[4]);
  CHECK_FALSE(classified_orthogonal(A, B, 1.0));
  CHECK_THROWS_AS(frame_divergence({0.5, 0, {0, 0, 0}}, a), ValidationError);
}

TEST_CASE("orthogonality along frame sequences") {
  auto u = default_bump();
  // Same frame: the H1 pairing approaches the Hdot1(R^3) inner product.
  auto same = orthogonality_decay(u, u, {{16, 0, {0, 0, 0}}}, {{16, 0, {0, 0, 0}}}, {512});
  CHECK(same.target_h1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(same.rows[0].h1.real() - 1.0) < 0.05);
  CHECK(same.rows[0].l2_norm_a < 0.02);

  // Scale separated, same centre: pairing falls as N_A grows.
  std::vector<Frame> A, B;
  for (double N : {2.0, 4.0, 8.0}) {
    A.push_back({N, 0, {0, 0, 0}});
    B.push_back({4 * N, 0, {0, 0, 0}});
  }
  auto sc = orthogonality_decay(u, u, A, B, {64, 128, 256});
  CHECK(sc.h1_decreasing);
  CHECK(std::abs(sc.rows[2].h1) < std::abs(sc.rows[0].h1));

  // Separated by pi in one coordinate at scale N: disjoint supports.
  auto g = normalized(gaussian(0.3, pi));
  auto sep = orthogonality_decay(g, g, {{8, 0, {0, 0, 0}}}, {{8, 0, {pi, 0, 0}}}, {256});
  CHECK(std::abs(sep.rows[0].h1) <= 1e-8);
  CHECK(std::abs(sep.rows[0].l2) <= 1e-8);
  CHECK(sep.rows[0].l6 <= 1e-8);
  auto js = sep.to_json();
  CHECK(js["rows"].size() == 1);
  CHECK_THROWS_AS(orthogonality_decay(g, g, A, B, {64}), ValidationError);
}

TEST_CASE("Pythagorean expansion") {
  Lattice l(128);
  auto g0 = TorusField(l);
  auto u = default_bump();
  auto p = make_profile(u, {4, 0, {1, 2, 3}}, l);
  auto r = pythagorean_report(g0, {p}, TorusField(l));
  CHECK(r.l2_defect == 0.0);
  CHECK(r.h1_defect == 0.0);
  CHECK(r.l6_defect == 0.0);

  auto gs = normalized(gaussian(0.3, pi));
  auto q1 = make_profile(gs, {2, 0, {0, 0, 0}}, l);
  auto q2 = make_profile(gs, {2, 0, {pi, pi, 0}}, l);
  auto two = pythagorean_report(g0, {q1, q2}, TorusField(l));
  CHECK(two.l2_defect <= 1e-10);
  CHECK(two.h1_defect <= 1e-10);
  CHECK(two.l6_defect <= 1e-10);
  CHECK(two.to_json()["l6"]["defect"].get<double>() == two.l6_defect);
}

TEST_CASE("smallness diagnostic") {
  Lattice l(32);
  CHECK(smallness(TorusField(l), {0.0, 0.1}) == 0.0);
  auto f = testutil::random_field(l, 3, 6, 0.1);
  double a = smallness(f, {0.0}), b = smallness(f, {0.0, 0.2, 0.4});
  CHECK(a > 0.0);
  CHECK(b >= a);
  CHECK(smallness(2.0 * f, {0.0, 0.2}) == doctest::Approx(2 * smallness(f, {0.0, 0.2})).epsilon(1e-12));
}

TEST_CASE("high-low interaction coefficients") {
  // int eta1 = 3 exactly: eta1(s) + eta1(3 - s) = 1 on the transition.
  CHECK(eta1_transform(0.0) == doctest::Approx(3.0).epsilon(1e-14));
  boost::math::quadrature::tanh_sinh<double> ts;
  double g0 = 2.0 + 2.0 * ts.integrate([](double s) { return eta1(s) * eta1(s); }, 1.0, 2.0);
  CHECK(std::fabs(eta1_sq_transform(0.0) - g0) < 1e-10);
  for (double k : {0.7, 3.0, 11.0, 40.0}) {
    double ref = 2 * std::sin(k) / k + 2 * ts.integrate([&](double s) { return eta1(s) * std::cos(k * s); }, 1.0, 2.0);
    CHECK(std::fabs(eta1_transform(k) - ref) < 1e-10);
  }

  double N = 4, B = 2;
  CHECK(hflf_coefficient(N, B, {3, -8, 1}, {20, 0, 0}) == 0.0);
  Int3 p{17, 3, -2};
  CHECK(hflf_coefficient(N, B, p, p) == doctest::Approx(std::pow(eta1_sq_transform(0), 3) * 3.0 / N).epsilon(1e-13));
  Int3 q{15, 9, 1};
  CHECK(hflf_coefficient(N, B, p, q) == hflf_coefficient(N, B, q, p));

  auto direct = [&](const Int3& a, const Int3& b) { return oracle::hflf_direct(N, B, a, b); };
  double scale = hflf_coefficient(N, B, p, p);
  for (auto [a, b] : {std::pair{p, q}, std::pair{Int3{9, 9, 9}, Int3{12, 4, 6}}, std::pair{Int3{20, 0, 1}, Int3{18, 2, 0}}}) {
    auto o = direct(a, b);
    CHECK(std::abs(o.imag()) < 1e-12 * scale);
    CHECK(std::fabs(hflf_coefficient(N, B, a, b) - o.real()) <= 1e-8 * scale);
  }
  CHECK(hflf_envelope(N, p, p) == doctest::Approx(1 / N));
}

TEST_CASE("Schur row sums") {
  auto empty = hflf_schur_sums(4, 100, 16);
  CHECK(empty.max_row_sum == 0.0);
  CHECK(empty.flags.size() == 1);

  double N = 4, B = 2;
  auto r = hflf_schur_sums(N, B, 32);
  CHECK(r.max_row_sum > 0.0);
  // Brute-force double loop over q for a few rows, including a signed permutation of the maximizer.
  auto brute = [&](const Int3& p) {
    double s = 0.0;
    for (int a = -32; a <= 32; ++a)
      for (int b = -32; b <= 32; ++b)
        for (int c = -32; c <= 32; ++c) s += std::fabs(hflf_coefficient(N, B, p, {a, b, c}));
    return s;
  };
  Int3 m = r.argmax;
  CHECK(brute({-m[2], m[0], -m[1]}) == doctest::Approx(r.max_row_sum).epsilon(1e-11));
  for (const auto& row : r.rows)
    if (row.p == Int3{5, 9, 20}) CHECK(brute({9, -20, 5}) == doctest::Approx(row.sum).epsilon(1e-11));
  for (const auto& row : r.rows) CHECK(row.sum <= r.max_row_sum);

  auto coarse = hflf_schur_sums(N, B, 32, 4);
  CHECK(coarse.max_row_sum <= r.max_row_sum);
  CHECK(coarse.max_row_sum == doctest::Approx(r.max_row_sum).epsilon(1e-12));
  CHECK(r.envelope_constant > 0.0);
  CHECK(std::isfinite(r.envelope_constant));
  CHECK(r.to_json()["normalized"].get<double>() == doctest::Approx(r.max_row_sum / 16));
}

}
