#include <doctest.h>

#include "helpers.hpp"
#include "tnls/even.hpp"

using namespace tnls;
using namespace testutil;

TEST_SUITE("even") {

TEST_CASE("restriction rejects odd fields") {
  Lattice l(8);
  auto f = random_field(l, 4);
  CHECK_FALSE(even::is_even(f));
  CHECK_THROWS_AS(even::restrict_field(f), ValidationError);
  auto g = random_even_field(l, 4);
  CHECK(even::is_even(g));
  auto back = even::expand(even::restrict_field(g));
  CHECK(max_abs_diff(back.values, g.values) == 0.0);
}

TEST_CASE("DCT path agrees with full transforms") {
  for (int m : {8, 16, 32}) {
    Lattice l(m);
    auto f = random_even_field(l, 10 + m);
    auto F = forward_transform(f);
    auto E = even::forward(even::restrict_field(f));
    CHECK(rel_diff(even::expand(E).coeffs, F.coeffs) < 1e-12);
    auto g = even::expand(even::inverse(E));
    CHECK(rel_diff(g.values, f.values) < 1e-12);
  }
}

TEST_CASE("even norms equal full-grid norms") {
  Lattice l(16);
  auto f = random_even_field(l, 3, 7, 0.02);
  auto F = forward_transform(f);
  auto ef = even::restrict_field(f);
  auto E = even::forward(ef);
  for (double s : {0.0, 1.0, 2.0}) {
    CHECK(even::sobolev_norm(E, s) == doctest::Approx(sobolev_norm(F, s)).epsilon(1e-12));
    CHECK(even::homogeneous_sobolev_norm(E, s) ==
          doctest::Approx(homogeneous_sobolev_norm(F, s)).epsilon(1e-12));
  }
  for (double p : {1.0, 2.0, 4.1, 6.0, 100.0, infinity})
    CHECK(even::lebesgue_norm(ef, p) == doctest::Approx(lebesgue_norm(f, p)).epsilon(1e-12));
  CHECK(even::log_lebesgue_integral(ef, 100.0) ==
        doctest::Approx(log_lebesgue_integral(f, 100.0)).epsilon(1e-12));
  auto g = random_even_field(l, 8, 7, 0.02);
  auto G = forward_transform(g);
  auto EG = even::forward(even::restrict_field(g));
  cplx a = even::sobolev_inner(E, EG, 1.0, false), b = sobolev_inner(F, G, 1.0, false);
  CHECK(std::abs(a - b) < 1e-12 * std::abs(b));
}

TEST_CASE("even propagator and projections") {
  Lattice l(16);
  auto f = random_even_field(l, 12);
  auto F = forward_transform(f);
  auto E = even::forward(even::restrict_field(f));
  for (double t : {0.3, -2.0}) {
    auto Et = E;
    even::propagate_inplace(Et, t);
    CHECK(rel_diff(even::expand(Et).coeffs, propagate(F, t).coeffs) < 1e-13);
  }
  for (double N = 1; N <= 16; N *= 2)
    for (auto mode : {LpMode::leq, LpMode::shell})
      CHECK(rel_diff(even::expand(even::lp_project(E, N, mode)).coeffs, lp_project(F, N, mode).coeffs) < 1e-13);
  EvenTorusField out(Lattice(4));
  for (double N = 1; N <= 16; N *= 2) {
    even::shell_physical(E, N, out);
    CHECK(rel_diff(out.values, even::inverse(even::lp_project(E, N, LpMode::shell)).values) < 1e-13);
    auto [l0, l1] = even::log_lebesgue_integral_pair(out, 4.1, 100.0);
    if (N < 16) {
      CHECK(l0 == doctest::Approx(even::log_lebesgue_integral(out, 4.1)).epsilon(1e-13));
      CHECK(l1 == doctest::Approx(even::log_lebesgue_integral(out, 100.0)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(even::shell_physical(E, 3, out), ValidationError);
}

}
