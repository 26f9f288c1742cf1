#include <chrono>
#include <cmath>

#include "common.hpp"
#include "tnls/spectral.hpp"

namespace tnls::harness {

using namespace detail;

namespace {

struct Distance {
  double max_h1 = 0.0;
  double t_at_max = 0.0;
  double data_h1 = 0.0;
  double boundary_mass = 0.0;
};

// Torus run at scale N (M = res N) against the proxy run at scale L on M = res L.
// In profile units both grids have spacing 2 pi / res, so torus index j and box
// index j sit at the same point x_j = 2 pi j / res.
Distance compare(const profile::EuclideanProfile& phi, double N, double L, double R, double T0, double rho, int res,
                 int steps, int every, Dealias dealias, const profile::TransplantOptions& opt,
                 std::vector<std::string>& flags) {
  int M = static_cast<int>(res * N), Mb = static_cast<int>(res * L);
  Lattice lt(M), lb(Mb);
  auto fN = profile::rescale_to_torus_even(phi, N, lt, opt, &flags);
  auto fL = profile::rescale_to_torus_even(phi, L, lb, opt, &flags);
  Distance d;
  d.data_h1 = even::sobolev_norm(even::forward(fN), 1.0);
  EvenStepper a(fN, rho, dealias), b(fL, rho, dealias);
  int h = M / 2 + 1, hb = Mb / 2 + 1;
  double scale = std::sqrt(N / L), dx = two_pi / res;
  std::vector<double> cut(h);
  for (int j = 0; j < h; ++j) cut[j] = eta1(j * dx / R);
  auto measure = [&](int k) {
    auto U = a.physical();
    auto W = b.physical();
    EvenTorusField D(lt);
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < h; ++j)
        for (int q = 0; q < h; ++q) {
          std::size_t at = (static_cast<std::size_t>(i) * h + j) * h + q;
          cplx v = 0.0;
          double c = cut[i] * cut[j] * cut[q];
          if (c > 0.0 && i < hb && j < hb && q < hb)
            v = scale * c * W.values[(static_cast<std::size_t>(i) * hb + j) * hb + q];
          D.values[at] = U.values[at] - v;
        }
    double dist = even::sobolev_norm(even::forward(D), 1.0);
    if (dist > d.max_h1) {
      d.max_h1 = dist;
      d.t_at_max = k * T0 / (N * N * steps);
    }
    if (k == steps) {
      // Fraction of proxy mass with some |x_i| beyond 3/4 of the box half width.
      double out = 0.0, all = 0.0;
      int edge = (3 * Mb) / 8;
      for (int i = 0; i < hb; ++i)
        for (int j = 0; j < hb; ++j)
          for (int q = 0; q < hb; ++q) {
            double w = std::norm(W.values[(static_cast<std::size_t>(i) * hb + j) * hb + q]);
            w *= (i == 0 || i == hb - 1 ? 1 : 2) * (j == 0 || j == hb - 1 ? 1 : 2) * (q == 0 || q == hb - 1 ? 1 : 2);
            all += w;
            if (i > edge || j > edge || q > edge) out += w;
          }
      d.boundary_mass = all > 0 ? out / all : 0.0;
    }
  };
  measure(0);
  for (int k = 1; k <= steps; ++k) {
    a.step(T0 / (N * N * steps));
    b.step(T0 / (L * L * steps));
    if (k % every == 0 || k == steps) measure(k);
  }
  return d;
}

}  // namespace

ExperimentReport run_euclidean_comparison(const Config& c, const RunContext&) {
  auto t_start = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.experiment = "euclid-compare";
  auto phi = profile_from(c, "profile", "gaussian", 1.6);
  auto opt = transplant_from(c);
  auto Ns = c.nums("N", {8, 16, 32});
  double R = c.num("R", 8.0), T0 = c.num("T0", 1.0), rho = c.num("rho", 1.0);
  double L = c.num("L_box", 32.0);
  int res = static_cast<int>(c.integer("res", 8));
  int steps = static_cast<int>(c.integer("steps", 64));
  int every = static_cast<int>(c.integer("sample_every", 4));
  Dealias dealias = parse_dealias(c.str("dealias", "filter_none"));
  bool baseline = c.flag("baseline", true);
  double baseline_N = c.num("baseline.N", 16.0);
  double baseline_tol = c.num("check.baseline", 0.02);
  c.require_all_used();
  require(R >= 1.0 && T0 > 0.0, "euclid-compare: need R >= 1 and T0 > 0");
  require(res >= 4 && steps >= 1 && every >= 1, "euclid-compare: need res >= 4, steps >= 1, sample_every >= 1");
  if (L < std::max(4.0 * R, 8.0))
    throw ValidationError("euclid-compare: proxy box too small: L_box=" + format_number(L) +
                          " < max(4R, 8)=" + format_number(std::max(4.0 * R, 8.0)));
  require(phi.even, "euclid-compare: the profile must be even in each coordinate");
  for (double N : Ns) require(N >= 1.0 && res * N <= 1024, "euclid-compare: res * N must lie in [4, 1024]");
  require(res * L <= 1024, "euclid-compare: res * L_box must not exceed 1024");

  r.config = c.echo();
  r.resolution = {{"res", res}, {"M_box", static_cast<int>(res * L)}, {"steps", steps}, {"sample_every", every},
                  {"dealias", to_string(dealias)}};
  r.tables.emplace_back("distance", std::vector<std::string>{"rho", "N", "M", "R", "T0", "L_box", "max_h1_distance",
                                                             "data_h1", "relative", "t_at_max", "boundary_mass"});
  auto row = [&](double rh, double N) {
    std::vector<std::string> flags;
    auto d = compare(phi, N, L, R, T0, rh, res, steps, every, dealias, opt, flags);
    for (auto& s : flags) r.flags.push_back("N=" + format_number(N) + ": " + s);
    double rel = d.data_h1 > 0 ? d.max_h1 / d.data_h1 : 0.0;
    r.table("distance").add({rh, N, static_cast<long long>(res * N), R, T0, L, d.max_h1, d.data_h1, rel, d.t_at_max,
                             d.boundary_mass});
    return rel;
  };
  std::vector<double> rels;
  for (double N : Ns) rels.push_back(row(rho, N));
  if (Ns.size() >= 2)
    r.check("distance_strictly_decreasing_in_N", strictly_decreasing(rels), rels.back(),
            "max-in-window H1 distance strictly decreasing in N", "distance");
  if (baseline) {
    double b = rho == 0.0 && std::find(Ns.begin(), Ns.end(), baseline_N) != Ns.end()
                   ? rels[std::find(Ns.begin(), Ns.end(), baseline_N) - Ns.begin()]
                   : row(0.0, baseline_N);
    r.check("linear_baseline", b <= baseline_tol, b,
            "rho=0 relative distance at N=" + format_number(baseline_N) + " <= " + format_number(baseline_tol),
            "distance");
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return r;
}

}  // namespace tnls::harness
