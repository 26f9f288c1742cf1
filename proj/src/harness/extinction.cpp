#include <chrono>
#include <cmath>

#include "common.hpp"
#include "tnls/critical_norms.hpp"
#include "tnls/weyl.hpp"

namespace tnls::harness {

using namespace detail;

ExperimentReport run_extinction(const Config& c, const RunContext&) {
  auto t_start = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.experiment = "extinction";
  auto phi = profile_from(c, "profile");
  auto opt = transplant_from(c);
  Lattice l = lattice_from(c, "M", 256);
  auto Ns = c.nums("N", {16});
  auto Ts = c.nums("T", {4, 8, 16});
  ZNormSpec spec;
  spec.p0 = c.num("p0", 4.1);
  spec.p1 = c.num("p1", 100.0);
  spec.window_length = c.num("window_length", 1.0);
  spec.validate();
  double ratio = c.num("z.ratio", std::pow(2.0, 1.0 / 32.0));
  double cap = c.num("z.max_spacing", 0.25);
  bool linf = c.flag("linf", true);
  auto linf_T = c.nums("linf.T", {2, 4, 8});
  int ppp = static_cast<int>(c.integer("linf.points_per_period", 8));
  double final_ratio = c.num("check.z_final_ratio", 0.5);
  auto slope_range = c.nums("check.linf_slope", {-1.9, -1.1});
  c.require_all_used();
  require(ratio > 1.0, "z.ratio must exceed 1");
  require(cap > 0.0, "z.max_spacing must be positive");
  require(slope_range.size() == 2 && slope_range[0] < slope_range[1], "check.linf_slope must be low,high");
  for (double N : Ns)
    if (l.m() < 4 * N)
      throw ValidationError("extinction: lattice M=" + std::to_string(l.m()) + " under-resolves N=" +
                            format_number(N) + " (need M >= 4N)");
  std::sort(Ts.begin(), Ts.end());

  r.config = c.echo();
  r.resolution = {{"M", l.m()}, {"z_ratio", ratio}, {"z_max_spacing_N-2", cap}, {"linf_points_per_period", ppp}};
  r.tables.emplace_back("z", std::vector<std::string>{"N", "T", "window_a", "window_b", "samples", "Z", "Z_p0",
                                                      "Z_p1", "status"});
  r.tables.emplace_back("linf", std::vector<std::string>{"N", "T", "window_a", "window_b", "sup", "t_star",
                                                         "samples", "t_resolution"});
  for (double N : Ns) {
    std::vector<std::string> flags;
    auto f = profile::rescale_to_torus_even(phi, N, l, opt, &flags);
    for (auto& s : flags) r.flags.push_back("N=" + format_number(N) + ": " + s);
    auto F = even::forward(f);
    std::vector<double> zs;
    for (double T : Ts) {
      require(T >= 1.0 && T <= N, "extinction: T must satisfy 1 <= T <= N");
      double a = T / (N * N), b = 1.0 / T;
      if (a >= b) {
        r.table("z").add({N, T, a, b, 0LL, 0.0, 0.0, 0.0, std::string("empty window")});
        r.flags.push_back("N=" + format_number(N) + " T=" + format_number(T) + ": empty window, Z = 0");
        zs.push_back(0.0);
        continue;
      }
      ShellTable tab(l, spec);
      double h = cap / (N * N);
      for (double t = a;; ) {
        auto G = F;
        even::propagate_inplace(G, t);
        tab.append(t, G);
        if (t >= b) break;
        t = std::min({t * ratio, t + h, b});
      }
      auto z = z_norm(tab, {a, b}, spec);
      r.table("z").add({N, T, a, b, static_cast<long long>(tab.times.size()), z.value, z.branches.at(0).value,
                        z.branches.at(1).value, std::string("ok")});
      zs.push_back(z.value);
    }
    std::string tag = "N" + num_label(N);
    bool zero = std::all_of(zs.begin(), zs.end(), [](double v) { return v == 0.0; });
    if (zero) {
      r.checks.push_back({"z_all_zero_" + tag, Status::info, 0.0, "zero data", "z"});
    } else if (!zs.empty()) {
      r.check("z_strictly_decreasing_" + tag, strictly_decreasing(zs), zs.back(), "Z strictly decreasing in T", "z");
      double q = zs.front() > 0 ? zs.back() / zs.front() : infinity;
      r.check("z_final_ratio_" + tag, q <= final_ratio, q, "Z(T_last) / Z(T_first) <= " + format_number(final_ratio),
              "z");
    }
    if (!linf) continue;
    std::vector<double> xs, ys;
    for (double T : linf_T) {
      require(T >= 1.0 && T <= N, "extinction: linf.T must satisfy 1 <= T <= N");
      if (T / (N * N) >= 1.0 / T) continue;
      auto w = weyl::window_linf_lp(f, N, T, infinity, ppp);
      r.table("linf").add({N, T, w.window.a, w.window.b, w.value, w.t, w.samples, w.resolution});
      if (w.value > 0) {
        xs.push_back(T);
        ys.push_back(w.value);
      }
    }
    if (xs.size() >= 2) {
      const auto& fit = r.add_fit("linf_slope_" + tag, "linf", "T", "sup", xs, ys);
      fit_check(r, "linf_slope_" + tag, fit, fit.fit.slope >= slope_range[0] && fit.fit.slope <= slope_range[1],
                "log-log slope of the L-infinity window sup in [" + format_number(slope_range[0]) + ", " +
                    format_number(slope_range[1]) + "]");
    }
  }
  if (Ns.size() > 1) {
    for (double T : Ts) {
      double lo = infinity, hi = 0.0;
      const auto& t = r.table("z");
      for (std::size_t i = 0; i < t.rows.size(); ++i)
        if (t.number(i, "T") == T) {
          lo = std::min(lo, t.number(i, "Z"));
          hi = std::max(hi, t.number(i, "Z"));
        }
      r.checks.push_back({"z_spread_in_N_T" + num_label(T), Status::info, lo > 0 ? hi / lo : infinity,
                          "max/min of Z across N at fixed T (uniformity in scale)", "z"});
    }
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return r;
}

}  // namespace tnls::harness
