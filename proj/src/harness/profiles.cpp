#include <chrono>
#include <cmath>

#include "common.hpp"
#include "tnls/spectral.hpp"

namespace tnls::harness {

using namespace detail;

namespace {

Vec3 vec3_from(const Config& c, const std::string& key, const std::vector<double>& fallback) {
  auto v = c.nums(key, fallback);
  require(v.size() == 3, "config key '" + key + "' needs three numbers");
  return {v[0], v[1], v[2]};
}

double last_over_first(const std::vector<double>& v) { return v.front() > 0 ? v.back() / v.front() : 0.0; }

}  // namespace

ExperimentReport run_orthogonality(const Config& c, const RunContext&) {
  auto t_start = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.experiment = "orthogonality";
  auto phi = profile_from(c, "profile", "gaussian", 0.4, pi);
  auto opt = transplant_from(c);
  bool same = c.flag("same_frame", true);
  double same_N = c.num("same_frame.N", 16.0);
  int same_M = static_cast<int>(lattice_from(c, "same_frame.M", 512).m());
  double same_tol = c.num("check.same_frame", 0.05);
  bool ladder = c.flag("ladder", true);
  auto ds = c.nums("ladder.d", {2, 5, 10, 20});
  double lN = c.num("ladder.N", 4.0);
  int lM = static_cast<int>(lattice_from(c, "ladder.M", 128).m());
  std::string variants = c.str("ladder.variants", "space,scale_space");
  double ladder_tol = c.num("check.ladder_last_over_first", 0.10);
  bool pyth = c.flag("pythagorean", true);
  int pM = static_cast<int>(lattice_from(c, "pythagorean.M", 128).m());
  double bg = c.num("pythagorean.background", 0.2);
  double N1 = c.num("pythagorean.N1", 2.0), N2 = c.num("pythagorean.N2", 16.0);
  Vec3 x1 = vec3_from(c, "pythagorean.x1", {1.0, -1.5, 0.3});
  Vec3 x2 = vec3_from(c, "pythagorean.x2", {-0.7, 1.0, 2.0});
  double tol_l2 = c.num("check.pythagorean_l2", 0.05);
  double tol_h1 = c.num("check.pythagorean_h1", 0.05);
  double tol_l6 = c.num("check.pythagorean_l6", 0.10);
  c.require_all_used();
  for (double d : ds) require(d > std::log(2.0), "ladder.d entries must exceed ln 2");

  r.config = c.echo();
  r.resolution = {{"same_frame.M", same_M}, {"ladder.M", lM}, {"pythagorean.M", pM},
                  {"transplant", opt.mode == profile::Transplant::band_limited ? "band_limited" : "sampled"}};
  r.tables.emplace_back("pairings", std::vector<std::string>{"section", "k", "N_a", "N_b", "t_b", "x_b", "M",
                                                             "divergence", "h1_re", "h1_abs", "l2_abs", "l6",
                                                             "target_h1"});
  auto add_rows = [&](const std::string& section, const profile::OrthogonalityReport& o) {
    for (const auto& row : o.rows) {
      r.table("pairings").add({section, static_cast<long long>(row.k), row.a.N, row.b.N, row.b.t0,
                               format_number(row.b.x0[0]) + ";" + format_number(row.b.x0[1]) + ";" +
                                   format_number(row.b.x0[2]),
                               static_cast<long long>(row.M), row.divergence, row.h1.real(), std::abs(row.h1),
                               std::abs(row.l2), row.l6, o.target_h1});
      for (const auto& f : row.flags) r.flags.push_back(section + " k=" + std::to_string(row.k) + ": " + f);
    }
  };

  if (same) {
    profile::Frame f{same_N, 0.0, {}};
    auto o = profile::orthogonality_decay(phi, phi, {f}, {f}, {same_M}, opt);
    add_rows("same_frame", o);
    double rel = std::fabs(o.rows[0].h1.real() - o.target_h1) / o.target_h1;
    r.check("same_frame_h1", rel <= same_tol, rel,
            "relative gap to the Hdot1(R^3) pairing at N=" + format_number(same_N) + " <= " + format_number(same_tol),
            "pairings");
  }

  if (ladder && !ds.empty()) {
    std::vector<std::string> names;
    std::string cur;
    for (char ch : variants + ",") {
      if (ch == ',') {
        if (!cur.empty()) names.push_back(cur);
        cur.clear();
      } else if (ch != ' ') {
        cur += ch;
      }
    }
    for (const auto& v : names) {
      std::vector<profile::Frame> A, B;
      std::vector<int> Ms;
      for (double d : ds) {
        A.push_back({lN, 0.0, {}});
        if (v == "space") {
          double s = d / lN / std::sqrt(3.0);
          B.push_back({lN, 0.0, {s, s, s}});
        } else if (v == "scale_space") {
          double s = (d - std::log(2.0)) / (2.0 * lN) / std::sqrt(3.0);
          B.push_back({2.0 * lN, 0.0, {s, s, s}});
        } else {
          throw ValidationError("config key 'ladder.variants': expected space or scale_space, got '" + v + "'");
        }
        Ms.push_back(lM);
      }
      auto o = profile::orthogonality_decay(phi, phi, A, B, Ms, opt);
      std::string sec = "ladder_" + v;
      add_rows(sec, o);
      std::vector<double> h1, l2, l6;
      for (const auto& row : o.rows) {
        h1.push_back(std::abs(row.h1));
        l2.push_back(std::abs(row.l2));
        l6.push_back(row.l6);
      }
      r.check(sec + "_monotone", o.h1_decreasing && o.l2_decreasing && o.l6_decreasing,
              (o.h1_decreasing ? 1.0 : 0.0) + (o.l2_decreasing ? 1.0 : 0.0) + (o.l6_decreasing ? 1.0 : 0.0),
              "H1, L2 and L6 pairings nonincreasing along the ladder (below 1e-12 counted as 0)", "pairings");
      double worst = std::max({last_over_first(h1), last_over_first(l2), last_over_first(l6)});
      r.check(sec + "_last_over_first", worst <= ladder_tol, worst,
              "largest last/first pairing ratio <= " + format_number(ladder_tol), "pairings");
    }
  }

  if (pyth) {
    Lattice l(pM);
    auto g = TorusField::from_function(
        l, [&](const Vec3& x) { return cplx(bg * (std::cos(x[0]) + 0.5 * std::sin(x[1] + x[2]))); });
    std::vector<std::string> flags;
    auto p1 = profile::make_profile(phi, {N1, 0.0, x1}, l, opt, &flags);
    auto p2 = profile::make_profile(phi, {N2, 0.0, x2}, l, opt, &flags);
    for (auto& f : flags) r.flags.push_back("pythagorean: " + f);
    auto p = profile::pythagorean_report(g, {p1, p2}, TorusField(l));
    r.tables.emplace_back("pythagorean", std::vector<std::string>{"norm", "total", "pieces", "defect"});
    r.table("pythagorean").add({std::string("l2_sq"), p.l2_total, p.l2_pieces, p.l2_defect});
    r.table("pythagorean").add({std::string("hdot1_sq"), p.h1_total, p.h1_pieces, p.h1_defect});
    r.table("pythagorean").add({std::string("l6_pow6"), p.l6_total, p.l6_pieces, p.l6_defect});
    r.check("pythagorean_l2", p.l2_defect <= tol_l2, p.l2_defect, "L2 defect <= " + format_number(tol_l2),
            "pythagorean");
    r.check("pythagorean_h1", p.h1_defect <= tol_h1, p.h1_defect, "Hdot1 defect <= " + format_number(tol_h1),
            "pythagorean");
    r.check("pythagorean_l6", p.l6_defect <= tol_l6, p.l6_defect, "L6 defect <= " + format_number(tol_l6),
            "pythagorean");
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return r;
}

ExperimentReport run_hflf(const Config& c, const RunContext&) {
  auto t_start = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.experiment = "hflf";
  auto Ns = c.nums("N", {4, 8});
  auto Bs = c.nums("B", {2, 4});
  double margin = c.num("P_margin", 4.0);
  long long stride = c.integer("row_stride", 0);
  double factor = c.num("check.normalized_factor", 2.0);
  c.require_all_used();
  require(margin >= 0.0, "P_margin must be nonnegative");

  r.config = c.echo();
  r.resolution = {{"P_max", "2 B N + P_margin N"}, {"row_stride", stride > 0 ? std::to_string(stride) : "N"}};
  r.tables.emplace_back("schur", std::vector<std::string>{"N", "B", "P_max", "row_stride", "max_row_sum", "normalized",
                                                          "argmax", "tail_estimate", "envelope_constant",
                                                          "rows_evaluated"});
  std::vector<double> normalized;
  for (double N : Ns)
    for (double B : Bs) {
      int P = static_cast<int>(2.0 * B * N + margin * N);
      int s = stride > 0 ? static_cast<int>(stride) : static_cast<int>(N);
      auto res = profile::hflf_schur_sums(N, B, P, s);
      for (auto& f : res.flags) r.flags.push_back("N=" + format_number(N) + " B=" + format_number(B) + ": " + f);
      double nv = res.max_row_sum / (N * N);
      r.table("schur").add({N, B, static_cast<long long>(P), static_cast<long long>(s), res.max_row_sum, nv,
                            std::to_string(res.argmax[0]) + ";" + std::to_string(res.argmax[1]) + ";" +
                                std::to_string(res.argmax[2]),
                            res.tail_estimate, res.envelope_constant, static_cast<long long>(res.rows.size())});
      normalized.push_back(nv);
      r.check("envelope_constant_N" + num_label(N) + "_B" + num_label(B),
              std::isfinite(res.envelope_constant) && res.envelope_constant > 0.0, res.envelope_constant,
              "|c_pq| dominated by one finite multiple of the decay envelope on the maximizing row", "schur");
    }
  if (normalized.size() >= 2) {
    double lo = *std::min_element(normalized.begin(), normalized.end());
    double hi = *std::max_element(normalized.begin(), normalized.end());
    double spread = lo > 0 ? hi / lo : INFINITY;
    r.check("normalized_row_sum_stable", spread <= factor, spread,
            "max/min of max row sum / N^2 across the sweep <= " + format_number(factor), "schur");
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return r;
}

}  // namespace tnls::harness
