#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "../tests/helpers.hpp"
#include "../tests/oracles.hpp"
#include "tnls/data.hpp"
#include "tnls/harness.hpp"
#include "tnls/profiles.hpp"
#include "tnls/rng.hpp"
#include "tnls/spectral.hpp"
#include "tnls/weyl.hpp"

using namespace tnls;
namespace fs = std::filesystem;
using harness::Config;
using harness::ExperimentReport;
using harness::format_number;
using harness::Status;

namespace {

// Tolerances, one block per criterion.
namespace tol {
constexpr double roundtrip = 1e-12, unitarity = 1e-13, telescoping = 1e-12, dft = 1e-12;
constexpr double plane_h1 = 1e-6, drift = 1e-8, ratio_target = 4.0, ratio_width = 0.5;
constexpr int kernel_samples = 10000;
constexpr double kernel_spread = 2.0;
constexpr double extinction_spread = 2.0;
constexpr double z_final_ratio = 0.5, linf_slope_lo = -1.9, linf_slope_hi = -1.1;
constexpr double strichartz_factor = 1.5;
constexpr double same_frame = 0.05, ladder_last = 0.10;
constexpr double pyth_l2 = 0.05, pyth_h1 = 0.05, pyth_l6 = 0.10;
constexpr double euclid_baseline = 0.02;
constexpr double hflf_oracle = 1e-8, hflf_schur_factor = 2.0;
constexpr long long hflf_envelope_samples = 4000;
}  // namespace tol

struct Outcome {
  bool pass = true;
  std::vector<std::string> parts;
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    parts.push_back(std::string(ok ? "" : "!") + what);
  }
};

std::string fmt(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", x);
  return b;
}

struct Context {
  std::string out_dir;
  std::uint64_t seed = 20261014;
};

ExperimentReport run_exp(const Context& ctx, const std::string& name, const std::string& label,
                         const std::string& text) {
  auto cfg = Config::parse(text, label);
  std::string dir = ctx.out_dir.empty() ? "" : (fs::path(ctx.out_dir) / label).string();
  auto r = harness::run(name, cfg, {dir});
  if (!dir.empty()) r.write(dir);
  return r;
}

const harness::Check& find_check(const ExperimentReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw ValidationError(r.experiment + ": no check named '" + name + "'");
}

void take_check(Outcome& o, const ExperimentReport& r, const std::string& name) {
  const auto& c = find_check(r, name);
  o.require(c.status == Status::pass, name + "=" + fmt(c.value) + " [" + harness::to_string(c.status) + "]");
}

// 1. Spectral core exactness.
Outcome spectral_core(const Context& ctx) {
  Outcome o;
  Lattice l(32);
  auto f = data::random_smooth(l, ctx.seed, 15, 0.0, 1.0);
  auto F = forward_transform(f);
  double rt = testutil::rel_diff(inverse_transform(F).values, f.values);
  o.require(rt <= tol::roundtrip, "roundtrip=" + fmt(rt));
  // Measured in physical space, so the transform rounding is included.
  double n0 = lebesgue_norm(f, 2.0), unit = 0.0;
  for (double t : {0.1, 1.0, 7.3, -2.5})
    unit = std::max(unit, std::fabs(lebesgue_norm(inverse_transform(propagate(F, t)), 2.0) - n0) / n0);
  o.require(unit <= tol::unitarity, "unitarity=" + fmt(unit));
  SpectralField sum(l);
  for (double N : dyadic_shells(l)) sum = sum + lp_project(F, N, LpMode::shell);
  double tel = testutil::rel_diff(sum.coeffs, F.coeffs);
  o.require(tel <= tol::telescoping, "telescoping=" + fmt(tel));
  Lattice s(4);
  auto g = data::random_smooth(s, ctx.seed + 1, 1, 0.0, 1.0);
  TorusField h(s);
  Xoshiro256 rng(ctx.seed + 2);
  for (auto& v : h.values) v = rng.complex_normal();
  auto H = testutil::direct_forward(h);
  double dft = std::max(testutil::rel_diff(forward_transform(h).coeffs, H.coeffs),
                        testutil::rel_diff(inverse_transform(H).values, testutil::direct_inverse(H).values));
  dft = std::max(dft, testutil::rel_diff(forward_transform(g).coeffs, testutil::direct_forward(g).coeffs));
  o.require(dft <= tol::dft, "dft4=" + fmt(dft));
  return o;
}

// 2. Solver correctness.
Outcome solver(const Context& ctx) {
  Outcome o;
  auto plane = run_exp(ctx, "conservation", "c2_plane",
                       "data = plane\nplane.A = 0.5\nplane.xi = 1,0,0\nM = 32\nT = 0.1\ndt = 1e-4\n"
                       "check.exact_h1 = " + format_number(tol::plane_h1) + "\ncheck.mass_drift = " +
                           format_number(tol::drift) + "\ncheck.energy_drift = " + format_number(tol::drift) + "\n");
  take_check(o, plane, "plane_wave_exact");
  take_check(o, plane, "mass_drift");
  take_check(o, plane, "energy_drift");
  auto rnd = run_exp(ctx, "conservation", "c2_random",
                     "data = random\nseed = " + std::to_string(ctx.seed) +
                         "\ndata.h1 = 5\nM = 32\nT = 0.1\ndt = 1e-3,5e-4,2.5e-4\ncheck.convergence_ratio = " +
                         format_number(tol::ratio_target) + "\ncheck.convergence_tol = " +
                         format_number(tol::ratio_width) + "\ncheck.mass_drift = " + format_number(tol::drift) +
                         "\ncheck.energy_drift = " + format_number(tol::drift) + "\n");
  take_check(o, rnd, "self_convergence_1");
  take_check(o, rnd, "mass_drift");
  take_check(o, rnd, "energy_drift");
  return o;
}

// 3. Kernel majorant ratio stable across M.
Outcome kernel_bound(const Context& ctx) {
  Outcome o;
  std::vector<double> maxima;
  for (int M : {16, 32, 64}) {
    Xoshiro256 rng(ctx.seed + M);
    double best = 0.0;
    for (int k = 0; k < tol::kernel_samples; ++k) {
      Vec3 x{rng.uniform(0, two_pi), rng.uniform(0, two_pi), rng.uniform(0, two_pi)};
      auto s = weyl::sample(M, x, rng.uniform(0, two_pi));
      best = std::max(best, std::abs(s.value) / s.majorant);
    }
    o.require(std::isfinite(best), "M=" + std::to_string(M) + " max=" + fmt(best));
    maxima.push_back(best);
  }
  double spread = *std::max_element(maxima.begin(), maxima.end()) / *std::min_element(maxima.begin(), maxima.end());
  o.require(spread < tol::kernel_spread, "spread=" + fmt(spread));
  return o;
}

// 4. Extinction window estimate.
Outcome extinction_window(const Context&) {
  Outcome o;
  std::vector<double> v;
  for (int M : {16, 32, 64})
    for (double S : {2.0, 4.0, 8.0}) {
      auto w = weyl::extinction_sup(M, S);
      v.push_back(w.value * std::pow(S, 1.5) / std::pow(double(M), 3));
    }
  double lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
  o.require(hi / lo <= tol::extinction_spread, "normalized in [" + fmt(lo) + "," + fmt(hi) + "] spread=" + fmt(hi / lo));
  return o;
}

// 5. Extinction lemma at N = 16, M = 256.
Outcome extinction_lemma(const Context& ctx) {
  Outcome o;
  auto r = run_exp(ctx, "extinction", "c5",
                   "profile = default_bump\nM = 256\nN = 16\nT = 4,8,16\nlinf.T = 2,4,8\ncheck.z_final_ratio = " +
                       format_number(tol::z_final_ratio) + "\ncheck.linf_slope = " + format_number(tol::linf_slope_lo) +
                       "," + format_number(tol::linf_slope_hi) + "\n");
  take_check(o, r, "z_strictly_decreasing_N16");
  take_check(o, r, "z_final_ratio_N16");
  take_check(o, r, "linf_slope_N16");
  return o;
}

// 6. Strichartz ratio uniform in N.
Outcome strichartz(const Context& ctx) {
  Outcome o;
  auto r = run_exp(ctx, "strichartz", "c6",
                   "p = 6\nN = 2,4,8,16\nsamples = 20\nM = 64\nseed = " + std::to_string(ctx.seed) +
                       "\ncheck.median_factor = " + format_number(tol::strichartz_factor) + "\n");
  take_check(o, r, "sup_ratio_within_median_factor");
  return o;
}

// 7. Frame orthogonality.
Outcome orthogonality(const Context& ctx) {
  Outcome o;
  auto r = run_exp(ctx, "orthogonality", "c7",
                   "profile = gaussian\nprofile.sigma = 0.4\nsame_frame.N = 16\nsame_frame.M = 512\n"
                   "ladder.d = 2,5,10,20\nladder.N = 4\nladder.M = 128\nladder.variants = space,scale_space\n"
                   "pythagorean = false\ncheck.same_frame = " + format_number(tol::same_frame) +
                       "\ncheck.ladder_last_over_first = " + format_number(tol::ladder_last) + "\n");
  for (const auto& c : r.checks) take_check(o, r, c.name);
  return o;
}

// 8. Pythagorean expansion.
Outcome pythagorean(const Context& ctx) {
  Outcome o;
  auto r = run_exp(ctx, "orthogonality", "c8",
                   "profile = gaussian\nprofile.sigma = 0.4\nsame_frame = false\nladder = false\n"
                   "pythagorean.N1 = 2\npythagorean.N2 = 16\npythagorean.M = 128\ncheck.pythagorean_l2 = " +
                       format_number(tol::pyth_l2) + "\ncheck.pythagorean_h1 = " + format_number(tol::pyth_h1) +
                       "\ncheck.pythagorean_l6 = " + format_number(tol::pyth_l6) + "\n");
  take_check(o, r, "pythagorean_l2");
  take_check(o, r, "pythagorean_h1");
  take_check(o, r, "pythagorean_l6");
  return o;
}

// 9. Euclidean comparison.
Outcome euclidean(const Context& ctx) {
  Outcome o;
  auto r = run_exp(ctx, "euclid-compare", "c9",
                   "rho = 1\nT0 = 1\nR = 8\nN = 8,16,32\nbaseline = true\nbaseline.N = 16\ncheck.baseline = " +
                       format_number(tol::euclid_baseline) + "\n");
  take_check(o, r, "distance_strictly_decreasing_in_N");
  take_check(o, r, "linear_baseline");
  return o;
}

// 10. HFLF operator.
Outcome hflf(const Context& ctx) {
  Outcome o;
  double N = 4, B = 2;
  double worst = 0.0;
  for (auto [p, q] : {std::pair{Int3{17, 3, -2}, Int3{15, 9, 1}}, std::pair{Int3{9, 9, 9}, Int3{12, 4, 6}},
                      std::pair{Int3{20, 0, 1}, Int3{18, 2, 0}}, std::pair{Int3{-11, 13, 2}, Int3{-10, 12, 5}}}) {
    auto d = oracle::hflf_direct(N, B, p, q, 256);
    worst = std::max({worst, std::fabs(profile::hflf_coefficient(N, B, p, q) - d.real()), std::fabs(d.imag())});
  }
  o.require(worst <= tol::hflf_oracle, "oracle_abs=" + fmt(worst));
  auto r = run_exp(ctx, "hflf", "c10",
                   "N = 4,8\nB = 2,4\ncheck.normalized_factor = " + format_number(tol::hflf_schur_factor) + "\n");
  for (const auto& c : r.checks) take_check(o, r, c.name);
  // The constant fitted on the maximizing row must dominate |c| / envelope on random entries.
  const auto& t = r.table("schur");
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    double n = t.number(k, "N"), b = t.number(k, "B"), C = t.number(k, "envelope_constant");
    int P = static_cast<int>(t.number(k, "P_max"));
    double cmax = profile::hflf_coefficient(n, b, {P, P, P}, {P, P, P});
    Xoshiro256 rng(ctx.seed + k);
    double worst = 0.0;
    long long used = 0;
    while (used < tol::hflf_envelope_samples) {
      Int3 p, q;
      bool in = true;
      for (int d = 0; d < 3; ++d) {
        p[d] = static_cast<int>(std::floor(rng.uniform(-P, P + 1)));
        q[d] = p[d] + static_cast<int>(std::floor(rng.uniform(-3 * n, 3 * n + 1)));
        in = in && std::abs(q[d]) <= P;
      }
      if (!in) continue;
      double c = std::fabs(profile::hflf_coefficient(n, b, p, q));
      if (c <= 1e-12 * cmax) continue;
      ++used;
      worst = std::max(worst, c / profile::hflf_envelope(n, p, q));
    }
    o.require(worst <= C, "N=" + format_number(n) + ",B=" + format_number(b) + " sampled/C=" + fmt(worst / C));
  }
  return o;
}

// 11. Determinism: identical config and seed give byte-identical CSV and report files.
Outcome determinism(const Context& ctx) {
  Outcome o;
  fs::path base = ctx.out_dir.empty() ? fs::temp_directory_path() / ("tnls_det_" + std::to_string(ctx.seed))
                                      : fs::path(ctx.out_dir) / "c11";
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  struct Case {
    std::string name, text;
  };
  std::vector<Case> cases{
      {"strichartz", "N = 2,4\nsamples = 3\nM = 32\nseed = " + std::to_string(ctx.seed) + "\n"},
      {"solve", "data = random\nM = 16\ninterval = 0,0.02\ndt = 1e-3\nwrite_fields = false\nseed = " +
                    std::to_string(ctx.seed) + "\n"},
      {"trilinear", "N1 = 2,4\nsamples = 2\nM = 16\nseed = " + std::to_string(ctx.seed) + "\n"},
  };
  for (const auto& c : cases) {
    std::vector<fs::path> dirs{base / (c.name + "_a"), base / (c.name + "_b")};
    for (const auto& d : dirs) {
      fs::remove_all(d);
      harness::run(c.name, Config::parse(c.text, c.name), {d.string()}).write(d.string());
    }
    std::size_t files = 0;
    bool same = slurp(dirs[0] / "report.json") == slurp(dirs[1] / "report.json");
    for (const auto& e : fs::directory_iterator(dirs[0] / "tables")) {
      ++files;
      same = same && slurp(e.path()) == slurp(dirs[1] / "tables" / e.path().filename());
    }
    o.require(same && files > 0, c.name + " files=" + std::to_string(files + 1) + (same ? " identical" : " differ"));
  }
  if (ctx.out_dir.empty()) fs::remove_all(base);
  return o;
}

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome(const Context&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks, one line per criterion"};
  Context ctx;
  std::vector<int> only;
  app.add_option("--out", ctx.out_dir, "keep per-criterion reports under this directory");
  app.add_option("--only", only, "criterion numbers to run (default all)")->delimiter(',');
  app.add_option("--seed", ctx.seed, "seed for randomized criteria");
  CLI11_PARSE(app, argc, argv);

  std::vector<Criterion> all{
      {1, "spectral core exactness", spectral_core},
      {2, "solver correctness", solver},
      {3, "kernel majorant ratio", kernel_bound},
      {4, "extinction window estimate", extinction_window},
      {5, "extinction lemma", extinction_lemma},
      {6, "Strichartz ratio", strichartz},
      {7, "frame orthogonality", orthogonality},
      {8, "Pythagorean expansion", pythagorean},
      {9, "Euclidean comparison", euclidean},
      {10, "HFLF operator", hflf},
      {11, "determinism", determinism},
  };
  std::set<int> chosen(only.begin(), only.end());
  nlohmann::ordered_json summary = nlohmann::ordered_json::array();
  int failed = 0;
  for (const auto& c : all) {
    if (!chosen.empty() && !chosen.count(c.id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string detail;
    for (const auto& p : o.parts) detail += (detail.empty() ? "" : "; ") + p;
    std::printf("%s criterion %2d %-28s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                detail.c_str(), sec);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
    summary.push_back({{"criterion", c.id}, {"name", c.name}, {"pass", o.pass}, {"detail", o.parts}, {"seconds", sec}});
  }
  if (!ctx.out_dir.empty()) {
    fs::create_directories(ctx.out_dir);
    std::ofstream(fs::path(ctx.out_dir) / "acceptance.json") << summary.dump(2) << "\n";
  }
  std::printf("%d of %zu criteria failed\n", failed, summary.size());
  return failed == 0 ? 0 : 1;
}
