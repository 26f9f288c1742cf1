#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "common.hpp"
#include "tnls/data.hpp"
#include "tnls/snapshot.hpp"
#include "tnls/spectral.hpp"

namespace tnls::harness {

using namespace detail;

namespace {

struct DataSpec {
  std::string kind;
  TorusField field;
  cplx A = 0.0;
  Int3 xi{};
};

Int3 int3_from(const Config& c, const std::string& key, const std::vector<double>& fallback) {
  auto v = c.nums(key, fallback);
  require(v.size() == 3, "config key '" + key + "' needs three integers");
  Int3 out{};
  for (int d = 0; d < 3; ++d) {
    require(v[d] == std::floor(v[d]), "config key '" + key + "' needs integers");
    out[d] = static_cast<int>(v[d]);
  }
  return out;
}

// data = random | plane | profile | zero | file.
DataSpec data_from(const Config& c, const Lattice& l, double h1_fallback = 1.0) {
  DataSpec d{c.str("data", "random"), TorusField(l)};
  if (d.kind == "random") {
    d.field = data::random_smooth(l, c.seed(), static_cast<int>(c.integer("data.band", std::min(4, l.m() / 2 - 1))), c.num("data.decay", 0.05),
                                  c.num("data.h1", h1_fallback));
  } else if (d.kind == "plane") {
    d.A = c.num("plane.A", 0.5);
    d.xi = int3_from(c, "plane.xi", {1, 0, 0});
    d.field = data::plane_wave(l, d.A, d.xi);
  } else if (d.kind == "profile") {
    auto phi = profile_from(c, "profile");
    profile::Frame fr{c.num("frame.N", 4.0), c.num("frame.t0", 0.0), {}};
    auto x0 = c.nums("frame.x0", {0, 0, 0});
    require(x0.size() == 3, "config key 'frame.x0' needs three numbers");
    fr.x0 = {x0[0], x0[1], x0[2]};
    d.field = profile::make_profile(phi, fr, l, transplant_from(c));
  } else if (d.kind == "file") {
    d.field = read_snapshot(c.str("data.path"));
    require(d.field.lattice == l, "data.path: snapshot lattice differs from M");
  } else if (d.kind != "zero") {
    throw ValidationError("config key 'data': expected random, plane, profile, zero or file, got '" + d.kind + "'");
  }
  return d;
}

double rel_change(double a, double a0) { return a0 != 0.0 ? std::fabs(a - a0) / std::fabs(a0) : std::fabs(a - a0); }

}  // namespace

ExperimentReport run_solve(const Config& c, const RunContext& ctx) {
  auto t_start = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.experiment = "solve";
  Lattice l = lattice_from(c, "M", 32);
  IVP ivp{TorusField(l)};
  auto data = data_from(c, l);
  ivp.data = data.field;
  ivp.rho = c.num("rho", 1.0);
  auto iv = c.nums("interval", {0.0, 0.1});
  require(iv.size() == 2, "config key 'interval' needs two numbers");
  ivp.interval = {iv[0], iv[1]};
  ivp.dt = c.num("dt", 1e-3);
  ivp.dealias = parse_dealias(c.str("dealias", "zero_pad_3x"));
  ivp.sample_stride = static_cast<int>(c.integer("sample_stride", 10));
  ivp.blowup_factor = c.num("blowup_factor", ivp.blowup_factor);
  bool fields = c.flag("write_fields", true);
  c.require_all_used();
  ivp.validate();

  auto traj = solve(ivp);
  r.config = c.echo();
  r.resolution = {{"M", l.m()}, {"dt", traj.dt}, {"dealias", to_string(ivp.dealias)}, {"samples", traj.size()}};
  r.tables.emplace_back("trajectory", std::vector<std::string>{"t", "mass", "energy", "h1", "linf"});
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& f = traj.fields[k];
    r.table("trajectory").add({traj.times[k], mass(f), energy(f, ivp.rho), sobolev_norm(forward_transform(f), 1.0),
                               lebesgue_norm(f, infinity)});
  }
  if (fields && !ctx.out_dir.empty()) {
    auto dir = std::filesystem::path(ctx.out_dir) / "fields";
    std::filesystem::create_directories(dir);
    for (std::size_t k = 0; k < traj.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "sample_%05zu.tnls", k);
      write_snapshot((dir / name).string(), traj.fields[k]);
    }
  }
  if (!traj.ok()) throw NumericalAbort("solve: " + traj.status + ": " + traj.diagnostic);
  const auto& t = r.table("trajectory");
  std::size_t last = t.rows.size() - 1;
  r.checks.push_back({"mass_drift", Status::info, rel_change(t.number(last, "mass"), t.number(0, "mass")),
                      "relative mass change over the run", "trajectory"});
  r.checks.push_back({"energy_drift", Status::info, rel_change(t.number(last, "energy"), t.number(0, "energy")),
                      "relative energy change over the run", "trajectory"});
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return r;
}

ExperimentReport run_conservation(const Config& c, const RunContext&) {
  auto t_start = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.experiment = "conservation";
  Lattice l = lattice_from(c, "M", 32);
  // Unit-size data leaves the splitting error near rounding; H1 = 5 resolves the rate.
  auto data = data_from(c, l, 5.0);
  double rho = c.num("rho", 1.0);
  double T = c.num("T", 0.1);
  auto dts = c.nums("dt", {1e-3, 5e-4, 2.5e-4});
  Dealias dealias = parse_dealias(c.str("dealias", "zero_pad_3x"));
  double mass_tol = c.num("check.mass_drift", 1e-8);
  double energy_tol = c.num("check.energy_drift", 1e-8);
  double ratio_target = c.num("check.convergence_ratio", 4.0);
  double ratio_tol = c.num("check.convergence_tol", 0.5);
  double exact_tol = c.num("check.exact_h1", 1e-6);
  c.require_all_used();
  require(T > 0.0, "conservation: T must be positive");
  std::sort(dts.begin(), dts.end(), std::greater<>());

  r.config = c.echo();
  r.resolution = {{"M", l.m()}, {"dealias", to_string(dealias)}};
  r.tables.emplace_back("drift", std::vector<std::string>{"dt", "steps", "mass_drift", "energy_drift", "final_h1",
                                                          "exact_h1_error"});
  r.tables.emplace_back("convergence",
                        std::vector<std::string>{"dt", "self_difference_h1", "ratio", "energy_drift_ratio"});
  std::vector<SpectralField> finals;
  std::vector<double> edrift;
  bool plane = data.kind == "plane";
  for (double dt : dts) {
    IVP ivp{data.field, rho, {0.0, T}, dt, dealias, 1};
    auto traj = solve(ivp);
    if (!traj.ok()) throw NumericalAbort("conservation: " + traj.status + ": " + traj.diagnostic);
    double m0 = mass(traj.fields[0]), e0 = energy(traj.fields[0], rho), md = 0.0, ed = 0.0;
    for (const auto& f : traj.fields) {
      md = std::max(md, rel_change(mass(f), m0));
      ed = std::max(ed, rel_change(energy(f, rho), e0));
    }
    auto F = forward_transform(traj.fields.back());
    double exact = -1.0;
    if (plane) {
      auto u = data::plane_wave_solution(l, data.A, data.xi, rho, traj.times.back());
      exact = sobolev_norm(forward_transform(traj.fields.back() - u), 1.0);
    }
    r.table("drift").add({traj.dt, static_cast<long long>(traj.size() - 1), md, ed, sobolev_norm(F, 1.0),
                          plane ? Cell(exact) : Cell(std::string("n/a"))});
    finals.push_back(std::move(F));
    edrift.push_back(ed);
  }
  std::vector<double> diffs;
  for (std::size_t k = 0; k + 1 < finals.size(); ++k) diffs.push_back(sobolev_norm(finals[k] - finals[k + 1], 1.0));
  for (std::size_t k = 0; k < diffs.size(); ++k) {
    Cell ratio = k > 0 && diffs[k] > 0 ? Cell(diffs[k - 1] / diffs[k]) : Cell(std::string("n/a"));
    Cell er = edrift[k + 1] > 0 ? Cell(edrift[k] / edrift[k + 1]) : Cell(std::string("n/a"));
    r.table("convergence").add({dts[k], diffs[k], ratio, er});
  }
  if (!dts.empty()) {
    std::size_t last = dts.size() - 1;
    const auto& t = r.table("drift");
    r.check("mass_drift", t.number(last, "mass_drift") <= mass_tol, t.number(last, "mass_drift"),
            "relative mass drift at the smallest dt <= " + format_number(mass_tol), "drift");
    r.check("energy_drift", t.number(last, "energy_drift") <= energy_tol, t.number(last, "energy_drift"),
            "relative energy drift at the smallest dt <= " + format_number(energy_tol), "drift");
    if (plane)
      r.check("plane_wave_exact", t.number(last, "exact_h1_error") <= exact_tol, t.number(last, "exact_h1_error"),
              "H1 error against the exact plane wave at the smallest dt <= " + format_number(exact_tol), "drift");
  }
  // Self-convergence is meaningful only when the differences are above rounding.
  const auto& cv = r.table("convergence");
  for (std::size_t k = 1; k < cv.rows.size(); ++k) {
    if (diffs[k] <= 1e-12 * (1.0 + sobolev_norm(finals.back(), 1.0))) {
      r.checks.push_back({"self_convergence_" + std::to_string(k), Status::info, diffs[k],
                          "differences at rounding level (exact substeps)", "convergence"});
      continue;
    }
    double q = diffs[k - 1] / diffs[k];
    r.check("self_convergence_" + std::to_string(k), std::fabs(q - ratio_target) <= ratio_tol, q,
            "error ratio under dt halving within " + format_number(ratio_target) + " +- " + format_number(ratio_tol),
            "convergence");
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return r;
}

ExperimentReport run_field_io(const Config& c, const RunContext& ctx) {
  auto t_start = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.experiment = "field-io";
  Lattice l = lattice_from(c, "M", 16);
  auto data = data_from(c, l);
  double timestamp = c.num("timestamp", 0.25);
  c.require_all_used();
  namespace fs = std::filesystem;
  fs::path dir = ctx.out_dir.empty() ? fs::temp_directory_path() : fs::path(ctx.out_dir) / "fields";
  fs::create_directories(dir);
  fs::path path = dir / "roundtrip.tnls";
  TorusField f = data.field;
  f.timestamp = timestamp;
  write_snapshot(path.string(), f);
  auto g = read_snapshot(path.string());
  double diff = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) diff = std::max(diff, std::abs(f.values[i] - g.values[i]));
  auto bytes = static_cast<long long>(fs::file_size(path));
  if (ctx.out_dir.empty()) fs::remove(path);

  r.config = c.echo();
  r.resolution = {{"M", l.m()}};
  r.tables.emplace_back("roundtrip", std::vector<std::string>{"M", "bytes", "max_abs_diff", "timestamp_read", "l2"});
  r.table("roundtrip").add({static_cast<long long>(l.m()), bytes, diff, g.timestamp, lebesgue_norm(g, 2.0)});
  long long expect = 4 + 4 + 4 + 8 + 16LL * l.volume();
  r.check("roundtrip_exact", diff == 0.0 && g.timestamp == timestamp, diff, "bit-exact samples and timestamp",
          "roundtrip");
  r.check("file_size", bytes == expect, static_cast<double>(bytes), "header plus 16 M^3 bytes", "roundtrip");
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return r;
}

}  // namespace tnls::harness
