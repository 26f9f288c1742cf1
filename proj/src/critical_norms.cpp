#include "tnls/critical_norms.hpp"

#include <algorithm>
#include <cmath>

#include "tnls/kernels.hpp"
#include "tnls/spectral.hpp"

namespace tnls {

void ZNormSpec::validate() const {
  require(p0 >= 1.0 && std::isfinite(p0) && p1 >= 1.0 && std::isfinite(p1), "Z-norm exponents must be finite and >= 1");
  require(window_length > 0.0 && window_length <= 1.0, "window length must lie in (0, 1]");
  require(window_stride >= 0.0 && std::isfinite(window_stride), "window stride must be >= 0");
  require(window_stride == 0.0 || window_stride <= window_length, "window stride must not exceed the window length");
}

ShellTable::ShellTable(const Lattice& l, const ZNormSpec& spec)
    : M(l.m()), p0(spec.p0), p1(spec.p1), shells(dyadic_shells(l)) {}

void ShellTable::append_row(double t, std::vector<double> a0, std::vector<double> a1) {
  require(a0.size() == shells.size() && a1.size() == shells.size(), "shell row length mismatch");
  require(times.empty() || t > times.back(), "shell table times must increase");
  times.push_back(t);
  log_a0.push_back(std::move(a0));
  log_a1.push_back(std::move(a1));
}

void ShellTable::append(double t, const SpectralField& U) {
  require(U.lattice.m() == M, "lattice mismatch in shell table");
  std::vector<double> a0, a1;
  for (double N : shells) {
    auto f = inverse_transform(lp_project(U, N, LpMode::shell));
    a0.push_back(log_lebesgue_integral(f, p0));
    a1.push_back(log_lebesgue_integral(f, p1));
  }
  append_row(t, std::move(a0), std::move(a1));
}

void ShellTable::append(double t, const EvenSpectralField& U) {
  require(U.lattice.m() == M, "lattice mismatch in shell table");
  std::vector<double> a0, a1;
  EvenTorusField f(U.lattice);
  for (double N : shells) {
    even::shell_physical(U, N, f);
    auto [l0, l1] = even::log_lebesgue_integral_pair(f, p0, p1);
    a0.push_back(l0);
    a1.push_back(l1);
  }
  append_row(t, std::move(a0), std::move(a1));
}

ShellTable shell_table(const Trajectory& traj, const ZNormSpec& spec) {
  traj.validate();
  require(traj.size() >= 1, "empty trajectory");
  ShellTable t(traj.lattice(), spec);
  for (std::size_t k = 0; k < traj.size(); ++k) t.append(traj.times[k], forward_transform(traj.fields[k]));
  return t;
}

namespace {

double log_add(double a, double b) {
  if (a == -infinity) return b;
  if (b == -infinity) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Piecewise linear interpolant through (t_k, y_k).
struct PiecewiseLinear {
  const std::vector<double>& t;
  const std::vector<double>& y;

  std::size_t segment(double x) const {
    auto it = std::upper_bound(t.begin(), t.end(), x);
    std::size_t i = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
    return std::min(i, t.size() - 2);
  }
  double at(double x) const {
    std::size_t i = segment(x);
    double s = (y[i + 1] - y[i]) / (t[i + 1] - t[i]);
    return y[i] + s * (x - t[i]);
  }
  double slope(std::size_t i) const { return (y[i + 1] - y[i]) / (t[i + 1] - t[i]); }
  // Direct integral over [c, d] inside the sample range.
  double integral(double c, double d) const {
    if (d <= c) return 0.0;
    std::size_t i = segment(c), j = segment(d);
    if (i == j) return 0.5 * (d - c) * (at(c) + at(d));
    double s = 0.5 * (t[i + 1] - c) * (at(c) + y[i + 1]);
    for (std::size_t k = i + 1; k < j; ++k) s += 0.5 * (t[k + 1] - t[k]) * (y[k] + y[k + 1]);
    s += 0.5 * (d - t[j]) * (y[j] + at(d));
    return s;
  }
};

struct Window {
  double c = 0.0, d = 0.0, value = 0.0;
};

// Maximizes the integral over [c, c+L], c in [lo, hi].
Window best_window(const PiecewiseLinear& f, double lo, double hi, double L, double stride) {
  const auto& t = f.t;
  std::size_t n = t.size();
  std::vector<double> cum(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) cum[k] = cum[k - 1] + 0.5 * (t[k] - t[k - 1]) * (f.y[k] + f.y[k - 1]);
  auto F = [&](double x) {
    std::size_t i = f.segment(x);
    return cum[i] + 0.5 * (x - t[i]) * (f.y[i] + f.at(x));
  };
  std::vector<double> cand{lo, hi};
  if (stride > 0.0) {
    for (long long k = 0;; ++k) {
      double c = lo + static_cast<double>(k) * stride;
      if (c >= hi) break;
      cand.push_back(c);
    }
  } else {
    std::vector<double> br{lo, hi};
    for (double tk : t) {
      if (tk > lo && tk < hi) br.push_back(tk);
      if (tk - L > lo && tk - L < hi) br.push_back(tk - L);
    }
    std::sort(br.begin(), br.end());
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
      double a = br[k], b = br[k + 1];
      cand.push_back(a);
      if (b <= a) continue;
      double mid = 0.5 * (a + b);
      std::size_t i = f.segment(mid), j = f.segment(mid + L);
      double si = f.slope(i), sj = f.slope(j);
      double curv = sj - si;
      if (curv < 0.0) {
        // F'(c) = y(c + L) - y(c) vanishes here.
        double k0 = f.y[j] + sj * (L - t[j]) - f.y[i] + si * t[i];
        double c = -k0 / curv;
        if (c > a && c < b) cand.push_back(c);
      }
    }
  }
  Window best{lo, lo + L, -1.0};
  for (double c : cand) {
    double v = F(c + L) - F(c);
    if (v > best.value) best = {c, c + L, v};
  }
  best.value = f.integral(best.c, best.d);
  return best;
}

BranchResult evaluate_branch(const ShellTable& tab, const std::vector<std::vector<double>>& loga, double p,
                             Interval I, double L, double stride) {
  BranchResult br;
  br.p = p;
  br.window = {I.a, I.a + L};
  std::size_t ns = tab.shells.size();
  std::vector<double> w(ns);
  for (std::size_t s = 0; s < ns; ++s) w[s] = (5.0 - p / 2.0) * std::log(tab.shells[s]);
  std::size_t n = tab.times.size();
  std::vector<double> logS(n, -infinity);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t s = 0; s < ns; ++s) logS[k] = log_add(logS[k], w[s] + loga[k][s]);
  // Global max over the samples that touch I.
  double m = -infinity;
  for (std::size_t k = 0; k < n; ++k) {
    bool touches = (k + 1 < n && tab.times[k + 1] >= I.a && tab.times[k] <= I.b) ||
                   (k > 0 && tab.times[k - 1] <= I.b && tab.times[k] >= I.a);
    if (touches) m = std::max(m, logS[k]);
  }
  for (double N : tab.shells) br.shells[N] = 0.0;
  if (m == -infinity) return br;
  std::vector<double> y(n);
  for (std::size_t k = 0; k < n; ++k) y[k] = std::exp(logS[k] - m);
  PiecewiseLinear f{tab.times, y};
  Window win = best_window(f, I.a, I.b - L, L, stride);
  br.window = {win.c, win.d};
  if (!(win.value > 0.0)) return br;
  br.value = std::exp((m + std::log(win.value)) / p);
  for (std::size_t s = 0; s < ns; ++s) {
    std::vector<double> ys(n);
    for (std::size_t k = 0; k < n; ++k) ys[k] = std::exp(w[s] + loga[k][s] - m);
    PiecewiseLinear fs{tab.times, ys};
    br.shells[tab.shells[s]] = br.value * fs.integral(win.c, win.d) / win.value;
  }
  return br;
}

double time_tolerance(double t) { return 1e-12 * std::max(1.0, std::fabs(t)); }

}  // namespace

NormReport z_norm(const ShellTable& table, Interval I, const ZNormSpec& spec) {
  spec.validate();
  require(table.times.size() >= 2, "Z-norm needs at least two time samples");
  require(std::isfinite(I.a) && std::isfinite(I.b) && I.a <= I.b, "interval must satisfy a <= b");
  require(I.a >= table.times.front() - time_tolerance(I.a) && I.b <= table.times.back() + time_tolerance(I.b),
          "interval exceeds the trajectory coverage");
  I.a = std::max(I.a, table.times.front());
  I.b = std::min(I.b, table.times.back());
  NormReport r;
  r.M = table.M;
  r.window = I;
  r.samples = table.times.size();
  r.dt = (table.times.back() - table.times.front()) / static_cast<double>(table.times.size() - 1);
  r.stride = spec.window_stride;
  r.surrogate_flags.push_back("shells truncated at M/2=" + std::to_string(table.M / 2));
  for (double N : table.shells) r.shells[N] = 0.0;
  if (I.length() <= 0.0) {
    r.surrogate_flags.push_back("empty interval");
    return r;
  }
  double L = std::min(spec.window_length, I.length());
  double stride = I.length() > L ? spec.window_stride : 0.0;
  if (stride == 0.0 && I.length() > L) r.surrogate_flags.push_back("exact sup over window positions");
  r.branches.push_back(evaluate_branch(table, table.log_a0, table.p0, I, L, stride));
  r.branches.push_back(evaluate_branch(table, table.log_a1, table.p1, I, L, stride));
  for (const auto& b : r.branches) {
    r.value += b.value;
    for (const auto& [N, c] : b.shells) r.shells[N] += c;
  }
  r.window = r.branches.front().window;
  return r;
}

NormReport z_norm(const Trajectory& traj, Interval I, const ZNormSpec& spec) {
  auto r = z_norm(shell_table(traj, spec), I, spec);
  r.dt = traj.dt > 0 ? traj.dt : r.dt;
  return r;
}

nlohmann::ordered_json NormReport::to_json() const {
  nlohmann::ordered_json j;
  j["value"] = value;
  nlohmann::ordered_json sh = nlohmann::ordered_json::object();
  for (const auto& [N, c] : shells) sh[std::to_string(static_cast<long long>(N))] = c;
  j["shells"] = sh;
  j["window"] = {window.a, window.b};
  j["surrogate_flags"] = surrogate_flags;
  nlohmann::ordered_json bs = nlohmann::ordered_json::array();
  for (const auto& b : branches) {
    nlohmann::ordered_json e;
    e["p"] = b.p;
    e["value"] = b.value;
    e["window"] = {b.window.a, b.window.b};
    bs.push_back(e);
  }
  j["branches"] = bs;
  j["metadata"] = {{"M", M}, {"dt", dt}, {"stride", stride}, {"samples", samples}};
  return j;
}

ShellH1Table shell_h1_table(const Trajectory& h) {
  h.validate();
  require(h.size() >= 1, "empty trajectory");
  ShellH1Table t;
  t.shells = dyadic_shells(h.lattice());
  t.times = h.times;
  for (const auto& f : h.fields) {
    auto F = forward_transform(f);
    std::vector<double> row;
    for (double N : t.shells) row.push_back(sobolev_norm(lp_project(F, N, LpMode::shell), 1.0));
    t.h1.push_back(std::move(row));
  }
  return t;
}

double l1h1_bound(const ShellH1Table& table, Interval I) {
  std::size_t n = table.times.size();
  require(I.a <= I.b, "interval must satisfy a <= b");
  if (I.length() == 0.0) return 0.0;
  require(n >= 2, "time integral needs at least two samples");
  require(I.a >= table.times.front() - time_tolerance(I.a) && I.b <= table.times.back() + time_tolerance(I.b),
          "interval exceeds the sample coverage");
  I.a = std::max(I.a, table.times.front());
  I.b = std::min(I.b, table.times.back());
  std::vector<double> sq;
  for (std::size_t s = 0; s < table.shells.size(); ++s) {
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = table.h1[k][s];
    PiecewiseLinear f{table.times, y};
    double v = f.integral(I.a, I.b);
    sq.push_back(v * v);
  }
  return std::sqrt(kernels::pairwise_sum(sq.data(), sq.size()));
}

double x1_upper(const Trajectory& g, const Trajectory& forcing, double t_ref, std::optional<Interval> over) {
  g.validate();
  forcing.validate();
  require(g.size() == forcing.size(), "trajectory and forcing have different time grids");
  for (std::size_t k = 0; k < g.size(); ++k)
    require(std::fabs(g.times[k] - forcing.times[k]) <= time_tolerance(g.times[k]),
            "trajectory and forcing have different time grids");
  std::size_t ref = g.size();
  for (std::size_t k = 0; k < g.size(); ++k)
    if (std::fabs(g.times[k] - t_ref) <= time_tolerance(t_ref)) ref = k;
  require(ref < g.size(), "t_ref is not a sample time");
  double h1 = sobolev_norm(forward_transform(g.fields[ref]), 1.0);
  if (g.size() < 2) return h1;
  Interval I = over.value_or(Interval{g.times.front(), g.times.back()});
  return h1 + l1h1_bound(shell_h1_table(forcing), I);
}

double n_norm_upper(const Trajectory& h, Interval I) { return l1h1_bound(shell_h1_table(h), I); }

ZPrimeReport zprime(const Trajectory& traj, Interval I, const ZNormSpec& spec) {
  ZPrimeReport r;
  auto z = z_norm(traj, I, spec);
  r.z = z.value;
  // Samples inside I, first one taken as the reference time.
  Trajectory sub, forcing;
  sub.rho = forcing.rho = traj.rho;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    double t = traj.times[k];
    if (t < I.a - time_tolerance(t) || t > I.b + time_tolerance(t)) continue;
    sub.times.push_back(t);
    sub.fields.push_back(traj.fields[k]);
    forcing.times.push_back(t);
    if (traj.rho == 0.0)
      forcing.fields.emplace_back(traj.fields[k].lattice, t);
    else
      forcing.fields.push_back(inverse_transform(nonlinearity(traj.fields[k], traj.rho, traj.dealias), t));
  }
  require(!sub.times.empty(), "no samples inside the interval");
  Interval span{sub.times.front(), sub.times.back()};
  r.x1 = x1_upper(sub, forcing, sub.times.front(), span);
  r.value = std::sqrt(r.z * r.x1);
  r.surrogate_flags = z.surrogate_flags;
  r.surrogate_flags.push_back("X1-surrogate");
  return r;
}

namespace {

// Adaptive Simpson of a positive integrand on [a, b] with known fa, fm, fb.
template <class Fn>
double simpson(Fn& f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth,
               long long& evals) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  evals += 2;
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double both = left + right;
  if (depth <= 0 || std::fabs(both - whole) <= 15.0 * tol * std::fabs(both)) return both + (both - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, tol, depth - 1, evals) +
         simpson(f, m, b, fm, frm, fb, right, tol, depth - 1, evals);
}

}  // namespace

StrichartzResult strichartz_ratio(const SpectralField& f, double N, double p, Interval I, double dt, double rel_tol) {
  require(p > 4.0 && std::isfinite(p), "Strichartz exponent must exceed 4");
  require(is_dyadic(N), "N must be a power of two");
  require(I.a < I.b, "interval must satisfy a < b");
  require(rel_tol > 0.0, "tolerance must be positive");
  if (dt <= 0.0) dt = 1.0 / (4.0 * N * N);
  dt = std::min(dt, I.length());
  StrichartzResult r;
  auto g = lp_project(f, N, LpMode::shell);
  r.l2 = sobolev_norm(g, 0.0);
  if (r.l2 == 0.0) return r;
  const Lattice& l = f.lattice;
  cvec u;
  auto A = [&](double t) {
    propagate_physical(g, t, u);
    return l.cell_volume() * kernels::parallel::sum_abs_pow(u.data(), u.size(), p);
  };
  auto panels = static_cast<long long>(std::ceil(I.length() / dt - 1e-9));
  double h = I.length() / static_cast<double>(panels);
  std::vector<double> edge(panels + 1);
  for (long long k = 0; k <= panels; ++k) edge[k] = A(k == panels ? I.b : I.a + k * h);
  r.evaluations = panels + 1;
  std::vector<double> parts(panels);
  for (long long k = 0; k < panels; ++k) {
    double a = I.a + k * h, b = k + 1 == panels ? I.b : a + h;
    double fm = A(0.5 * (a + b));
    ++r.evaluations;
    double whole = (b - a) / 6.0 * (edge[k] + 4.0 * fm + edge[k + 1]);
    parts[k] = simpson(A, a, b, edge[k], fm, edge[k + 1], whole, rel_tol, 10, r.evaluations);
  }
  r.lhs = std::pow(kernels::pairwise_sum(parts.data(), parts.size()), 1.0 / p);
  r.ratio = r.lhs / (std::pow(N, 1.5 - 5.0 / p) * r.l2);
  return r;
}

TrilinearResult trilinear_ratio(const SpectralField& f1, const SpectralField& f2, const SpectralField& f3,
                                const Int3& N, Interval I, double dt, const ZNormSpec& spec) {
  require(N[0] >= N[1] && N[1] >= N[2] && N[2] >= 1, "require N1 >= N2 >= N3 >= 1");
  require(f1.lattice == f2.lattice && f2.lattice == f3.lattice, "lattice mismatch");
  require(I.a < I.b && dt > 0.0, "invalid interval or step");
  const Lattice& l = f1.lattice;
  auto steps = static_cast<long long>(std::ceil(I.length() / dt - 1e-9));
  double h = I.length() / static_cast<double>(steps);
  ShellTable t2(l, spec), t3(l, spec);
  std::vector<double> slice(steps + 1);
  for (long long k = 0; k <= steps; ++k) {
    double t = k == steps ? I.b : I.a + k * h;
    auto U1 = propagate(f1, t), U2 = propagate(f2, t), U3 = propagate(f3, t);
    auto u1 = inverse_transform(U1), u2 = inverse_transform(U2), u3 = inverse_transform(U3);
    for (std::size_t i = 0; i < u1.values.size(); ++i) u1.values[i] *= u2.values[i] * u3.values[i];
    slice[k] = std::pow(lebesgue_norm(u1, 2.0), 2);
    t2.append(t, U2);
    t3.append(t, U3);
  }
  double integral = 0.0;
  for (long long k = 0; k < steps; ++k) integral += 0.5 * h * (slice[k] + slice[k + 1]);
  TrilinearResult r;
  r.lhs = std::sqrt(integral);
  double z2 = z_norm(t2, I, spec).value, z3 = z_norm(t3, I, spec).value;
  double zp2 = std::sqrt(z2 * sobolev_norm(f2, 1.0)), zp3 = std::sqrt(z3 * sobolev_norm(f3, 1.0));
  r.rhs_factor = sobolev_norm(f1, 0.0) * zp2 * zp3;
  r.ratio = r.rhs_factor > 0.0 ? r.lhs / r.rhs_factor : 0.0;
  r.scale = static_cast<double>(N[2]) / N[0] + 1.0 / N[1];
  return r;
}

}  // namespace tnls
