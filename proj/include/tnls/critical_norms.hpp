#pragma once

// Space-time norms of sampled trajectories:
//   Z  = sum_{p in {p0,p1}} sup_{J in I, |J| <= 1} (sum_N N^{5-p/2} ||P_N u||_{L^p(T^3 x J)}^p)^{1/p}
//   Z' = Z^{1/2} X1^{1/2}
// and the computable upper bounds standing in for the X1 and N norms.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tnls/even.hpp"
#include "tnls/evolution.hpp"
#include "tnls/field.hpp"

namespace tnls {

struct ZNormSpec {
  double p0 = 4.1;
  double p1 = 100.0;
  // Windows have length min(window_length, |I|).
  double window_length = 1.0;
  // 0 means the exact sup over all window positions of the piecewise linear
  // interpolant in time (the stride -> 0 limit); > 0 gives the discrete family
  // a + k*stride plus the window ending at b.
  double window_stride = 0.0;

  void validate() const;
};

// log of int |P_N u(t_k)|^p dx for every sample k and dyadic shell N, both exponents.
struct ShellTable {
  int M = 0;
  double p0 = 4.1;
  double p1 = 100.0;
  std::vector<double> shells;
  std::vector<double> times;
  std::vector<std::vector<double>> log_a0;  // [sample][shell], exponent p0
  std::vector<std::vector<double>> log_a1;  // exponent p1

  ShellTable() = default;
  ShellTable(const Lattice& l, const ZNormSpec& spec);
  void append(double t, const SpectralField& U);
  void append(double t, const EvenSpectralField& U);
  void append_row(double t, std::vector<double> a0, std::vector<double> a1);
};

ShellTable shell_table(const Trajectory& traj, const ZNormSpec& spec);

struct BranchResult {
  double p = 0.0;
  double value = 0.0;
  Interval window;
  std::map<double, double> shells;
};

struct NormReport {
  double value = 0.0;
  std::map<double, double> shells;  // per-shell contributions, summing to value
  Interval window;                  // maximizing window of the p0 branch
  std::vector<BranchResult> branches;
  std::vector<std::string> surrogate_flags;
  int M = 0;
  double dt = 0.0;
  double stride = 0.0;
  std::size_t samples = 0;

  nlohmann::ordered_json to_json() const;
};

NormReport z_norm(const ShellTable& table, Interval I, const ZNormSpec& spec = {});
NormReport z_norm(const Trajectory& traj, Interval I, const ZNormSpec& spec = {});

// ||g(t_ref)||_{H1} + (sum_N (int ||P_N forcing||_{H1} dt)^2)^{1/2}. The
// integral runs over the common sample range, or over `over` when given.
double x1_upper(const Trajectory& g, const Trajectory& forcing, double t_ref,
                std::optional<Interval> over = std::nullopt);

// (sum_N ||P_N h||_{L^1(I, H1)}^2)^{1/2} with piecewise linear time interpolation.
double n_norm_upper(const Trajectory& h, Interval I);

// Per-sample, per-shell H1 norms of P_N h; building block of the two bounds above.
struct ShellH1Table {
  std::vector<double> shells;
  std::vector<double> times;
  std::vector<std::vector<double>> h1;  // [sample][shell]
};
ShellH1Table shell_h1_table(const Trajectory& h);
double l1h1_bound(const ShellH1Table& table, Interval I);

// sqrt(z_norm * x1_upper) with forcing rho u|u|^4 rebuilt from the trajectory.
struct ZPrimeReport {
  double value = 0.0;
  double z = 0.0;
  double x1 = 0.0;
  std::vector<std::string> surrogate_flags;
};
ZPrimeReport zprime(const Trajectory& traj, Interval I, const ZNormSpec& spec = {});

struct StrichartzResult {
  double lhs = 0.0;    // ||e^{itLap} f||_{L^p(T^3 x I)}
  double l2 = 0.0;     // ||f||_{L^2}
  double ratio = 0.0;  // lhs / (N^{3/2-5/p} ||f||_{L^2})
  long long evaluations = 0;
};

// f must satisfy f = P_N f. Time integral by adaptive Simpson on panels of length dt.
StrichartzResult strichartz_ratio(const SpectralField& f, double N, double p, Interval I = {-1.0, 1.0},
                                  double dt = 0.0, double rel_tol = 1e-4);

struct TrilinearResult {
  double lhs = 0.0;         // ||u1 u2 u3||_{L^2(T^3 x I)}
  double rhs_factor = 0.0;  // ||f1||_{L^2} ||u2||_{Z'} ||u3||_{Z'}
  double ratio = 0.0;
  double scale = 0.0;       // N3/N1 + 1/N2
};

// Linear solutions u_i = e^{itLap} f_i sampled with step dt on I.
TrilinearResult trilinear_ratio(const SpectralField& f1, const SpectralField& f2, const SpectralField& f3,
                                const Int3& N, Interval I, double dt, const ZNormSpec& spec = {});

}  // namespace tnls
