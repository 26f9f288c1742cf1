#pragma once

// Strang splitting for (i d/dt + Laplacian) u = rho u |u|^4 on the M^3 torus grid.
//
// Both substeps are exact: the linear one is a Fourier phase, the nonlinear one
// is the pointwise rotation u -> u exp(-i rho tau |u|^4), which keeps |u| fixed.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tnls/even.hpp"
#include "tnls/field.hpp"
#include "tnls/spectral.hpp"

namespace tnls {

// zero_pad_3x: the nonlinear substep is evaluated on a 3M grid and the result
// truncated back to the M-grid band. filter_none: evaluated on the M grid
// itself (aliased); Nyquist modes are kept so every substep is unitary.
enum class Dealias { zero_pad_3x, filter_none };
std::string to_string(Dealias d);
Dealias parse_dealias(const std::string& s);

inline constexpr double blowup_factor = 1e6;

struct IVP {
  TorusField data;
  double rho = 1.0;
  Interval interval{0.0, 1.0};
  double dt = 1e-3;
  Dealias dealias = Dealias::zero_pad_3x;
  int sample_stride = 1;
  // Abort once the H1 norm exceeds this multiple of its initial value.
  double blowup_factor = tnls::blowup_factor;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<TorusField> fields;
  double rho = 0.0;
  double dt = 0.0;
  Dealias dealias = Dealias::zero_pad_3x;
  // "ok", "blowup" or "nonfinite"; on abort the samples stop at the last good state.
  std::string status = "ok";
  std::string diagnostic;

  bool ok() const { return status == "ok"; }
  std::size_t size() const { return times.size(); }
  const Lattice& lattice() const;
  void validate() const;
};

// u exp(-i rho tau |u|^4), pointwise.
TorusField nonlinear_flow(const TorusField& u, double tau, double rho);

// One Strang step. Negative dt steps backwards. Throws NumericalAbort on
// overflow or NaN.
TorusField strang_step(const TorusField& u, double dt, double rho, Dealias dealias = Dealias::zero_pad_3x);

// Fixed-step integration over ivp.interval. The step is ivp.dt shrunk so that
// it divides the interval; the value used is stored in Trajectory::dt.
// observe, if given, sees every sample as it is produced.
using Observer = std::function<void(double t, const SpectralField& U)>;
Trajectory solve(const IVP& ivp, const Observer& observe = {});

// Integration driver for coordinate-even data, on the (M/2+1)^3 half grid.
struct EvenRunStatus {
  std::string status = "ok";
  std::string diagnostic;
  long long steps = 0;
  double dt = 0.0;
};
using EvenObserver = std::function<void(double t, const EvenSpectralField& U)>;
EvenRunStatus solve_even(const EvenTorusField& data, double rho, Interval interval, double dt, Dealias dealias,
                         int sample_stride, const EvenObserver& observe);

// Step-by-step version of the even-grid scheme, for runs advanced in lockstep.
class EvenStepper {
 public:
  EvenStepper(const EvenTorusField& data, double rho, Dealias dealias);
  ~EvenStepper();
  EvenStepper(EvenStepper&&) noexcept;
  EvenStepper& operator=(EvenStepper&&) noexcept;
  void step(double dt);
  EvenSpectralField spectrum() const;
  EvenTorusField physical() const;
  double h1() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double mass(const TorusField& f);
double energy(const TorusField& f, double rho);
double mass(const EvenTorusField& f);
double energy(const EvenTorusField& f, double rho);

// Spectrum of rho u |u|^4, dealiased as requested.
SpectralField nonlinearity(const TorusField& u, double rho, Dealias dealias);

// max over sample pairs (s, t) of the H1 norm of
//   u(t) - e^{i(t-s)Lap} u(s) + i int_s^t e^{i(t-t')Lap} F(u(t')) dt',
// with the integral by the trapezoid rule over the stored samples.
double duhamel_residual(const Trajectory& traj);

// Directory with manifest.json and one snapshot per sample.
void write_trajectory(const std::string& dir, const Trajectory& traj);
Trajectory read_trajectory(const std::string& dir);

}  // namespace tnls
