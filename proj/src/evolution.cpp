#include "tnls/evolution.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include <json.hpp>

#include "tnls/fft.hpp"
#include "tnls/kernels.hpp"
#include "tnls/snapshot.hpp"

namespace tnls {

std::string to_string(Dealias d) { return d == Dealias::zero_pad_3x ? "zero_pad_3x" : "filter_none"; }

Dealias parse_dealias(const std::string& s) {
  if (s == "zero_pad_3x") return Dealias::zero_pad_3x;
  if (s == "filter_none") return Dealias::filter_none;
  throw ValidationError("unknown dealias mode '" + s + "' (expected zero_pad_3x or filter_none)");
}

void IVP::validate() const {
  require(data.finite(), "initial data contains non-finite values");
  require(std::isfinite(rho) && rho >= -1.0 && rho <= 1.0, "rho must lie in [-1, 1]");
  require(std::isfinite(interval.a) && std::isfinite(interval.b) && interval.a < interval.b,
          "interval must satisfy t_a < t_b");
  require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
  require(dt <= interval.length() * (1 + 1e-12), "dt must not exceed the interval length");
  require(sample_stride >= 1, "sample_stride must be a positive integer");
  require(blowup_factor > 1.0, "blow-up factor must exceed 1");
}

const Lattice& Trajectory::lattice() const {
  require(!fields.empty(), "empty trajectory");
  return fields.front().lattice;
}

void Trajectory::validate() const {
  require(times.size() == fields.size(), "trajectory times and fields differ in length");
  for (std::size_t k = 1; k < times.size(); ++k) {
    require(times[k] > times[k - 1], "trajectory times must be strictly increasing");
    require(fields[k].lattice == fields[0].lattice, "trajectory lattices differ");
  }
}

namespace {

// Full M^3 grid with the storage layout of SpectralField.
struct FullGrid {
  int m;
  int n() const { return m; }
  std::size_t size() const { return static_cast<std::size_t>(m) * m * m; }
  std::vector<double> freq2() const {
    std::vector<double> f(m);
    for (int j = 0; j < m; ++j) {
      double xi = j < m / 2 ? j : (j == m / 2 ? m / 2.0 : j - m);
      f[j] = xi * xi;
    }
    return f;
  }
  std::vector<double> mult() const { return {}; }
  void to_physical(cvec& a) const {
    fft::dft3(m, a.data(), a.data(), +1);
    kernels::parallel::scale(a.data(), std::pow(two_pi, -1.5), a.size());
  }
  void to_spectral(cvec& a) const {
    fft::dft3(m, a.data(), a.data(), -1);
    double mm = m;
    kernels::parallel::scale(a.data(), std::pow(two_pi, 1.5) / (mm * mm * mm), a.size());
  }
  // Slot of this grid's band-limited axis index j on a grid of size mp (or -1 for Nyquist).
  int pad_slot(int j, int mp) const {
    if (j == m / 2) return -1;
    int xi = j < m / 2 ? j : j - m;
    return xi >= 0 ? xi : xi + mp;
  }
  FullGrid padded() const { return {3 * m}; }
  // Padded-grid transforms restricted to the pencils of the original band.
  void to_physical_band(cvec& a, const std::vector<char>& band) const {
    fft::dft3_pruned(m, a.data(), +1, band);
    kernels::parallel::scale(a.data(), std::pow(two_pi, -1.5), a.size());
  }
  void to_spectral_band(cvec& a, const std::vector<char>& band) const {
    fft::dft3_pruned(m, a.data(), -1, band);
    double mm = m;
    kernels::parallel::scale(a.data(), std::pow(two_pi, 1.5) / (mm * mm * mm), a.size());
  }
};

// Half grid of coordinate-even fields, axis index = |xi| in [0, M/2].
struct EvenGrid {
  int m;
  int n() const { return m / 2 + 1; }
  std::size_t size() const {
    std::size_t k = n();
    return k * k * k;
  }
  std::vector<double> freq2() const {
    std::vector<double> f(n());
    for (int j = 0; j < n(); ++j) f[j] = static_cast<double>(j) * j;
    return f;
  }
  std::vector<double> mult() const {
    std::vector<double> w(n(), 2.0);
    w.front() = 1.0;
    w.back() = 1.0;
    return w;
  }
  void to_physical(cvec& a) const {
    fft::dct1_3d(n(), a.data());
    kernels::parallel::scale(a.data(), std::pow(two_pi, -1.5), a.size());
  }
  void to_spectral(cvec& a) const {
    fft::dct1_3d(n(), a.data());
    double mm = m;
    kernels::parallel::scale(a.data(), std::pow(two_pi, 1.5) / (mm * mm * mm), a.size());
  }
  int pad_slot(int j, int) const { return j == m / 2 ? -1 : j; }
  EvenGrid padded() const { return {3 * m}; }
  void to_physical_band(cvec& a, const std::vector<char>&) const { to_physical(a); }
  void to_spectral_band(cvec& a, const std::vector<char>&) const { to_spectral(a); }
};

template <class T>
void axis_multiply(cvec& a, int n, const std::vector<T>& f) {
#pragma omp parallel for schedule(static)
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      T f12 = f[i1] * f[i2];
      std::size_t base = (static_cast<std::size_t>(i1) * n + i2) * n;
      for (int i3 = 0; i3 < n; ++i3) a[base + i3] *= f12 * f[i3];
    }
}

// Spectral state plus the Strang step on grid G. The state uses the
// forward_transform normalization; in filter_none mode Nyquist modes are kept.
template <class G>
class Engine {
 public:
  Engine(G g, double rho, Dealias d) : g_(g), rho_(rho), dealias_(d), f2_(g.freq2()), mult_(g.mult()) {
    if (d == Dealias::zero_pad_3x) {
      gp_ = g.padded();
      pad_.assign(gp_->size(), 0.0);
      band_.assign(gp_->n(), 0);
      for (int j = 0; j < g.n(); ++j)
        if (g.pad_slot(j, gp_->m) >= 0) band_[g.pad_slot(j, gp_->m)] = 1;
    }
  }

  // Physical samples in, spectral state out.
  void load(cvec values) {
    g_.to_spectral(values);
    state_ = std::move(values);
    if (dealias_ == Dealias::zero_pad_3x) zero_nyquist(state_);
  }
  void load_spectrum(cvec coeffs) { state_ = std::move(coeffs); }

  cvec physical() const {
    cvec a = state_;
    g_.to_physical(a);
    return a;
  }
  cvec spectrum() const {
    cvec a = state_;
    zero_nyquist(a);
    return a;
  }

  void step(double dt) {
    if (dt != cached_dt_) {
      cached_dt_ = dt;
      half_.resize(g_.n());
      for (int j = 0; j < g_.n(); ++j) {
        double th = -0.5 * dt * f2_[j];
        half_[j] = cplx(std::cos(th), std::sin(th));
      }
    }
    axis_multiply(state_, g_.n(), half_);
    if (rho_ != 0.0) nonlinear(dt);
    axis_multiply(state_, g_.n(), half_);
  }

  double h1_squared() const {
    kernels::Axes ax{g_.n(), f2_.data(), mult_.empty() ? nullptr : mult_.data()};
    return kernels::parallel::sobolev_abs2(state_.data(), ax, 1.0, false);
  }

  // Spectrum of rho u|u|^4 for the current state.
  cvec quintic() const {
    if (dealias_ == Dealias::filter_none) {
      cvec a = physical();
      apply_quintic(a);
      g_.to_spectral(a);
      zero_nyquist(a);
      return a;
    }
    cvec w(gp_->size(), 0.0);
    scatter(state_, w);
    gp_->to_physical_band(w, band_);
    apply_quintic(w);
    gp_->to_spectral_band(w, band_);
    cvec out(g_.size(), 0.0);
    gather(w, out);
    return out;
  }

 private:
  void apply_quintic(cvec& a) const {
    double r = rho_;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(a.size()); ++i) {
      double r2 = std::norm(a[i]);
      a[i] *= r * r2 * r2;
    }
  }

  void nonlinear(double dt) {
    if (dealias_ == Dealias::filter_none) {
      g_.to_physical(state_);
      kernels::parallel::nonlinear_phase(state_.data(), state_.size(), rho_ * dt);
      g_.to_spectral(state_);
      return;
    }
    std::fill(pad_.begin(), pad_.end(), cplx(0.0));
    scatter(state_, pad_);
    gp_->to_physical_band(pad_, band_);
    kernels::parallel::nonlinear_phase(pad_.data(), pad_.size(), rho_ * dt);
    gp_->to_spectral_band(pad_, band_);
    gather(pad_, state_);
  }

  void zero_nyquist(cvec& a) const {
    int n = g_.n();
    std::vector<double> keep(n);
    for (int j = 0; j < n; ++j) keep[j] = g_.pad_slot(j, g_.m) < 0 ? 0.0 : 1.0;
    axis_multiply(a, n, keep);
  }

  void scatter(const cvec& from, cvec& to) const {
    int n = g_.n(), np = gp_->n();
    std::vector<int> s(n);
    for (int j = 0; j < n; ++j) s[j] = g_.pad_slot(j, gp_->m);
    for (int a = 0; a < n; ++a) {
      if (s[a] < 0) continue;
      for (int b = 0; b < n; ++b) {
        if (s[b] < 0) continue;
        std::size_t src = (static_cast<std::size_t>(a) * n + b) * n;
        std::size_t dst = (static_cast<std::size_t>(s[a]) * np + s[b]) * np;
        for (int c = 0; c < n; ++c)
          if (s[c] >= 0) to[dst + s[c]] = from[src + c];
      }
    }
  }

  void gather(const cvec& from, cvec& to) const {
    int n = g_.n(), np = gp_->n();
    std::vector<int> s(n);
    for (int j = 0; j < n; ++j) s[j] = g_.pad_slot(j, gp_->m);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        std::size_t dst = (static_cast<std::size_t>(a) * n + b) * n;
        for (int c = 0; c < n; ++c) {
          if (s[a] < 0 || s[b] < 0 || s[c] < 0) {
            to[dst + c] = 0.0;
            continue;
          }
          to[dst + c] = from[(static_cast<std::size_t>(s[a]) * np + s[b]) * np + s[c]];
        }
      }
  }

  G g_;
  std::optional<G> gp_;
  double rho_;
  Dealias dealias_;
  std::vector<double> f2_, mult_;
  cvec state_, pad_;
  std::vector<char> band_;
  double cached_dt_ = std::nan("");
  std::vector<cplx> half_;
};

struct Schedule {
  long long steps;
  double h;
};

Schedule make_schedule(Interval I, double dt) {
  double ratio = I.length() / dt;
  auto n = static_cast<long long>(std::ceil(ratio * (1.0 - 1e-12)));
  if (n < 1) n = 1;
  return {n, I.length() / static_cast<double>(n)};
}

double sample_time(Interval I, const Schedule& s, long long k) {
  return k == s.steps ? I.b : I.a + static_cast<double>(k) * s.h;
}

bool all_finite(const cvec& a) {
  for (const auto& z : a)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace

TorusField nonlinear_flow(const TorusField& u, double tau, double rho) {
  TorusField out = u;
  kernels::parallel::nonlinear_phase(out.values.data(), out.values.size(), rho * tau);
  return out;
}

TorusField strang_step(const TorusField& u, double dt, double rho, Dealias dealias) {
  require(std::isfinite(dt) && dt != 0.0, "time step must be finite and nonzero");
  require(std::isfinite(rho), "rho must be finite");
  require(u.finite(), "field contains non-finite values");
  Engine<FullGrid> e({u.lattice.m()}, rho, dealias);
  e.load(u.values);
  e.step(dt);
  TorusField out(u.lattice, e.physical(), u.timestamp + dt);
  if (!out.finite()) throw NumericalAbort("non-finite values after a Strang step (dt=" + std::to_string(dt) + ")");
  return out;
}

Trajectory solve(const IVP& ivp, const Observer& observe) {
  ivp.validate();
  const Lattice& l = ivp.data.lattice;
  auto sched = make_schedule(ivp.interval, ivp.dt);
  Engine<FullGrid> e({l.m()}, ivp.rho, ivp.dealias);
  e.load(ivp.data.values);

  Trajectory traj;
  traj.rho = ivp.rho;
  traj.dt = sched.h;
  traj.dealias = ivp.dealias;
  auto record = [&](long long k) {
    double t = sample_time(ivp.interval, sched, k);
    traj.times.push_back(t);
    traj.fields.emplace_back(l, e.physical(), t);
    if (observe) observe(t, SpectralField(l, e.spectrum()));
  };
  double h1_0 = std::sqrt(e.h1_squared());
  record(0);
  for (long long k = 1; k <= sched.steps; ++k) {
    e.step(sched.h);
    double h1 = std::sqrt(e.h1_squared());
    if (!std::isfinite(h1)) {
      traj.status = "nonfinite";
      traj.diagnostic = "non-finite values at step " + std::to_string(k);
      return traj;
    }
    if (h1 > ivp.blowup_factor * h1_0 && h1 > 0.0) {
      traj.status = "blowup";
      char buf[160];
      std::snprintf(buf, sizeof buf, "H1 norm %.6g exceeds %.3g times the initial %.6g at t=%.17g", h1, ivp.blowup_factor,
                    h1_0, sample_time(ivp.interval, sched, k));
      traj.diagnostic = buf;
      return traj;
    }
    if (k % ivp.sample_stride == 0 || k == sched.steps) record(k);
  }
  return traj;
}

EvenRunStatus solve_even(const EvenTorusField& data, double rho, Interval interval, double dt, Dealias dealias,
                         int sample_stride, const EvenObserver& observe) {
  require(std::isfinite(rho) && rho >= -1.0 && rho <= 1.0, "rho must lie in [-1, 1]");
  require(interval.a < interval.b, "interval must satisfy t_a < t_b");
  require(std::isfinite(dt) && dt > 0.0 && dt <= interval.length() * (1 + 1e-12), "invalid time step");
  require(sample_stride >= 1, "sample_stride must be a positive integer");
  require(all_finite(data.values), "initial data contains non-finite values");
  const Lattice& l = data.lattice;
  auto sched = make_schedule(interval, dt);
  Engine<EvenGrid> e({l.m()}, rho, dealias);
  e.load(data.values);
  EvenRunStatus st;
  st.dt = sched.h;
  auto emit = [&](long long k) {
    if (!observe) return;
    EvenSpectralField U(l);
    U.coeffs = e.spectrum();
    observe(sample_time(interval, sched, k), U);
  };
  double h1_0 = std::sqrt(e.h1_squared());
  emit(0);
  for (long long k = 1; k <= sched.steps; ++k) {
    e.step(sched.h);
    ++st.steps;
    double h1 = std::sqrt(e.h1_squared());
    if (!std::isfinite(h1)) {
      st.status = "nonfinite";
      st.diagnostic = "non-finite values at step " + std::to_string(k);
      return st;
    }
    if (h1 > blowup_factor * h1_0 && h1 > 0.0) {
      st.status = "blowup";
      st.diagnostic = "H1 norm exceeds the blow-up threshold at step " + std::to_string(k);
      return st;
    }
    if (k % sample_stride == 0 || k == sched.steps) emit(k);
  }
  return st;
}

struct EvenStepper::Impl {
  Lattice lattice;
  Engine<EvenGrid> engine;
};

EvenStepper::EvenStepper(const EvenTorusField& data, double rho, Dealias dealias)
    : impl_(std::make_unique<Impl>(Impl{data.lattice, Engine<EvenGrid>({data.lattice.m()}, rho, dealias)})) {
  require(std::isfinite(rho) && rho >= -1.0 && rho <= 1.0, "rho must lie in [-1, 1]");
  require(all_finite(data.values), "initial data contains non-finite values");
  impl_->engine.load(data.values);
}
EvenStepper::~EvenStepper() = default;
EvenStepper::EvenStepper(EvenStepper&&) noexcept = default;
EvenStepper& EvenStepper::operator=(EvenStepper&&) noexcept = default;

void EvenStepper::step(double dt) {
  impl_->engine.step(dt);
  if (!std::isfinite(impl_->engine.h1_squared())) throw NumericalAbort("non-finite values in the even-grid stepper");
}

EvenSpectralField EvenStepper::spectrum() const {
  EvenSpectralField U(impl_->lattice);
  U.coeffs = impl_->engine.spectrum();
  return U;
}

EvenTorusField EvenStepper::physical() const {
  EvenTorusField u(impl_->lattice);
  u.values = impl_->engine.physical();
  return u;
}

double EvenStepper::h1() const { return std::sqrt(impl_->engine.h1_squared()); }

double mass(const TorusField& f) { return std::pow(lebesgue_norm(f, 2.0), 2); }

double energy(const TorusField& f, double rho) {
  double g = homogeneous_sobolev_norm(forward_transform(f), 1.0);
  return 0.5 * g * g + rho / 6.0 * std::pow(lebesgue_norm(f, 6.0), 6);
}

double mass(const EvenTorusField& f) { return std::pow(even::lebesgue_norm(f, 2.0), 2); }

double energy(const EvenTorusField& f, double rho) {
  double g = even::homogeneous_sobolev_norm(even::forward(f), 1.0);
  return 0.5 * g * g + rho / 6.0 * std::pow(even::lebesgue_norm(f, 6.0), 6);
}

SpectralField nonlinearity(const TorusField& u, double rho, Dealias dealias) {
  Engine<FullGrid> e({u.lattice.m()}, rho, dealias);
  e.load(u.values);
  return SpectralField(u.lattice, e.quintic());
}

double duhamel_residual(const Trajectory& traj) {
  traj.validate();
  require(traj.size() >= 3, "Duhamel residual needs at least three samples");
  const Lattice& l = traj.lattice();
  std::size_t n = traj.size();
  // D_k = e^{-it_k Lap} u_k + i int_{t_0}^{t_k} e^{-it' Lap} F(u(t')) dt' is constant for a solution.
  std::vector<SpectralField> D;
  D.reserve(n);
  SpectralField prev_g(l), acc(l);
  for (std::size_t k = 0; k < n; ++k) {
    auto v = propagate(forward_transform(traj.fields[k]), -traj.times[k]);
    auto g = propagate(nonlinearity(traj.fields[k], traj.rho, traj.dealias), -traj.times[k]);
    if (k > 0) {
      double w = 0.5 * (traj.times[k] - traj.times[k - 1]);
      for (std::size_t i = 0; i < acc.coeffs.size(); ++i) acc.coeffs[i] += w * (g.coeffs[i] + prev_g.coeffs[i]);
    }
    prev_g = g;
    SpectralField d(l);
    for (std::size_t i = 0; i < d.coeffs.size(); ++i) d.coeffs[i] = v.coeffs[i] + cplx(0.0, 1.0) * acc.coeffs[i];
    D.push_back(std::move(d));
  }
  std::vector<double> st;
  auto ax = spectral_axes(l, st);
  double worst = 0.0;
  SpectralField diff(l);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      for (std::size_t i = 0; i < diff.coeffs.size(); ++i) diff.coeffs[i] = D[k].coeffs[i] - D[j].coeffs[i];
      worst = std::max(worst, kernels::parallel::sobolev_abs2(diff.coeffs.data(), ax, 1.0, false));
    }
  return std::sqrt(worst);
}

void write_trajectory(const std::string& dir, const Trajectory& traj) {
  traj.validate();
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create trajectory directory " + dir + ": " + ec.message());
  nlohmann::ordered_json man;
  man["format"] = "tnls-trajectory";
  man["version"] = 1;
  man["M"] = traj.fields.empty() ? 0 : traj.lattice().m();
  man["rho"] = traj.rho;
  man["dt"] = traj.dt;
  man["dealias"] = to_string(traj.dealias);
  man["status"] = traj.status;
  man["diagnostic"] = traj.diagnostic;
  man["times"] = traj.times;
  std::vector<std::string> files;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "sample_%05zu.tnls", k);
    write_snapshot((fs::path(dir) / name).string(), traj.fields[k]);
    files.emplace_back(name);
  }
  man["files"] = files;
  std::ofstream os(fs::path(dir) / "manifest.json");
  if (!os) throw ValidationError("cannot write manifest in " + dir);
  os << man.dump(2) << "\n";
}

Trajectory read_trajectory(const std::string& dir) {
  namespace fs = std::filesystem;
  auto path = fs::path(dir) / "manifest.json";
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open trajectory manifest " + path.string());
  nlohmann::json man;
  try {
    is >> man;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError("malformed manifest " + path.string() + ": " + ex.what());
  }
  Trajectory traj;
  try {
    if (man.at("format") != "tnls-trajectory" || man.at("version") != 1)
      throw ValidationError("unsupported trajectory manifest " + path.string());
    traj.rho = man.at("rho").get<double>();
    traj.dt = man.at("dt").get<double>();
    traj.dealias = parse_dealias(man.at("dealias").get<std::string>());
    traj.status = man.value("status", "ok");
    traj.diagnostic = man.value("diagnostic", "");
    traj.times = man.at("times").get<std::vector<double>>();
    auto files = man.at("files").get<std::vector<std::string>>();
    require(files.size() == traj.times.size(), "manifest lists a different number of files and times");
    int m = man.at("M").get<int>();
    for (const auto& f : files) {
      traj.fields.push_back(read_snapshot((fs::path(dir) / f).string()));
      require(traj.fields.back().lattice.m() == m, "snapshot lattice disagrees with manifest: " + f);
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError("malformed manifest " + path.string() + ": " + ex.what());
  }
  traj.validate();
  return traj;
}

}  // namespace tnls
