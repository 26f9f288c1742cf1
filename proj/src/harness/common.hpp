#pragma once

// Helpers shared by the experiment runners.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tnls/evolution.hpp"
#include "tnls/harness.hpp"
#include "tnls/profiles.hpp"
#include "tnls/rng.hpp"

namespace tnls::harness::detail {

// profile = default_bump | bump | gaussian | zero, with <prefix>.radius, .sigma,
// .amplitude and .normalize (unit Hdot1 norm before the amplitude is applied).
// The gaussian radius defaults to radius_fallback when positive, else min(64, 8 sigma).
inline profile::EuclideanProfile profile_from(const Config& c, const std::string& prefix,
                                              const std::string& fallback = "default_bump",
                                              double sigma_fallback = 0.4, double radius_fallback = 0.0) {
  std::string kind = c.str(prefix, fallback);
  double amp = c.num(prefix + ".amplitude", 1.0);
  profile::EuclideanProfile p;
  if (kind == "default_bump") {
    p = profile::default_bump();
  } else if (kind == "bump") {
    p = profile::bump(c.num(prefix + ".radius", 1.0));
    if (c.flag(prefix + ".normalize", true)) p = profile::normalized(p);
  } else if (kind == "gaussian") {
    double s = c.num(prefix + ".sigma", sigma_fallback);
    p = profile::gaussian(s, c.num(prefix + ".radius", radius_fallback > 0 ? radius_fallback : std::min(64.0, 8.0 * s)));
    if (c.flag(prefix + ".normalize", true)) p = profile::normalized(p);
  } else if (kind == "zero") {
    return profile::callable([](const Vec3&) { return cplx(0.0); }, 1.0, true);
  } else {
    throw ValidationError("config key '" + prefix + "': unknown profile '" + kind +
                          "' (expected default_bump, bump, gaussian or zero)");
  }
  if (amp != 1.0) p = profile::combine(amp, p, 0.0, p);
  return p;
}

inline profile::TransplantOptions transplant_from(const Config& c) {
  profile::TransplantOptions o;
  std::string m = c.str("transplant", "band_limited");
  if (m == "band_limited") o.mode = profile::Transplant::band_limited;
  else if (m == "sampled") o.mode = profile::Transplant::sampled;
  else throw ValidationError("config key 'transplant': expected band_limited or sampled, got '" + m + "'");
  o.nodes = static_cast<int>(c.integer("transplant.nodes", 64));
  return o;
}

inline Lattice lattice_from(const Config& c, const std::string& key, long long fallback) {
  long long m = c.integer(key, fallback);
  require(m >= 2 && m <= 1024, "config key '" + key + "': lattice size must lie in [2, 1024]");
  return Lattice(static_cast<int>(m));
}

// Independent stream for item (a, b) of a seeded sweep.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  SplitMix64 s(seed ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xc2b2ae3d27d4eb4fULL));
  return s.next();
}

inline bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

inline double median(std::vector<double> v) {
  require(!v.empty(), "median of an empty list");
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline std::string num_label(double x) {
  std::string s = format_number(x);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

// Check whose status follows a fit verdict: inconclusive fits never pass.
inline void fit_check(ExperimentReport& r, const std::string& name, const FitRecord& f, bool ok,
                      const std::string& requirement) {
  Check c{name, ok ? Status::pass : Status::fail, f.fit.slope, requirement, f.table};
  if (f.fit.verdict == "inconclusive") c.status = Status::inconclusive;
  r.checks.push_back(c);
}

}  // namespace tnls::harness::detail
