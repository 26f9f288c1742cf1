#include "tnls/data.hpp"

#include <cmath>

#include "tnls/rng.hpp"
#include "tnls/spectral.hpp"

namespace tnls::data {

TorusField random_smooth(const Lattice& l, std::uint64_t seed, int band, double decay, double h1) {
  require(band >= 0 && band < l.m() / 2, "random_smooth: band must lie in [0, M/2)");
  require(decay >= 0.0 && h1 >= 0.0, "random_smooth: decay and h1 must be nonnegative");
  Xoshiro256 rng(seed);
  int m = l.m();
  SpectralField F(l);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        cplx z = rng.complex_normal();
        int x1 = l.frequency(a), x2 = l.frequency(b), x3 = l.frequency(c);
        if (l.nyquist(a) || l.nyquist(b) || l.nyquist(c)) continue;
        if (std::abs(x1) > band || std::abs(x2) > band || std::abs(x3) > band) continue;
        F.coeffs[l.index(a, b, c)] = z * std::exp(-decay * (x1 * x1 + x2 * x2 + x3 * x3));
      }
  double n = sobolev_norm(F, 1.0);
  if (n > 0.0)
    for (auto& z : F.coeffs) z *= h1 / n;
  return inverse_transform(F);
}

TorusField plane_wave(const Lattice& l, cplx A, const Int3& xi) { return plane_wave_solution(l, A, xi, 0.0, 0.0); }

TorusField plane_wave_solution(const Lattice& l, cplx A, const Int3& xi, double rho, double t) {
  for (int d = 0; d < 3; ++d) require(std::abs(xi[d]) < l.m() / 2, "plane_wave: frequency beyond the band");
  double w = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2] + rho * std::pow(std::abs(A), 4);
  return TorusField::from_function(l, [&](const Vec3& x) {
    return A * std::polar(1.0, xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2] - w * t);
  });
}

SpectralField shell_packet(const Lattice& l, double N, std::uint64_t seed, PacketParams* params) {
  require(N >= 1.0 && 2.0 * N <= l.m() / 2, "shell_packet: the shell must fit inside the band");
  Xoshiro256 rng(seed);
  PacketParams q;
  Vec3 dir{rng.normal(), rng.normal(), rng.normal()};
  double dn = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
  double r = N * rng.uniform(0.5, 1.5);
  for (int d = 0; d < 3; ++d) q.xi0[d] = r * dir[d] / dn;
  q.sigma = rng.uniform(0.25, 1.0);
  for (int d = 0; d < 3; ++d) q.x0[d] = rng.uniform(0.0, two_pi);
  q.t0 = rng.uniform(-0.5, 0.5);
  int m = l.m();
  SpectralField F(l);
  double s2 = 2.0 * (q.sigma * N) * (q.sigma * N);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        if (l.nyquist(a) || l.nyquist(b) || l.nyquist(c)) continue;
        double x[3] = {double(l.frequency(a)), double(l.frequency(b)), double(l.frequency(c))};
        double d2 = 0.0, k2 = 0.0, ph = 0.0;
        for (int d = 0; d < 3; ++d) {
          d2 += (x[d] - q.xi0[d]) * (x[d] - q.xi0[d]);
          k2 += x[d] * x[d];
          ph -= q.x0[d] * x[d];
        }
        F.coeffs[l.index(a, b, c)] = std::polar(std::exp(-d2 / s2), q.t0 * k2 + ph);
      }
  F = lp_project(F, N, LpMode::shell);
  double n = sobolev_norm(F, 0.0);
  if (n > 0.0)
    for (auto& z : F.coeffs) z /= n;
  if (params) *params = q;
  return F;
}

}  // namespace tnls::data
