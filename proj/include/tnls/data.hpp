#pragma once

// Seeded initial data for experiments. All randomness comes from Xoshiro256.

#include <cstdint>

#include "tnls/field.hpp"

namespace tnls::data {

// Complex normal coefficients on |xi|_inf <= band (Nyquist excluded), weighted by
// exp(-decay |xi|^2), scaled so that ||f||_{H1} = h1 (unless all coefficients vanish).
TorusField random_smooth(const Lattice& l, std::uint64_t seed, int band, double decay, double h1);

// A e^{i xi.x}: the nonlinear flow keeps it a plane wave with frequency |xi|^2 + rho |A|^4.
TorusField plane_wave(const Lattice& l, cplx A, const Int3& xi);
// A e^{i(xi.x - (|xi|^2 + rho |A|^4) t)}.
TorusField plane_wave_solution(const Lattice& l, cplx A, const Int3& xi, double rho, double t);

// P_N of a coherent packet: coefficients exp(-|xi - xi0|^2 / (2 (sigma N)^2)) e^{i(t0 |xi|^2 - x0.xi)} with
// |xi0| / N uniform in [0.5, 1.5] in a uniform direction, sigma uniform in [0.25, 1], x0 uniform on the
// torus and t0 uniform in [-0.5, 0.5]. The linear flow focuses it at x0 at time t0. Unit L2 norm.
struct PacketParams {
  Vec3 xi0{};
  double sigma = 0.0;
  Vec3 x0{};
  double t0 = 0.0;
};
SpectralField shell_packet(const Lattice& l, double N, std::uint64_t seed, PacketParams* params = nullptr);

}  // namespace tnls::data
