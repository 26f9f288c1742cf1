#pragma once

#include <cmath>
#include <vector>

#include "tnls/field.hpp"
#include "tnls/rng.hpp"
#include "tnls/spectral.hpp"

namespace testutil {

using namespace tnls;

// Random coefficients on |xi|_inf <= band (Nyquist-free), returned in physical space.
inline TorusField random_field(const Lattice& l, std::uint64_t seed, int band = -1, double decay = 0.0) {
  Xoshiro256 rng(seed);
  int m = l.m();
  if (band < 0) band = m / 2 - 1;
  SpectralField F(l);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        cplx z = rng.complex_normal();
        int x1 = l.frequency(a), x2 = l.frequency(b), x3 = l.frequency(c);
        if (l.nyquist(a) || l.nyquist(b) || l.nyquist(c)) continue;
        if (std::abs(x1) > band || std::abs(x2) > band || std::abs(x3) > band) continue;
        double k2 = x1 * x1 + x2 * x2 + x3 * x3;
        F.coeffs[l.index(a, b, c)] = z * std::exp(-decay * k2);
      }
  return inverse_transform(F);
}

inline double max_abs_diff(const cvec& a, const cvec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const cvec& a) {
  double m = 0.0;
  for (const auto& z : a) m = std::max(m, std::abs(z));
  return m;
}

inline double rel_diff(const cvec& a, const cvec& b) {
  double s = max_abs(b);
  return max_abs_diff(a, b) / (s > 0 ? s : 1.0);
}

// O(M^6) forward transform straight from the definition, Nyquist rows zeroed.
inline SpectralField direct_forward(const TorusField& f) {
  const Lattice& l = f.lattice;
  int m = l.m();
  SpectralField out(l);
  double h = l.spacing();
  double norm = std::pow(two_pi, 1.5) / (double(m) * m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        if (l.nyquist(a) || l.nyquist(b) || l.nyquist(c)) continue;
        double x1 = l.frequency(a), x2 = l.frequency(b), x3 = l.frequency(c);
        cplx s = 0.0;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
              double th = -h * (i * x1 + j * x2 + k * x3);
              s += f(i, j, k) * cplx(std::cos(th), std::sin(th));
            }
        out.coeffs[l.index(a, b, c)] = norm * s;
      }
  return out;
}

inline TorusField direct_inverse(const SpectralField& F) {
  const Lattice& l = F.lattice;
  int m = l.m();
  TorusField out(l);
  double h = l.spacing();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        cplx s = 0.0;
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
              if (l.nyquist(a) || l.nyquist(b) || l.nyquist(c)) continue;
              double th = h * (i * l.frequency(a) + j * l.frequency(b) + k * l.frequency(c));
              s += F.coeffs[l.index(a, b, c)] * cplx(std::cos(th), std::sin(th));
            }
        out(i, j, k) = std::pow(two_pi, -1.5) * s;
      }
  return out;
}

}  // namespace testutil

namespace testutil {

// Random field even in every coordinate: random cosine coefficients on [0, band]^3.
inline TorusField random_even_field(const Lattice& l, std::uint64_t seed, int band = -1, double decay = 0.0) {
  Xoshiro256 rng(seed);
  int m = l.m();
  if (band < 0) band = m / 2 - 1;
  SpectralField F(l);
  for (int a = 0; a <= band; ++a)
    for (int b = 0; b <= band; ++b)
      for (int c = 0; c <= band; ++c) {
        cplx z = rng.complex_normal() * std::exp(-decay * (a * a + b * b + c * c));
        for (int sa : {1, -1})
          for (int sb : {1, -1})
            for (int sc : {1, -1}) F.at(sa * a, sb * b, sc * c) = z;
      }
  return inverse_transform(F);
}

}  // namespace testutil
