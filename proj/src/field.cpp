#include "tnls/field.hpp"

#include <cmath>

namespace tnls {

Lattice::Lattice(int m) : m_(m) {
  if (m < 4 || m % 2 != 0) throw ValidationError("lattice size must be even and >= 4, got " + std::to_string(m));
}

int Lattice::max_shell() const {
  int n = 1;
  while (2 * n <= m_ / 2) n *= 2;
  return n;
}

TorusField::TorusField(Lattice l, cvec v, double t) : lattice(l), values(std::move(v)), timestamp(t) {
  if (values.size() != lattice.volume()) throw ValidationError("field length does not match lattice");
}

TorusField TorusField::from_function(Lattice l, const std::function<cplx(const Vec3&)>& f) {
  TorusField out(l);
  int m = l.m();
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) out(a, b, c) = f(out.point(a, b, c));
  return out;
}

Vec3 TorusField::point(int k1, int k2, int k3) const {
  double h = lattice.spacing();
  return {h * k1, h * k2, h * k3};
}

bool TorusField::finite() const {
  for (const auto& z : values)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

SpectralField::SpectralField(Lattice l, cvec c) : lattice(l), coeffs(std::move(c)) {
  if (coeffs.size() != lattice.volume()) throw ValidationError("coefficient length does not match lattice");
}

void SpectralField::zero_nyquist() {
  int m = lattice.m(), h = m / 2;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (a == h || b == h) {
        for (int c = 0; c < m; ++c) coeffs[lattice.index(a, b, c)] = 0.0;
      } else {
        coeffs[lattice.index(a, b, h)] = 0.0;
      }
    }
}

bool SpectralField::finite() const {
  for (const auto& z : coeffs)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

namespace {

template <class F>
void check_same(const F& a, const F& b) {
  if (a.lattice != b.lattice) throw ValidationError("lattice mismatch");
}

}  // namespace

TorusField operator+(const TorusField& a, const TorusField& b) {
  check_same(a, b);
  TorusField out(a.lattice, a.timestamp);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] + b.values[i];
  return out;
}

TorusField operator-(const TorusField& a, const TorusField& b) {
  check_same(a, b);
  TorusField out(a.lattice, a.timestamp);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] - b.values[i];
  return out;
}

TorusField operator*(cplx s, const TorusField& a) {
  TorusField out(a.lattice, a.timestamp);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = s * a.values[i];
  return out;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  check_same(a, b);
  SpectralField out(a.lattice);
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] = a.coeffs[i] + b.coeffs[i];
  return out;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  check_same(a, b);
  SpectralField out(a.lattice);
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] = a.coeffs[i] - b.coeffs[i];
  return out;
}

SpectralField operator*(cplx s, const SpectralField& a) {
  SpectralField out(a.lattice);
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] = s * a.coeffs[i];
  return out;
}

}  // namespace tnls
