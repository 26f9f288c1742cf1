#pragma once

#include <cstddef>
#include <functional>
#include <new>
#include <vector>

#include "tnls/types.hpp"

namespace tnls {

// Storage aligned the way FFTW plans expect, so plans made on scratch buffers
// can be executed on any field array.
void* aligned_alloc_bytes(std::size_t bytes);
void aligned_free_bytes(void* p) noexcept;

template <class T>
struct AlignedAllocator {
  using value_type = T;
  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) { return static_cast<T*>(aligned_alloc_bytes(n * sizeof(T))); }
  void deallocate(T* p, std::size_t) noexcept { aligned_free_bytes(p); }
  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using cvec = std::vector<cplx, AlignedAllocator<cplx>>;

// M points per dimension on [0, 2pi)^3; dual frequencies -M/2 <= xi_i < M/2.
class Lattice {
 public:
  explicit Lattice(int m);

  int m() const { return m_; }
  std::size_t volume() const { return static_cast<std::size_t>(m_) * m_ * m_; }
  int frequency(int j) const { return j < m_ / 2 ? j : j - m_; }
  // Storage slot of a frequency in (-M/2, M/2).
  int slot(int xi) const { return xi >= 0 ? xi : xi + m_; }
  bool nyquist(int j) const { return j == m_ / 2; }
  std::size_t index(int k1, int k2, int k3) const {
    return (static_cast<std::size_t>(k1) * m_ + k2) * m_ + k3;
  }
  double spacing() const { return two_pi / m_; }
  double cell_volume() const { double h = spacing(); return h * h * h; }
  // Largest dyadic shell that can carry energy: M/2.
  int max_shell() const;

  bool operator==(const Lattice& o) const { return m_ == o.m_; }
  bool operator!=(const Lattice& o) const { return m_ != o.m_; }

 private:
  int m_;
};

struct TorusField {
  Lattice lattice;
  cvec values;
  double timestamp = 0.0;

  explicit TorusField(Lattice l, double t = 0.0) : lattice(l), values(l.volume()), timestamp(t) {}
  TorusField(Lattice l, cvec v, double t = 0.0);

  static TorusField from_function(Lattice l, const std::function<cplx(const Vec3&)>& f);

  cplx& operator()(int k1, int k2, int k3) { return values[lattice.index(k1, k2, k3)]; }
  const cplx& operator()(int k1, int k2, int k3) const { return values[lattice.index(k1, k2, k3)]; }
  Vec3 point(int k1, int k2, int k3) const;
  bool finite() const;
};

// coeffs(xi) = (2pi)^{-3/2} \int f e^{-ix.xi} dx, stored at the same index
// layout as the physical samples (frequency j < M/2 at slot j, negative ones wrapped).
struct SpectralField {
  Lattice lattice;
  cvec coeffs;

  explicit SpectralField(Lattice l) : lattice(l), coeffs(l.volume()) {}
  SpectralField(Lattice l, cvec c);

  cplx& at(int xi1, int xi2, int xi3) {
    return coeffs[lattice.index(lattice.slot(xi1), lattice.slot(xi2), lattice.slot(xi3))];
  }
  const cplx& at(int xi1, int xi2, int xi3) const {
    return coeffs[lattice.index(lattice.slot(xi1), lattice.slot(xi2), lattice.slot(xi3))];
  }
  void zero_nyquist();
  bool finite() const;
};

TorusField operator+(const TorusField& a, const TorusField& b);
TorusField operator-(const TorusField& a, const TorusField& b);
TorusField operator*(cplx s, const TorusField& a);
SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(cplx s, const SpectralField& a);

}  // namespace tnls
