#pragma once

#include <utility>

// Fast path for fields that are even in every coordinate (f(.., -x_i, ..) = f).
//
// Such a field is determined by its samples on the (M/2+1)^3 corner grid
// k_i in [0, M/2], and its spectrum by xi_i in [0, M/2]. The transforms are
// DCT-I in each axis; quadratures carry multiplicity 1 on the faces k_i in
// {0, M/2} and 2 inside, so every norm equals its full-grid value exactly.

#include <vector>

#include "tnls/field.hpp"
#include "tnls/kernels.hpp"
#include "tnls/spectral.hpp"

namespace tnls {

struct EvenTorusField {
  Lattice lattice;
  cvec values;
  double timestamp = 0.0;

  explicit EvenTorusField(Lattice l, double t = 0.0);
  int n() const { return lattice.m() / 2 + 1; }
  std::size_t index(int k1, int k2, int k3) const {
    return (static_cast<std::size_t>(k1) * n() + k2) * n() + k3;
  }
  cplx& operator()(int k1, int k2, int k3) { return values[index(k1, k2, k3)]; }
  const cplx& operator()(int k1, int k2, int k3) const { return values[index(k1, k2, k3)]; }
};

struct EvenSpectralField {
  Lattice lattice;
  cvec coeffs;

  explicit EvenSpectralField(Lattice l);
  int n() const { return lattice.m() / 2 + 1; }
  std::size_t index(int j1, int j2, int j3) const {
    return (static_cast<std::size_t>(j1) * n() + j2) * n() + j3;
  }
  cplx& at(int j1, int j2, int j3) { return coeffs[index(j1, j2, j3)]; }
  const cplx& at(int j1, int j2, int j3) const { return coeffs[index(j1, j2, j3)]; }
  void zero_nyquist();
};

namespace even {

bool is_even(const TorusField& f, double rel_tol = 1e-12);
EvenTorusField restrict_field(const TorusField& f);
TorusField expand(const EvenTorusField& f);
EvenSpectralField restrict_spectrum(const SpectralField& F);
SpectralField expand(const EvenSpectralField& F);

EvenSpectralField forward(const EvenTorusField& f);
EvenTorusField inverse(const EvenSpectralField& F, double timestamp = 0.0);
void propagate_inplace(EvenSpectralField& F, double t);
EvenSpectralField lp_project(const EvenSpectralField& F, double N, LpMode mode);
// In place multiplication by prod_i a[j_i] (a indexed by xi in [0, M/2]).
void separable_multiply(EvenSpectralField& F, const std::vector<double>& a);

double sobolev_norm(const EvenSpectralField& F, double s);
double homogeneous_sobolev_norm(const EvenSpectralField& F, double s);
cplx sobolev_inner(const EvenSpectralField& F, const EvenSpectralField& G, double s, bool homogeneous);
double lebesgue_norm(const EvenTorusField& f, double p);
double log_lebesgue_integral(const EvenTorusField& f, double p);
// (log int |f|^p, log int |f|^q) from one pass.
std::pair<double, double> log_lebesgue_integral_pair(const EvenTorusField& f, double p, double q);
// inverse(lp_project(U, N, shell)) written into out, reusing its storage.
void shell_physical(const EvenSpectralField& U, double N, EvenTorusField& out);

kernels::Axes physical_axes(const Lattice& l, std::vector<double>& f2, std::vector<double>& mult);
kernels::Axes spectral_axes(const Lattice& l, std::vector<double>& f2, std::vector<double>& mult);

}  // namespace even

}  // namespace tnls
