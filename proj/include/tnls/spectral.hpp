#pragma once

// Fourier analysis on the torus (R/2piZ)^3 with the (2pi)^{-3/2} convention.

#include <vector>

#include "tnls/field.hpp"
#include "tnls/kernels.hpp"

namespace tnls {

// Smooth cutoffs. b(s) = e^{-1/s} for s > 0.
double mollifier_b(double s);
double eta1(double y);
double eta3(const Vec3& xi);
double eta_radial(double r);

SpectralField forward_transform(const TorusField& f);
TorusField inverse_transform(const SpectralField& F, double timestamp = 0.0);

// Multiplies coeffs(xi) by e^{-it|xi|^2}, i.e. applies e^{it Laplacian}.
SpectralField propagate(const SpectralField& F, double t);
// Fused inverse_transform(propagate(F, t)).values into a reused buffer.
void propagate_physical(const SpectralField& F, double t, cvec& out);
void propagate_inplace(SpectralField& F, double t);

enum class LpMode { leq, shell };

// P_{<=N} (mode leq) or P_N (mode shell). N must be a power of two.
SpectralField lp_project(const SpectralField& F, double N, LpMode mode);
// Per-axis factor eta1(xi/N)^2 so that eta3(xi/N) is the product over axes.
std::vector<double> lp_axis_factor(const Lattice& l, double N);
// Dyadic shells 1, 2, ..., M/2: the ones that can see nonzero lattice frequencies.
std::vector<double> dyadic_shells(const Lattice& l);

// Sharp indicator of center_i - side/2 <= xi_i < center_i + side/2.
SpectralField cube_project(const SpectralField& F, const Int3& center, int side);

// Pi_{t0,x0} f = (e^{-i t0 Laplacian} f)(x - x0), multiplier e^{i(t0|xi|^2 - x0.xi)}.
TorusField frame_operator(const TorusField& f, double t0, const Vec3& x0);
SpectralField frame_operator(const SpectralField& F, double t0, const Vec3& x0);

// Sum_xi <xi>^{2s} |F|^2, square-rooted; the homogeneous version uses |xi|^{2s}.
double sobolev_norm(const SpectralField& F, double s);
double homogeneous_sobolev_norm(const SpectralField& F, double s);
cplx sobolev_inner(const SpectralField& F, const SpectralField& G, double s, bool homogeneous = false);

// Rectangle rule on the grid; p = infinity gives the max modulus.
double lebesgue_norm(const TorusField& f, double p);
// log of the integral of |f|^p, safe for large p.
double log_lebesgue_integral(const TorusField& f, double p);

// l2 and l6 by the rectangle rule, h1 and hdot1 spectrally.
struct Pairings {
  cplx l2;
  cplx h1;
  cplx hdot1;
  double l6;  // <|f|^3, |g|^3>
};
Pairings inner_products(const TorusField& f, const TorusField& g);
Pairings inner_products(const TorusField& f, const SpectralField& F, const TorusField& g,
                        const SpectralField& G);

// Per-axis squared frequencies of the full lattice, for the reduction kernels.
kernels::Axes spectral_axes(const Lattice& l, std::vector<double>& storage);

}  // namespace tnls
