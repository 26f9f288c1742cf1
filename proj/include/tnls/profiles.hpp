#pragma once

// Concentrating profiles on the torus, frames, orthogonality diagnostics and
// the high-frequency / low-frequency interaction operator.
//
// A Euclidean profile phi on R^3 is transplanted at scale N by
//   f_N(y) = N^{1/2} eta3(N^{1/2} y) phi(N y),   y in (-pi, pi]^3
// (cutoff eta3(x / N^{1/2}) in profile coordinates, identity chart).

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tnls/even.hpp"
#include "tnls/field.hpp"
#include "tnls/spectral.hpp"

namespace tnls::profile {

enum class Kind { bump, gaussian, callable, sampled };
std::string to_string(Kind k);
Kind parse_kind(const std::string& s);

struct EuclideanProfile {
  Kind kind = Kind::bump;
  double support_radius = 1.0;  // at most 64; Q_N keeps the torus support inside |y_i| <= 2 N^{-1/2}
  // Even in each coordinate separately; allows the half-grid path.
  bool even = true;
  std::function<cplx(const Vec3&)> phi;
  double hdot1 = 0.0;  // ||phi||_{Hdot1(R^3)}, filled by the factories

  cplx operator()(const Vec3& x) const { return phi(x); }
};

// c b(1 - |x|^2 / r^2) with b(s) = e^{-1/s}.
EuclideanProfile bump(double radius = 1.0, double amplitude = 1.0);
// Unit-radius bump normalized to ||phi||_{Hdot1} = 1.
EuclideanProfile default_bump();
// A exp(-|x|^2 / (2 sigma^2)) times a smooth cutoff falling from 1 to 0 on
// 0.8 radius <= |x| <= radius. For sigma <= 0.1 radius the cutoff acts below 1e-13.
EuclideanProfile gaussian(double sigma, double radius, double amplitude = 1.0);
EuclideanProfile callable(std::function<cplx(const Vec3&)> f, double radius, bool even = false);
// Values on an n^3 grid of cell centers covering [-radius, radius]^3, trilinear in between.
EuclideanProfile sampled(int n, double radius, std::vector<cplx> values);
// a phi + b psi.
EuclideanProfile combine(cplx a, const EuclideanProfile& phi, cplx b, const EuclideanProfile& psi);
EuclideanProfile normalized(const EuclideanProfile& phi);

// Quadrature on the support cube: FFT of 128^3 samples, norms from Parseval.
double hdot1_norm(const EuclideanProfile& phi);
cplx hdot1_inner(const EuclideanProfile& phi, const EuclideanProfile& psi);
double l2_norm(const EuclideanProfile& phi);

struct Frame {
  double N = 1.0;
  double t0 = 0.0;
  Vec3 x0{};
  void validate() const;
};

// band_limited: Fourier coefficients of f_N by a separable quadrature
// transform (nodes midpoints of the support cube), truncated to the lattice
// band. sampled: f_N evaluated at the grid points.
enum class Transplant { band_limited, sampled };

struct TransplantOptions {
  Transplant mode = Transplant::band_limited;
  int nodes = 64;  // quadrature nodes per axis across the support cube
};

// M < 4N is rejected; M < 8N is reported through flags.
SpectralField rescale_spectrum(const EuclideanProfile& phi, double N, const Lattice& l,
                               const TransplantOptions& opt = {}, std::vector<std::string>* flags = nullptr);
EvenSpectralField rescale_spectrum_even(const EuclideanProfile& phi, double N, const Lattice& l,
                                        const TransplantOptions& opt = {},
                                        std::vector<std::string>* flags = nullptr);
TorusField rescale_to_torus(const EuclideanProfile& phi, double N, const Lattice& l,
                            const TransplantOptions& opt = {}, std::vector<std::string>* flags = nullptr);
EvenTorusField rescale_to_torus_even(const EuclideanProfile& phi, double N, const Lattice& l,
                                     const TransplantOptions& opt = {},
                                     std::vector<std::string>* flags = nullptr);

// frame_operator(rescale_to_torus(phi, N), t0, x0).
SpectralField make_profile_spectrum(const EuclideanProfile& phi, const Frame& f, const Lattice& l,
                                    const TransplantOptions& opt = {}, std::vector<std::string>* flags = nullptr);
TorusField make_profile(const EuclideanProfile& phi, const Frame& f, const Lattice& l,
                        const TransplantOptions& opt = {}, std::vector<std::string>* flags = nullptr);

double torus_distance(const Vec3& a, const Vec3& b);
// max over both orders of |ln(N_A/N_B)| + N_A^2 |t_A - t_B| + N_A dist(x_A, x_B).
double frame_divergence(const Frame& a, const Frame& b);
// Divergences nondecreasing along the sequences and the last one above threshold.
bool classified_orthogonal(const std::vector<Frame>& a, const std::vector<Frame>& b, double threshold);

struct PairingRow {
  std::size_t k = 0;
  Frame a;
  Frame b;
  int M = 0;
  double divergence = 0.0;
  cplx h1;        // <psi_k, phi_k>_{H1}
  cplx l2;        // <psi_k, phi_k>_{L2}
  double l6 = 0;  // <|psi_k|^3, |phi_k|^3>
  double l2_norm_a = 0.0;
  double l2_norm_b = 0.0;
  std::vector<std::string> flags;
};

struct OrthogonalityReport {
  std::vector<PairingRow> rows;
  double target_h1 = 0.0;  // <psi, phi>_{Hdot1(R^3)} real part, the same-frame limit
  // Each pairing modulus nonincreasing along k (values below floor count as 0).
  bool h1_decreasing = true;
  bool l2_decreasing = true;
  bool l6_decreasing = true;
  double floor = 1e-12;
  nlohmann::ordered_json to_json() const;
};

// psi on frames a[k], phi on frames b[k], lattice M[k].
OrthogonalityReport orthogonality_decay(const EuclideanProfile& psi, const EuclideanProfile& phi,
                                        const std::vector<Frame>& a, const std::vector<Frame>& b,
                                        const std::vector<int>& lattices, const TransplantOptions& opt = {});

// f = g + sum profiles + remainder, compared with the sum of the pieces.
struct PythagoreanReport {
  double l2_total = 0.0, l2_pieces = 0.0, l2_defect = 0.0;
  double h1_total = 0.0, h1_pieces = 0.0, h1_defect = 0.0;  // homogeneous Hdot1, squared norms
  double l6_total = 0.0, l6_pieces = 0.0, l6_defect = 0.0;  // sixth powers
  nlohmann::ordered_json to_json() const;
};
PythagoreanReport pythagorean_report(const TorusField& g, const std::vector<TorusField>& profiles,
                                     const TorusField& remainder);

// max over dyadic N and the given times of N^{-1/2} ||e^{itLap} P_N r||_{L^inf}.
double smallness(const TorusField& r, const std::vector<double>& times);

// c_{p,q} = <e^{ipx}, K e^{iqx}> for K = P_{>BN} int e^{-itLap} W e^{itLap} dt P_{>BN},
// W(x, t) = N^4 eta3(N x) eta1(N^2 t), unnormalized exponentials. Real and symmetric.
// The entries of K in the orthonormal Fourier basis are c_{p,q} / (2pi)^3.
double hflf_coefficient(double N, double B, const Int3& p, const Int3& q);

// N^{-1} [1 + ||p|^2 - |q|^2| / N^2]^{-10} [1 + |p - q| / N]^{-10}.
double hflf_envelope(double N, const Int3& p, const Int3& q);

// One-dimensional transforms behind c_{p,q}: g(k) = int eta1(s)^2 e^{-iks} ds and
// h(k) = int eta1(s) e^{-iks} ds, composite Gauss-Legendre on the transition.
double eta1_sq_transform(double k);
double eta1_transform(double k);

struct SchurRow {
  Int3 p{};
  double sum = 0.0;
  double tail = 0.0;
};

struct SchurResult {
  double N = 0, B = 0;
  int P_max = 0;
  double max_row_sum = 0.0;
  Int3 argmax{};
  double tail_estimate = 0.0;  // at the maximizing row
  std::vector<SchurRow> rows;  // rows evaluated, sorted by p
  std::vector<std::string> flags;
  // max |c| / envelope on the maximizing row, entries above 1e-12 c_max only
  double envelope_constant = 0.0;
  nlohmann::ordered_json to_json() const;
};

// Row sums sum_{|q|_inf <= P_max} |c_{p,q}| for rows |p|_inf <= P_max. By the
// symmetry of c under simultaneous signed permutations only 0 <= p1 <= p2 <= p3
// is evaluated. row_stride > 1 evaluates every row_stride-th row first and then
// all rows around the best few.
SchurResult hflf_schur_sums(double N, double B, int P_max, int row_stride = 1);

}  // namespace tnls::profile
