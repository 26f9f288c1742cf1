#pragma once

// Independent reference computations shared by the unit tests and the acceptance binary.

#include <cmath>
#include <vector>

#include "tnls/profiles.hpp"
#include "tnls/spectral.hpp"

namespace oracle {

using namespace tnls;

// Direct 4-D midpoint quadrature of c_{p,q} = chi(p) chi(q) int W(x, t) e^{i(q-p).x} e^{i(|p|^2-|q|^2)t} dx dt
// over the support |x_i| <= 2/N, |t| <= 2/N^2 of W = N^4 prod_i eta1(N x_i)^2 eta1(N^2 t), n nodes per
// axis. The time sum is factored out of the spatial triple sum.
inline cplx hflf_direct(double N, double B, const Int3& p, const Int3& q, int n = 128) {
  double hx = 4.0 / N / n, ht = 4.0 / (N * N) / n;
  std::vector<cplx> ex[3];
  std::vector<double> wx(n);
  for (int j = 0; j < n; ++j) {
    double x = -2.0 / N + (j + 0.5) * hx;
    double e = eta1(N * x);
    wx[j] = e * e;
    for (int d = 0; d < 3; ++d) ex[d].push_back(std::polar(1.0, (q[d] - p[d]) * x));
  }
  double w = 0;
  for (int d = 0; d < 3; ++d) w += double(p[d]) * p[d] - double(q[d]) * q[d];
  std::vector<cplx> et(n);
  for (int k = 0; k < n; ++k) {
    double t = -2.0 / (N * N) + (k + 0.5) * ht;
    et[k] = std::polar(eta1(N * N * t), w * t);
  }
  cplx tsum = 0.0;
  for (int k = 0; k < n; ++k) tsum += et[k];
  cplx s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) s += ex[0][a] * ex[1][b] * ex[2][c] * (wx[a] * wx[b] * wx[c]) * tsum;
  double sc = 1.0;
  for (const Int3* r : {&p, &q}) sc *= 1.0 - eta3({(*r)[0] / (B * N), (*r)[1] / (B * N), (*r)[2] / (B * N)});
  return sc * std::pow(N, 4) * s * hx * hx * hx * ht;
}

}  // namespace oracle
