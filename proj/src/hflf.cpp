#include <algorithm>
#include <cmath>
#include <set>

#include <boost/math/quadrature/gauss.hpp>

#include "tnls/profiles.hpp"

namespace tnls::profile {

namespace {

// int_{-2}^{2} w(s) cos(ks) ds for an even weight equal to 1 on [-1, 1]:
// the flat part in closed form, the transition by composite Gauss-Legendre.
template <class W>
double even_transform(double k, W&& w) {
  double flat = std::fabs(k) < 1e-8 ? 2.0 * (1.0 - k * k / 6.0) : 2.0 * std::sin(k) / k;
  int panels = std::max(4, static_cast<int>(std::ceil(std::fabs(k) / 2.0)));
  double h = 1.0 / panels, s = 0.0;
  for (int p = 0; p < panels; ++p) {
    double a = 1.0 + p * h;
    s += boost::math::quadrature::gauss<double, 16>::integrate([&](double x) { return w(x) * std::cos(k * x); }, a,
                                                               a + h);
  }
  return flat + 2.0 * s;
}

double mask(double B, double N, const Int3& p) {
  double s = B * N;
  return 1.0 - eta3({p[0] / s, p[1] / s, p[2] / s});
}

}  // namespace

double eta1_sq_transform(double k) {
  return even_transform(k, [](double x) {
    double e = eta1(x);
    return e * e;
  });
}

double eta1_transform(double k) { return even_transform(k, [](double x) { return eta1(x); }); }

double hflf_coefficient(double N, double B, const Int3& p, const Int3& q) {
  require(N >= 1.0 && B >= 1.0, "hflf: N and B must be >= 1");
  double m = mask(B, N, p) * mask(B, N, q);
  if (m == 0.0) return 0.0;
  double g = 1.0;
  for (int d = 0; d < 3; ++d) g *= eta1_sq_transform((p[d] - q[d]) / N);
  long long w = 0;
  for (int d = 0; d < 3; ++d) w += static_cast<long long>(q[d]) * q[d] - static_cast<long long>(p[d]) * p[d];
  return m * g * eta1_transform(static_cast<double>(w) / (N * N)) / N;
}

double hflf_envelope(double N, const Int3& p, const Int3& q) {
  long long w = 0;
  double v2 = 0.0;
  for (int d = 0; d < 3; ++d) {
    w += static_cast<long long>(q[d]) * q[d] - static_cast<long long>(p[d]) * p[d];
    v2 += static_cast<double>(p[d] - q[d]) * (p[d] - q[d]);
  }
  return std::pow(1.0 + std::fabs(static_cast<double>(w)) / (N * N), -10.0) * std::pow(1.0 + std::sqrt(v2) / N, -10.0) /
         N;
}

namespace {

constexpr double envelope_floor = 1e-12;

struct Tables {
  double N, B;
  int P;       // rows and columns |.|_inf <= P
  int ext;     // extension band for the tail estimate
  std::vector<double> g;   // |g((v)/N)| for v in [-2(P+ext), 2(P+ext)]
  std::vector<double> h;   // |h(w/N^2)| for w in [-3(P+ext)^2, 3(P+ext)^2]
  std::vector<double> m1;  // eta1(q/BN)^2 for q in [-(P+ext), P+ext]
  int voff, woff, qoff;

  Tables(double N_, double B_, int P_, int ext_) : N(N_), B(B_), P(P_), ext(ext_) {
    int Q = P + ext;
    voff = 2 * Q;
    woff = 3 * Q * Q;
    qoff = Q;
    g.resize(4 * Q + 1);
    h.resize(6 * static_cast<std::size_t>(Q) * Q + 1);
    m1.resize(2 * Q + 1);
#pragma omp parallel for schedule(static)
    for (int v = -voff; v <= voff; ++v) g[v + voff] = std::fabs(eta1_sq_transform(v / N));
#pragma omp parallel for schedule(dynamic, 64)
    for (long long w = -woff; w <= woff; ++w) h[w + woff] = std::fabs(eta1_transform(w / (N * N)));
    for (int q = -Q; q <= Q; ++q) {
      double e = eta1(q / (B * N));
      m1[q + qoff] = e * e;
    }
  }

  double mask_of(const Int3& p) const {
    return 1.0 - m1[p[0] + qoff] * m1[p[1] + qoff] * m1[p[2] + qoff];
  }

  // sum |c_{p,q}| over lo < |q|_inf <= hi (lo = -1 for the full cube).
  double row_sum(const Int3& p, int lo, int hi) const {
    double mp = mask_of(p);
    if (mp == 0.0) return 0.0;
    long long p2 = static_cast<long long>(p[0]) * p[0] + static_cast<long long>(p[1]) * p[1] +
                   static_cast<long long>(p[2]) * p[2];
    double s = 0.0;
    for (int q1 = -hi; q1 <= hi; ++q1) {
      double g1 = g[p[0] - q1 + voff];
      double a1 = m1[q1 + qoff];
      bool out1 = std::abs(q1) > lo;
      for (int q2 = -hi; q2 <= hi; ++q2) {
        double g12 = g1 * g[p[1] - q2 + voff];
        double a12 = a1 * m1[q2 + qoff];
        bool out12 = out1 || std::abs(q2) > lo;
        long long base = static_cast<long long>(q1) * q1 + static_cast<long long>(q2) * q2 - p2 + woff;
        double acc = 0.0;
        for (int q3 = -hi; q3 <= hi; ++q3) {
          if (!out12 && std::abs(q3) <= lo) continue;
          double mq = 1.0 - a12 * m1[q3 + qoff];
          acc += g[p[2] - q3 + voff] * mq * h[base + static_cast<long long>(q3) * q3];
        }
        s += g12 * acc;
      }
    }
    return mp * s / N;
  }

  // max over |q|_inf <= P of |c_{p,q}| / envelope(p, q).
  double envelope_ratio(const Int3& p) const {
    double mp = mask_of(p);
    if (mp == 0.0) return 0.0;
    // Entries below the quadrature noise of the 1-D transforms are left out.
    double floor = envelope_floor * g[voff] * g[voff] * g[voff] * h[woff] / N;
    double best = 0.0;
    for (int q1 = -P; q1 <= P; ++q1)
      for (int q2 = -P; q2 <= P; ++q2)
        for (int q3 = -P; q3 <= P; ++q3) {
          Int3 q{q1, q2, q3};
          double mq = mask_of(q);
          if (mq == 0.0) continue;
          long long w = static_cast<long long>(q1) * q1 + static_cast<long long>(q2) * q2 +
                        static_cast<long long>(q3) * q3 - static_cast<long long>(p[0]) * p[0] -
                        static_cast<long long>(p[1]) * p[1] - static_cast<long long>(p[2]) * p[2];
          double c = mp * mq * g[p[0] - q1 + voff] * g[p[1] - q2 + voff] * g[p[2] - q3 + voff] * h[w + woff] / N;
          if (c < floor) continue;
          double env = hflf_envelope(N, p, q);
          best = std::max(best, c / env);
        }
    return best;
  }
};

Int3 canonical(Int3 p) {
  for (auto& v : p) v = std::abs(v);
  std::sort(p.begin(), p.end());
  return p;
}

}  // namespace

SchurResult hflf_schur_sums(double N, double B, int P_max, int row_stride) {
  require(N >= 1.0 && B >= 1.0, "hflf_schur_sums: N and B must be >= 1");
  require(P_max >= 1, "hflf_schur_sums: P_max must be >= 1");
  require(row_stride >= 1, "hflf_schur_sums: row_stride must be >= 1");
  int ext = static_cast<int>(std::ceil(2 * N));
  Tables tab(N, B, P_max, ext);
  SchurResult res;
  res.N = N;
  res.B = B;
  res.P_max = P_max;

  std::set<Int3> done;
  std::vector<SchurRow> rows;
  auto evaluate = [&](std::vector<Int3> batch) {
    std::vector<Int3> todo;
    for (const auto& p : batch)
      if (done.insert(p).second && tab.mask_of(p) > 0.0) todo.push_back(p);
    std::vector<SchurRow> out(todo.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < static_cast<long long>(todo.size()); ++i)
      out[i] = {todo[i], tab.row_sum(todo[i], -1, P_max), 0.0};
    rows.insert(rows.end(), out.begin(), out.end());
  };

  std::vector<Int3> first;
  for (int a = 0; a <= P_max; a += row_stride)
    for (int b = a; b <= P_max; b += row_stride)
      for (int c = b; c <= P_max; c += row_stride) first.push_back({a, b, c});
  evaluate(first);
  if (row_stride > 1) {
    auto coarse = rows;
    std::sort(coarse.begin(), coarse.end(), [](const SchurRow& x, const SchurRow& y) { return x.sum > y.sum; });
    std::vector<Int3> near;
    for (std::size_t i = 0; i < std::min<std::size_t>(4, coarse.size()); ++i) {
      const auto& c = coarse[i].p;
      for (int d0 = -row_stride + 1; d0 < row_stride; ++d0)
        for (int d1 = -row_stride + 1; d1 < row_stride; ++d1)
          for (int d2 = -row_stride + 1; d2 < row_stride; ++d2) {
            Int3 p{c[0] + d0, c[1] + d1, c[2] + d2};
            if (std::max({std::abs(p[0]), std::abs(p[1]), std::abs(p[2])}) > P_max) continue;
            near.push_back(canonical(p));
          }
    }
    evaluate(near);
    res.flags.push_back("rows sampled with stride " + std::to_string(row_stride) + " and refined");
  }
  std::sort(rows.begin(), rows.end(), [](const SchurRow& x, const SchurRow& y) { return x.p < y.p; });
  for (const auto& r : rows)
    if (r.sum > res.max_row_sum) {
      res.max_row_sum = r.sum;
      res.argmax = r.p;
    }
  if (res.max_row_sum > 0.0) {
    res.tail_estimate = tab.row_sum(res.argmax, P_max, P_max + ext);
    if (res.tail_estimate > 0.05 * res.max_row_sum)
      res.flags.push_back("P_max too small: tail " + std::to_string(res.tail_estimate / res.max_row_sum) +
                          " of the row sum");
    res.envelope_constant = tab.envelope_ratio(res.argmax);
  } else {
    res.flags.push_back("no row reaches the band |p| > BN within P_max");
  }
  for (auto& r : rows)
    if (r.p == res.argmax) r.tail = res.tail_estimate;
  res.rows = std::move(rows);
  return res;
}

nlohmann::ordered_json SchurResult::to_json() const {
  nlohmann::ordered_json j;
  j["N"] = N;
  j["B"] = B;
  j["P_max"] = P_max;
  j["max_row_sum"] = max_row_sum;
  j["normalized"] = max_row_sum / (N * N);
  j["argmax"] = argmax;
  j["tail_estimate"] = tail_estimate;
  j["envelope_constant"] = envelope_constant;
  j["rows_evaluated"] = rows.size();
  j["flags"] = flags;
  return j;
}

}  // namespace tnls::profile
