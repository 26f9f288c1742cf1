#include "tnls/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "tnls/field.hpp"

namespace tnls {

void* aligned_alloc_bytes(std::size_t bytes) {
  void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
  if (!p) throw std::bad_alloc();
  return p;
}

void aligned_free_bytes(void* p) noexcept { fftw_free(p); }

}  // namespace tnls

namespace tnls::fft {

namespace {

enum class Kind { c2c3, c2c1, dct3, row, slab, column };

struct Key {
  Kind kind;
  int n;
  int sign;
  bool in_place;
  bool operator<(const Key& o) const {
    return std::tie(kind, n, sign, in_place) < std::tie(o.kind, o.n, o.sign, o.in_place);
  }
};

struct Cache {
  std::mutex mu;
  std::map<Key, fftw_plan> plans;
  Planner planner = Planner::estimate;
  ~Cache() {
    for (auto& kv : plans) fftw_destroy_plan(kv.second);
  }
};

Cache& cache() {
  static Cache c;
  return c;
}

unsigned flags() { return cache().planner == Planner::measure ? FFTW_MEASURE : FFTW_ESTIMATE; }

fftw_plan make_plan(const Key& k) {
  std::size_t len = k.kind == Kind::c2c1 || k.kind == Kind::row
                        ? static_cast<std::size_t>(k.n)
                        : static_cast<std::size_t>(k.n) * k.n * k.n;
  auto* a = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * len));
  auto* b = k.in_place ? a : static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * len));
  fftw_plan p = nullptr;
  unsigned f = flags();
  switch (k.kind) {
    case Kind::c2c3:
      p = fftw_plan_dft_3d(k.n, k.n, k.n, a, b, k.sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, f);
      break;
    case Kind::c2c1:
      p = fftw_plan_dft_1d(k.n, a, b, k.sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, f);
      break;
    case Kind::row:
      p = fftw_plan_dft_1d(k.n, a, b, k.sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, f | FFTW_UNALIGNED);
      break;
    case Kind::slab:
    case Kind::column: {
      // n transforms along the middle axis of an n x n slab, or n^2 along the slowest axis.
      int n = k.n;
      int stride = k.kind == Kind::slab ? n : n * n;
      int howmany = stride;
      p = fftw_plan_many_dft(1, &n, howmany, a, nullptr, stride, 1, b, nullptr, stride, 1,
                             k.sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, f | FFTW_UNALIGNED);
      break;
    }
    case Kind::dct3: {
      int dims[3] = {k.n, k.n, k.n};
      fftw_r2r_kind kinds[3] = {FFTW_REDFT00, FFTW_REDFT00, FFTW_REDFT00};
      auto* d = reinterpret_cast<double*>(a);
      p = fftw_plan_many_r2r(3, dims, 2, d, nullptr, 2, 1, d, nullptr, 2, 1, kinds, f);
      break;
    }
  }
  if (b != a) fftw_free(b);
  fftw_free(a);
  if (!p) throw NumericalAbort("FFTW could not create a plan");
  return p;
}

fftw_plan plan_for(const Key& k) {
  Cache& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  auto it = c.plans.find(k);
  if (it != c.plans.end()) return it->second;
  fftw_plan p = make_plan(k);
  c.plans.emplace(k, p);
  return p;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const cplx* p) { return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p)); }

}  // namespace

void set_planner(Planner p) {
  Cache& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  if (c.planner == p) return;
  for (auto& kv : c.plans) fftw_destroy_plan(kv.second);
  c.plans.clear();
  c.planner = p;
}

Planner planner() { return cache().planner; }

void forget_plans() {
  Cache& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  for (auto& kv : c.plans) fftw_destroy_plan(kv.second);
  c.plans.clear();
}

namespace {

bool aligned(const cplx* p) {
  return fftw_alignment_of(reinterpret_cast<double*>(const_cast<cplx*>(p))) == 0;
}

void run_dft(Kind kind, int n, std::size_t len, const cplx* in, cplx* out, int sign) {
  if (aligned(in) && aligned(out)) {
    fftw_execute_dft(plan_for({kind, n, sign, in == out}), as_fftw(in), as_fftw(out));
    return;
  }
  cvec tmp(in, in + len);
  fftw_execute_dft(plan_for({kind, n, sign, true}), as_fftw(tmp.data()), as_fftw(tmp.data()));
  std::copy(tmp.begin(), tmp.end(), out);
}

}  // namespace

void dft3(int n, const cplx* in, cplx* out, int sign) {
  run_dft(Kind::c2c3, n, static_cast<std::size_t>(n) * n * n, in, out, sign);
}

void dft1(int n, const cplx* in, cplx* out, int sign) {
  run_dft(Kind::c2c1, n, static_cast<std::size_t>(n), in, out, sign);
}

void dft3_pruned(int n, cplx* data, int sign, const std::vector<char>& band) {
  require(static_cast<int>(band.size()) == n, "band mask length mismatch");
  std::size_t nn = static_cast<std::size_t>(n) * n;
  fftw_plan row = plan_for({Kind::row, n, sign, true});
  fftw_plan slab = plan_for({Kind::slab, n, sign, true});
  fftw_plan col = plan_for({Kind::column, n, sign, true});
  auto rows = [&] {
#pragma omp parallel for schedule(static)
    for (int i1 = 0; i1 < n; ++i1) {
      if (!band[i1]) continue;
      for (int i2 = 0; i2 < n; ++i2) {
        if (!band[i2]) continue;
        cplx* r = data + i1 * nn + static_cast<std::size_t>(i2) * n;
        fftw_execute_dft(row, as_fftw(r), as_fftw(r));
      }
    }
  };
  auto slabs = [&] {
#pragma omp parallel for schedule(static)
    for (int i1 = 0; i1 < n; ++i1) {
      if (!band[i1]) continue;
      cplx* s = data + i1 * nn;
      fftw_execute_dft(slab, as_fftw(s), as_fftw(s));
    }
  };
  if (sign > 0) {
    rows();
    slabs();
    fftw_execute_dft(col, as_fftw(data), as_fftw(data));
  } else {
    fftw_execute_dft(col, as_fftw(data), as_fftw(data));
    slabs();
    rows();
  }
}

void dct1_3d(int n, cplx* data) {
  require(n >= 2, "DCT-I needs at least two points per axis");
  fftw_plan p = plan_for({Kind::dct3, n, 0, true});
  if (aligned(data)) {
    auto* d = reinterpret_cast<double*>(data);
    fftw_execute_r2r(p, d, d);
    return;
  }
  std::size_t len = static_cast<std::size_t>(n) * n * n;
  cvec tmp(data, data + len);
  auto* d = reinterpret_cast<double*>(tmp.data());
  fftw_execute_r2r(p, d, d);
  std::copy(tmp.begin(), tmp.end(), data);
}

}  // namespace tnls::fft
