#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace tnls {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using Int3 = std::array<int, 3>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double infinity = std::numeric_limits<double>::infinity();

// Bad arguments, violated preconditions, malformed files or configs.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Overflow, NaN, blow-up guard and similar failures during a computation.
class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interval {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
};

inline double norm2(const Vec3& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

// True if n is a positive integer power of two (1 included).
inline bool is_dyadic(double n) {
  if (!(n >= 1.0) || n > 1e18) return false;
  auto k = static_cast<unsigned long long>(n);
  if (static_cast<double>(k) != n) return false;
  return (k & (k - 1)) == 0;
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace tnls
