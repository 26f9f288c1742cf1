#include "tnls/fit.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "tnls/types.hpp"

namespace tnls {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), "fit: x and y differ in length");
  require(x.size() >= 2, "fit: need at least two points");
  LinearFit f;
  f.n = x.size();
  double n = static_cast<double>(f.n);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < f.n; ++i) {
    require(std::isfinite(x[i]) && std::isfinite(y[i]), "fit: non-finite data");
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < f.n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0, "fit: x values are all equal");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < f.n; ++i) {
    double r = y[i] - (f.intercept + f.slope * x[i]);
    f.residuals.push_back(r);
    sse += r * r;
  }
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  if (f.n > 2) {
    f.slope_stderr = std::sqrt(sse / (n - 2) / sxx);
    boost::math::students_t dist(n - 2);
    double q = boost::math::quantile(boost::math::complement(dist, 0.025));
    f.ci_low = f.slope - q * f.slope_stderr;
    f.ci_high = f.slope + q * f.slope_stderr;
  } else {
    f.slope_stderr = infinity;
    f.ci_low = -infinity;
    f.ci_high = infinity;
  }
  f.verdict = f.r2 >= 0.9 ? "fit" : "inconclusive";
  return f;
}

LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0 && y[i] > 0, "log-log fit needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly);
}

}  // namespace tnls
