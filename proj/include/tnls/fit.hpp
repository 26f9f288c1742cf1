#pragma once

// Ordinary least squares y = intercept + slope x with residual diagnostics.

#include <string>
#include <vector>

namespace tnls {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 0.0;
  // 95% two-sided Student-t interval for the slope (infinite when n <= 2).
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::vector<double> residuals;
  std::size_t n = 0;
  // "pass"-eligible only when r2 >= 0.9; otherwise "inconclusive".
  std::string verdict;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
// Fit of log y against log x.
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tnls
