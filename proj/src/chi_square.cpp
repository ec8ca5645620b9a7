#include "qshift/chi_square.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qshift/errors.hpp"

namespace qshift {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double chi_square_sf(double x, int df) {
  if (std::isnan(x)) throw InputError("chi-square statistic is NaN");
  if (x <= 0.0) return 1.0;
  switch (df) {
    case 1:
      return std::erfc(std::sqrt(0.5 * x));
    case 2:
      return std::exp(-0.5 * x);
    case 3:
      return std::erfc(std::sqrt(0.5 * x)) +
             std::sqrt(2.0 * x / std::numbers::pi) * std::exp(-0.5 * x);
    default:
      throw InputError("chi-square survival implemented for df 1, 2, 3 only (got " +
                       std::to_string(df) + ")");
  }
}

double chi_square_upper_quantile(double tail, int df) {
  if (!(tail > 0.0 && tail < 1.0)) throw InputError("tail probability must lie in (0, 1)");
  double lo = 0.0;
  double hi = 1.0;
  while (chi_square_sf(hi, df) > tail) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (chi_square_sf(mid, df) > tail) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace qshift
