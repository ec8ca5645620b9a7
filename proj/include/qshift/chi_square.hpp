#pragma once

namespace qshift {

// Upper tail Pr(X >= x) of the chi-square distribution for df in {1, 2, 3}.
// df 1 and 3 go through erfc, df 2 is exp(-x/2).
double chi_square_sf(double x, int df);

// Smallest x with chi_square_sf(x, df) <= tail, by bisection to full precision.
double chi_square_upper_quantile(double tail, int df);

// Standard Normal cdf and density.
double normal_cdf(double z);
double normal_pdf(double z);

}  // namespace qshift
