#pragma once

namespace mvh {

double norm_pdf(double x);

// Standard normal CDF via erfc; absolute error below 1e-15 over the whole axis
// and good relative accuracy in the lower tail.
double norm_cdf(double x);

// P(X <= x, Y <= y) for a standard bivariate normal pair with correlation r.
// Gauss-Legendre evaluation of the single-integral reduction, with a separate
// expansion for |r| near 1; absolute error ~5e-16, and the tail keeps several
// correct leading digits, so monotonicity scans remain meaningful there.
double bvn_cdf(double x, double y, double r);

}  // namespace mvh
