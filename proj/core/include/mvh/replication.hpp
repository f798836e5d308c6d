#pragma once

#include <vector>

#include "mvh/params.hpp"

namespace mvh {

// Conditional law of the score d1(u, V_u) seen from state (t, v), t < u < T:
// Gaussian with this mean and standard deviation sqrt((u-t)/(T-u)).
struct DLaw {
    double mean;
    double std;
};
DLaw d_law(const ModelParams& p, double t, double u, double v);

// E[N(X)^2] for X ~ N(mean, std^2), N the standard normal CDF.
// n_points == 0 (default): exact reduction to a bivariate normal rectangle,
//   P(Z1 <= m', Z2 <= m'; r) with m' = mean/sqrt(1+std^2), r = std^2/(1+std^2).
// n_points > 0: Gauss-Hermite quadrature of that order (slower, independent
//   code path kept as a cross-check).
// Values always land in [0, 1]; very large std falls back to the exact
// std -> inf limit N(mean/std).
double gauss_expect_Nsq(double mean, double std, int n_points = 0);

// Same two evaluation paths for E[N(X) phi(X)] (phi the normal density),
// the kernel of the v-derivative below.
double gauss_expect_Nphi(double mean, double std, int n_points = 0);

// c(t,v): expected accumulated variance of the non-hedgeable hedge residual,
// sigma1^2 (1-rho^2) E[ int_t^T a(u) V_u^2 (db/dv)^2 du ]. c_tilde = c / v^2.
struct CTildeOutputs {
    double c;
    double c_tilde;
    double dctilde_dv;  // analytic derivative; < 0 for t < T, |rho| < 1
};

// Gauss-Legendre evaluation of the time integral. The integration variable is
// w = sqrt((T-u)/(T-t)), which absorbs the sqrt(T-u) endpoint behavior of the
// integrand and makes it analytic; doubling cfg.quad_points moves the result
// by O(1e-14) relative.
CTildeOutputs c_value(const ModelParams& p, double t, double v,
                      const NumericsConfig& cfg = {});

std::vector<CTildeOutputs> c_tilde_curve(const ModelParams& p, double t,
                                         const std::vector<double>& vs,
                                         const NumericsConfig& cfg = {});

// Explicit constant K with |v * dctilde/dv| <= K * sqrt(T-t) for all v.
double dctilde_dv_bound_constant(const ModelParams& p);

// Below this value the quadrature for c_tilde retains no relative accuracy
// (the bivariate-normal tail carries absolute error only), so order
// comparisons between such values are noise.  ~8 orders of magnitude above
// the largest observed artifact and ~24 orders below any effect on
// exp(-kappa * c_tilde).
inline constexpr double kCtildeNoiseFloor = 1e-40;

}  // namespace mvh
