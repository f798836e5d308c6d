#pragma once

#include <vector>

#include "mvh/params.hpp"

namespace mvh {

// Log-space grid for the backward solves. The domain is
// u = ln v in [ln D - w, ln D + w], w = width_sigmas * sigma1 * sqrt(T),
// with n_u intervals; n_u must be even so ln D (the payoff kink) is a node.
struct PdeGridSpec {
    int n_u = 400;
    int n_tau = 400;
    double width_sigmas = 8.0;
    int rannacher_substeps = 4;  // fully implicit half-steps before trapezoidal stepping
};

// Surface on (tau, u); tau = T - t runs from 0 (payoff row) to T.
// Values are already back-transformed to the original quantity.
struct GridSolution {
    std::vector<double> u;       // n_u + 1 nodes
    std::vector<double> tau;     // n_tau + 1 levels
    std::vector<double> values;  // row-major [tau][u]

    double at(int i_tau, int i_u) const {
        return values[static_cast<std::size_t>(i_tau) * u.size() + i_u];
    }
    // Linear interpolation along u at a fixed tau row.
    double interp_u(int i_tau, double uq) const;
};

// b by an independent route: symmetrize b~ = b e^{-eta u - beta tau}, march the
// resulting pure heat equation db~/dtau = sigma1^2/2 d2b~/du2 by trapezoidal
// stepping with damped startup, payoff initial row, and far-field Dirichlet
// data from the asymptotic values (b -> D upward, b -> v e^{alpha tau} downward).
GridSolution solve_b_pde(const ModelParams& p, const PdeGridSpec& spec = {});

// c by the same route: c_heat = c e^{-alpha1 u - beta1 tau} satisfies the heat
// equation with source e^{-alpha1 u - beta1 tau} a(tau) sigma1^2 (1-rho^2)
// (db/du)^2, zero initial data and zero far-field boundaries (the source dies
// off in both directions). db/du is analytic: e^{u + alpha tau} N(d1).
// Note: c_heat is the transformed unknown of this solver, unrelated to
// c_tilde = c/v^2 used by the pricing rule.
GridSolution solve_c_pde(const ModelParams& p, const PdeGridSpec& spec = {});

// Which closed-form surface to differentiate into its PDE.
enum class Residual { a, b, c };

// Max relative residual over the (t, v) product grid, t < T; each residual is
// normalized by its largest constituent term.
//   a: d a/dt - theta_bar^2 a = 0 (da/dt by central difference)
//   b: d b/dt + alpha v db/dv + sigma1^2 v^2 d2b/dv2 / 2 = 0 (all analytic)
//   c: d c/dt + mu1 v dc/dv + sigma1^2 v^2 d2c/dv2 / 2
//      + a sigma1^2 v^2 (1-rho^2) (db/dv)^2 = 0, with dc/dt and d2c/dv2 by
//      central differences (cfg.fd_bump), dc/dv analytic.
double residual_check(const ModelParams& p, Residual which,
                      const std::vector<double>& ts, const std::vector<double>& vs,
                      const NumericsConfig& cfg = {});

}  // namespace mvh
