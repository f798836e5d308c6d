#pragma once

#include <string>
#include <vector>

#include "mvh/params.hpp"

namespace mvh {

// B(t,v) = b * exp(-kappa * c_tilde): replication capital discounted for the
// variance of the residual the hedge cannot remove.
struct PriceBreakdown {
    double a;
    double b;
    double c;
    double c_tilde;
    double discount;  // exp(-kappa * c_tilde)
    double price;     // B
    double yield;     // (ln D - ln B)/(T-t); NaN at t == T
};

PriceBreakdown bond_price(const ModelParams& p, double t, double v,
                          const NumericsConfig& cfg = {});

// Volatility loading of B along V: e^{-kappa c~} v sigma1 (db/dv - kappa b dc~/dv).
// Strictly positive for t < T; the no-arbitrage change of measure needs it
// nonvanishing.
double N_process(const ModelParams& p, double t, double v,
                 const NumericsConfig& cfg = {});

// Drift of B along V: (d_t + mu1 v d_v + sigma1^2 v^2 d_vv / 2) applied to
// b e^{-kappa c~}. b-derivatives are analytic; the time and second space
// derivatives of c_tilde use central differences with cfg.fd_bump.
double M_process(const ModelParams& p, double t, double v,
                 const NumericsConfig& cfg = {});

// Grid scan of the quantities entering the no-free-lunch argument.
// theta = M/N is the candidate market price of V-risk; its sup is compared
// across a coarse and a nested refined grid. Points where db/dv underflows
// (deep lognormal tail, score below -37) are excluded and counted.
struct DiagnosticsReport {
    double min_N;                        // over non-underflow grid points
    double sup_theta_coarse;             // sup |M/N|, coarse grid
    double sup_theta_fine;               // sup |M/N|, refined (nested) grid
    int violations_monotone_ctilde;      // strict increases of c_tilde along v
    int violations_sign_dbdv;            // db/dv not strictly positive
    int violations_sign_dctildedv;       // dc_tilde/dv positive (tail points whose
                                         // derivative underflows to 0 do not count)
    bool novikov_condition;              // 1/2 + alpha/sigma1^2 > 0
    int skipped_underflow_coarse;
    int skipped_underflow_fine;
    int grid_n_coarse;                   // per-axis node count - 1
    double v_lo, v_hi;                   // log-spaced v range of the scan
    double t_hi;                         // scan covers t in [0, t_hi]
};

// |rho| == 1 is refused (complete market; the residual degenerates).
DiagnosticsReport nflvr_diagnostics(const ModelParams& p,
                                    const NumericsConfig& cfg = {});

// Fixed-field JSON for the report (17 significant digits, stable key order).
std::string diagnostics_to_json(const DiagnosticsReport& r);

}  // namespace mvh
