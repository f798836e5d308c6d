#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mvh {

// Inputs outside the supported domain (bad parameters, malformed files).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Degenerate quadratic fit of simulated hedging errors.
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid finite-difference grid setup.
struct GridError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Two correlated geometric Brownian motions: the firm value V (not traded)
// and a hedge asset S (traded). The bond pays min(V_T, D) at maturity T.
// kappa weighs the variance of the non-hedgeable residual in the price.
struct ModelParams {
    double mu1 = 0.02;     // drift of V
    double sigma1 = 0.15;  // volatility of V
    double mu2 = 0.2;      // drift of S
    double sigma2 = 0.5;   // volatility of S
    double rho = 0.6;      // instantaneous correlation of the two Brownian drivers
    double T = 10.0;       // bond maturity
    double D = 100.0;      // face value
    double kappa = 1.0;    // risk-aversion weight on unhedgeable variance
};

// Constants derived from ModelParams. alpha is the drift left over on V after
// projecting out the hedgeable part; theta_bar the market price of S-risk.
struct DerivedConstants {
    double alpha;      // mu1 - rho*mu2*sigma1/sigma2
    double theta_bar;  // mu2/sigma2
    double eta;        // 1/2 - alpha/sigma1^2, log-space symmetrization exponent
    double beta;       // -sigma1^2*eta^2/2, matching time-decay exponent
    double alpha1;     // 1/2 - mu1/sigma1^2, same under the physical drift
    double beta1;      // -sigma1^2*alpha1^2/2
    double k1;         // -theta_bar^2 - sigma1^2 - 2*theta_bar*rho*sigma1
    bool novikov;      // 1/2 + alpha/sigma1^2 > 0 (exponential-moment flag)
};

struct MarketState {
    double t = 0.0;  // current time
    double v = 0.0;  // firm value
    double s = 0.0;  // hedge asset price
    double p = 0.0;  // hedge portfolio wealth
};

// Shared numerical knobs. Every tolerance or resolution used by the library
// routes through here so runs are reproducible from the manifest alone.
struct NumericsConfig {
    int quad_points = 64;          // Gauss-Legendre order for the time integral
    int inner_quad_points = 64;    // Gauss-Hermite order for cross-check expectations
    double fd_bump = 1e-5;         // relative finite-difference bump
    int pde_n_u = 400;             // space intervals for the log-value grid
    int pde_n_tau = 400;           // time steps for the backward solve
    double pde_width_sigmas = 8.0; // half-width of the log grid in sigma1*sqrt(T)
    int pde_rannacher_substeps = 4;// damped implicit half-steps before trapezoidal stepping
    std::int64_t mc_paths = 200000;
    int mc_steps = 500;
    std::uint64_t rng_seed = 12345;
    int diag_grid_n = 100;         // coarse diagnostics grid, per axis
    double diag_time_edge = 1e-3;  // diagnostics stop at t = T*(1 - diag_time_edge)
    double fit_min_r2 = 0.99;      // below this the hedging-error fit is rejected
};

// Throw DomainError on non-finite or out-of-range parameters.
void validate(const ModelParams& p);
void validate(const NumericsConfig& cfg);

// Validates, then computes the derived constants.
DerivedConstants derive(const ModelParams& p);

// JSON parameter files: object with exactly the keys
// mu1, sigma1, mu2, sigma2, rho, T, D, kappa (all optional, defaults apply).
// Unknown keys are rejected with DomainError.
ModelParams params_from_json_text(const std::string& text);
std::string params_to_json_text(const ModelParams& p);

}  // namespace mvh
