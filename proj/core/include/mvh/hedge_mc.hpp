#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mvh/params.hpp"

namespace mvh {

// A batch of joint (V, S) paths on a uniform grid over [t0, T], stepped with
// exact lognormal increments (no Euler bias). Path i is a pure function of
// (seed, i): stream i is an xoshiro256++ generator seeded by splitmix64 from
// seed + i * odd-constant, consuming one Box-Muller pair per step. A batch can
// carry its arrays ("materialized") or describe them lazily; fill_path yields
// identical numbers either way.
struct PathBatch {
    ModelParams params;
    double t0 = 0.0, v0 = 0.0, s0 = 0.0;
    std::int64_t n_paths = 0;
    int n_steps = 0;
    std::uint64_t seed = 0;
    bool materialized = false;
    std::vector<double> v;  // row-major [n_paths][n_steps+1] when materialized
    std::vector<double> s;

    static PathBatch lazy(const ModelParams& p, double t0, double v0, double s0,
                          std::int64_t n_paths, int n_steps, std::uint64_t seed);

    // Writes n_steps+1 values per asset for path i.
    void fill_path(std::int64_t i, double* v_out, double* s_out) const;
};

// Materialized batch; memory is n_paths * (n_steps+1) * 16 bytes.
PathBatch simulate_paths(const ModelParams& p, double t0, double v0, double s0,
                         std::int64_t n_paths, int n_steps, std::uint64_t seed);

// Variance-optimal holding of S given wealth pw:
//   theta* = rho sigma1 v (db/dv) / (sigma2 s) - mu2 (pw - b) / (sigma2^2 s).
// First term: projection of the V-exposure onto S; second: mean-reverts the
// wealth gap toward b. Returns 0 when sigma2*s == 0 (nothing tradable).
double optimal_theta(const ModelParams& p, double t, double v, double s, double pw);

struct HedgeSimResult {
    double p0;
    double mean_sq_error;  // mean of (P_T - min(V_T, D))^2
    double std_error;      // standard error of that mean
    double frac_paths_negative_wealth;  // admissibility spot-check
    std::int64_t n_paths = 0;
    int n_steps = 0;
    std::uint64_t seed = 0;
};

// Self-financing discrete rebalancing of theta* along the batch, starting from
// wealth p0. Accumulation is chunked compensated summation with fixed chunk
// boundaries, so results are bitwise reproducible for any worker count.
HedgeSimResult hedge_once(const ModelParams& p, const PathBatch& batch, double p0);

// Quadratic fit mean_sq_error(p0) ~ a_hat (p0 - b_hat)^2 + c_hat over a p0
// sweep sharing one batch (common random numbers). c_hat_se is the standard
// error of the mean-squared error at the sweep point nearest b_hat.
struct ValueFitResult {
    std::vector<HedgeSimResult> points;
    double a_hat = 0.0;
    double b_hat = 0.0;
    double c_hat = 0.0;
    double c_hat_se = 0.0;
    double r2 = 0.0;
};

// Throws FitError if the fitted quadratic coefficient is <= 0 or R^2 falls
// below cfg.fit_min_r2. p0_grid needs >= 3 distinct points.
ValueFitResult fit_value_function(const ModelParams& p, const PathBatch& batch,
                                  const std::vector<double>& p0_grid,
                                  const NumericsConfig& cfg = {});

// Fixed-field JSON (single run: fit fields null).
std::string hedge_result_to_json(const HedgeSimResult& r);
std::string fit_result_to_json(const ValueFitResult& r);

}  // namespace mvh
