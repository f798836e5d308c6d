#pragma once

#include "mvh/params.hpp"

namespace mvh {

// b(t,v) and its sensitivities. b is the expected payoff E[min(V_T, D)] when
// V grows at the residual rate alpha; it is the capital needed by the
// variance-optimal hedge, before the unhedgeable-risk adjustment.
struct BOutputs {
    double b;
    double d1;        // log-moneyness score; min payoff splits at d1, d2 = d1 + sigma1*sqrt(tau)
    double d2;
    double db_dv;     // exp(alpha*tau) N(d1), in (0, exp(alpha*tau))
    double db_dt;
    double db_dalpha; // v*tau*exp(alpha*tau)*N(d1)
    double d2b_dv2;   // -exp(alpha*tau) phi(d1) / (v*sigma1*sqrt(tau)) <= 0
};

// exp(-theta_bar^2 (T-t)): weight of the squared wealth gap in the hedging
// objective, and the quadratic coefficient recovered by the simulation fit.
double a_of_t(const ModelParams& p, double t);

// Closed form for b. Requires 0 <= t <= T, v > 0. At t == T (within 1e-12)
// returns the payoff min(v, D) and one-sided limits of the sensitivities.
BOutputs b_price(const ModelParams& p, double t, double v);

// Zero-rate reference bond value E[min(v e^{-s^2 tau/2 + s W_tau}, D)]:
// the alpha = 0 special case of b.
double merton_baseline(double v, double D, double sigma1, double tau);

// Continuously compounded spread of price B over face D and horizon tau.
double yield_spread(double B, double D, double tau);

}  // namespace mvh
