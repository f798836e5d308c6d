#include "mvh/closed_form.hpp"

#include <cmath>
#include <limits>

#include "mvh/normal.hpp"

namespace mvh {

namespace {
constexpr double kTauFloor = 1e-12;
const double kInf = std::numeric_limits<double>::infinity();
const double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

double a_of_t(const ModelParams& p, double t) {
    const DerivedConstants dc = derive(p);
    if (!std::isfinite(t) || t < 0.0 || t > p.T)
        throw DomainError("a_of_t: t outside [0, T]");
    return std::exp(-dc.theta_bar * dc.theta_bar * (p.T - t));
}

BOutputs b_price(const ModelParams& p, double t, double v) {
    const DerivedConstants dc = derive(p);
    if (!std::isfinite(t) || t < 0.0 || t > p.T)
        throw DomainError("b_price: t outside [0, T]");
    if (!std::isfinite(v) || v <= 0.0)
        throw DomainError("b_price: v must be positive");

    const double tau = p.T - t;
    BOutputs o{};
    if (tau < kTauFloor) {
        // Payoff row; sensitivities are the t -> T limits.
        o.b = std::min(v, p.D);
        o.d1 = v < p.D ? kInf : (v > p.D ? -kInf : 0.0);
        o.d2 = o.d1;
        o.db_dv = v < p.D ? 1.0 : (v > p.D ? 0.0 : 0.5);
        o.db_dalpha = 0.0;
        o.db_dt = v == p.D ? kInf : -dc.alpha * v * o.db_dv;
        o.d2b_dv2 = v == p.D ? -kInf : 0.0;
        return o;
    }

    const double sq = p.sigma1 * std::sqrt(tau);
    const double growth = std::exp(dc.alpha * tau);
    o.d1 = (std::log(p.D / v) - (dc.alpha + 0.5 * p.sigma1 * p.sigma1) * tau) / sq;
    o.d2 = o.d1 + sq;
    const double nd1 = norm_cdf(o.d1);
    o.b = v * growth * nd1 + p.D * (1.0 - norm_cdf(o.d2));
    o.db_dv = growth * nd1;
    o.db_dalpha = v * tau * growth * nd1;
    // dN(d1)/dt and dN(d2)/dt contributions cancel except for the sq term in d2:
    // v e^{alpha tau} phi(d1) = D phi(d2).
    o.db_dt = -dc.alpha * v * growth * nd1 + p.D * norm_pdf(o.d2) * p.sigma1 / (2.0 * std::sqrt(tau));
    o.d2b_dv2 = -growth * norm_pdf(o.d1) / (v * sq);
    return o;
}

double merton_baseline(double v, double D, double sigma1, double tau) {
    if (!(v > 0.0) || !(D > 0.0) || !(sigma1 > 0.0) || !std::isfinite(tau) || tau < 0.0)
        throw DomainError("merton_baseline: need v, D, sigma1 > 0 and tau >= 0");
    if (tau < kTauFloor) return std::min(v, D);
    const double sq = sigma1 * std::sqrt(tau);
    const double d1 = (std::log(D / v) - 0.5 * sigma1 * sigma1 * tau) / sq;
    const double d2 = d1 + sq;
    return v * norm_cdf(d1) + D * (1.0 - norm_cdf(d2));
}

double yield_spread(double B, double D, double tau) {
    if (!(B > 0.0) || !(D > 0.0) || !(tau > 0.0)) return kNaN;
    return (std::log(D) - std::log(B)) / tau;
}

}  // namespace mvh
