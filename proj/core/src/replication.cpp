#include "mvh/replication.hpp"

#include <cmath>

#include "mvh/normal.hpp"
#include "mvh/quadrature.hpp"

namespace mvh {

namespace {
constexpr double kTauFloor = 1e-12;
const double kSqrt2 = 1.4142135623730950488;
const double kInvSqrtPi = 0.56418958354775628695;
const double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

DLaw d_law(const ModelParams& p, double t, double u, double v) {
    const DerivedConstants dc = derive(p);
    if (!std::isfinite(v) || v <= 0.0) throw DomainError("d_law: v must be positive");
    if (!(t >= 0.0) || !(u >= t) || !(u < p.T))
        throw DomainError("d_law: need 0 <= t <= u < T");
    const double lag = u - t;       // diffusion time accumulated
    const double rem = p.T - u;     // time still to run
    const double abar = p.mu1 + 1.5 * p.sigma1 * p.sigma1;
    DLaw law;
    law.mean = (std::log(p.D / v) - abar * lag -
                (dc.alpha + 0.5 * p.sigma1 * p.sigma1) * rem) /
               (p.sigma1 * std::sqrt(rem));
    law.std = std::sqrt(lag / rem);
    return law;
}

double gauss_expect_Nsq(double mean, double std, int n_points) {
    if (!std::isfinite(mean) || !std::isfinite(std) || std < 0.0)
        throw DomainError("gauss_expect_Nsq: bad mean/std");
    if (std == 0.0) {
        const double n = norm_cdf(mean);
        return n * n;
    }
    if (std > 1e8) return norm_cdf(mean / std);  // exact std -> inf limit
    if (n_points > 0) {
        const QuadRule& gh = gauss_hermite(n_points);
        double acc = 0.0;
        for (std::size_t i = 0; i < gh.x.size(); ++i) {
            const double n = norm_cdf(mean + std * kSqrt2 * gh.x[i]);
            acc += gh.w[i] * n * n;
        }
        return acc * kInvSqrtPi;
    }
    const double scale = std::sqrt(1.0 + std * std);
    const double m = mean / scale;
    const double r = std * std / (1.0 + std * std);
    return bvn_cdf(m, m, r);
}

double gauss_expect_Nphi(double mean, double std, int n_points) {
    if (!std::isfinite(mean) || !std::isfinite(std) || std < 0.0)
        throw DomainError("gauss_expect_Nphi: bad mean/std");
    if (n_points > 0) {
        const QuadRule& gh = gauss_hermite(n_points);
        double acc = 0.0;
        for (std::size_t i = 0; i < gh.x.size(); ++i) {
            const double x = mean + std * kSqrt2 * gh.x[i];
            acc += gh.w[i] * norm_cdf(x) * norm_pdf(x);
        }
        return acc * kInvSqrtPi;
    }
    const double s2 = std * std;
    const double scale = std::sqrt(1.0 + s2);
    return norm_pdf(mean / scale) / scale *
           norm_cdf(mean / (scale * std::sqrt(1.0 + 2.0 * s2)));
}

namespace {

// Shared geometry of the time quadrature after the substitution
// u = T - (T-t) w^2, which maps the integral onto w in [0, 1]:
//   mean scale  m(w)  = (log(D/v) - abar*delta + coef*delta*w^2)/(sigma1 sqrt(delta))
//   correlation r(w)  = 1 - w^2
//   damping           = exp(k1 * delta * w^2)
// The integrands below are analytic in w, so Gauss-Legendre converges
// spectrally; the raw u-integrand has a sqrt(T-u) kink that would not.
struct WForm {
    double delta;      // T - t
    double log_ratio;  // log(D / v)
    double abar;       // mu1 + 1.5 sigma1^2
    double coef;       // sigma1^2 + rho * theta_bar * sigma1
    double k1;
    double sig_sqrt;   // sigma1 * sqrt(delta)

    WForm(const ModelParams& p, const DerivedConstants& dc, double t, double v)
        : delta(p.T - t),
          log_ratio(std::log(p.D / v)),
          abar(p.mu1 + 1.5 * p.sigma1 * p.sigma1),
          coef(p.sigma1 * (p.sigma1 + p.rho * dc.theta_bar)),
          k1(dc.k1),
          sig_sqrt(p.sigma1 * std::sqrt(p.T - t)) {}

    double m(double w) const {
        return (log_ratio - abar * delta + coef * delta * w * w) / sig_sqrt;
    }
};

}  // namespace

CTildeOutputs c_value(const ModelParams& p, double t, double v, const NumericsConfig& cfg) {
    const DerivedConstants dc = derive(p);
    validate(cfg);
    if (!std::isfinite(t) || t < 0.0 || t > p.T)
        throw DomainError("c_value: t outside [0, T]");
    if (!std::isfinite(v) || v <= 0.0)
        throw DomainError("c_value: v must be positive");

    CTildeOutputs out{};
    const double delta = p.T - t;
    if (delta < kTauFloor) return out;  // all three vanish at maturity

    const WForm f(p, dc, t, v);
    const double one_m_rho2 = 1.0 - p.rho * p.rho;
    const double pref = std::exp((2.0 * p.mu1 + p.sigma1 * p.sigma1) * delta);
    const QuadRule& gl = gauss_legendre(cfg.quad_points);

    double acc_sq = 0.0;
    double acc_phi = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
        const double w = 0.5 * (gl.x[i] + 1.0);
        const double wt = 0.5 * gl.w[i];
        const double mw = f.m(w);
        const double damp = std::exp(f.k1 * delta * w * w);
        const double nsq = bvn_cdf(mw, mw, 1.0 - w * w);
        acc_sq += wt * w * damp * nsq;
        acc_phi += wt * w * damp * norm_pdf(mw) *
                   norm_cdf(mw * w / std::sqrt(2.0 - w * w));
    }

    out.c_tilde = p.sigma1 * p.sigma1 * one_m_rho2 * pref * 2.0 * delta * acc_sq;
    out.c = out.c_tilde * v * v;
    out.dctilde_dv = -4.0 * p.sigma1 * one_m_rho2 * std::sqrt(delta) * pref * acc_phi / v;
    return out;
}

std::vector<CTildeOutputs> c_tilde_curve(const ModelParams& p, double t,
                                         const std::vector<double>& vs,
                                         const NumericsConfig& cfg) {
    std::vector<CTildeOutputs> out;
    out.reserve(vs.size());
    for (double v : vs) out.push_back(c_value(p, t, v, cfg));
    return out;
}

double dctilde_dv_bound_constant(const ModelParams& p) {
    const DerivedConstants dc = derive(p);
    (void)dc;
    const double growth = std::exp((2.0 * p.mu1 + p.sigma1 * p.sigma1) * p.T);
    return 4.0 * p.sigma1 * (1.0 - p.rho * p.rho) * std::max(1.0, growth) * kInvSqrt2Pi;
}

}  // namespace mvh
