#include "mvh/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mvh/closed_form.hpp"
#include "mvh/jsonw.hpp"
#include "mvh/parallel.hpp"
#include "mvh/replication.hpp"

namespace mvh {

namespace {

// Underflow fences for the diagnostics scan. Below a score of -37 the normal
// CDF is subnormal-or-zero, so db/dv (hence the N process) is numerically 0
// even though it is positive in exact arithmetic; such points are excluded
// and counted instead of being reported as sign violations.
constexpr double kScoreFloor = -37.0;
constexpr double kNFloor = 1e-280;

struct CtFd {
    double ct;        // c_tilde
    double dct_dv;    // analytic
    double dct_dt;    // central difference in the time-to-maturity direction
    double d2ct_dv2;  // central difference of the analytic first derivative
};

// c_tilde depends on (t, T) only through T - t, so the time derivative is
// taken by bumping T; that keeps the stencil valid at t = 0.
CtFd ct_with_fd(const ModelParams& p, double t, double v, const NumericsConfig& cfg) {
    const double delta = p.T - t;
    const CTildeOutputs c0 = c_value(p, t, v, cfg);
    double ht = cfg.fd_bump * p.T;
    if (ht > 0.5 * delta) ht = 0.5 * delta;
    ModelParams up = p, dn = p;
    up.T = p.T + ht;
    dn.T = p.T - ht;
    const double c_up = c_value(up, t, v, cfg).c_tilde;  // delta + ht
    const double c_dn = c_value(dn, t, v, cfg).c_tilde;  // delta - ht
    const double hv = cfg.fd_bump * v;
    const double g_up = c_value(p, t, v + hv, cfg).dctilde_dv;
    const double g_dn = c_value(p, t, v - hv, cfg).dctilde_dv;
    CtFd r;
    r.ct = c0.c_tilde;
    r.dct_dv = c0.dctilde_dv;
    r.dct_dt = -(c_up - c_dn) / (2.0 * ht);
    r.d2ct_dv2 = (g_up - g_dn) / (2.0 * hv);
    return r;
}

double n_from_parts(const ModelParams& p, double v, const BOutputs& bo,
                    double ct, double dct_dv) {
    return std::exp(-p.kappa * ct) * v * p.sigma1 * (bo.db_dv - p.kappa * bo.b * dct_dv);
}

double m_from_parts(const ModelParams& p, double v, const BOutputs& bo, const CtFd& cf) {
    const double g = std::exp(-p.kappa * cf.ct);
    const double k = p.kappa;
    const double Bt = g * (bo.db_dt - k * bo.b * cf.dct_dt);
    const double Bv = g * (bo.db_dv - k * bo.b * cf.dct_dv);
    const double Bvv = g * (bo.d2b_dv2 - 2.0 * k * bo.db_dv * cf.dct_dv -
                            k * bo.b * cf.d2ct_dv2 +
                            k * k * bo.b * cf.dct_dv * cf.dct_dv);
    return Bt + p.mu1 * v * Bv + 0.5 * p.sigma1 * p.sigma1 * v * v * Bvv;
}

}  // namespace

PriceBreakdown bond_price(const ModelParams& p, double t, double v,
                          const NumericsConfig& cfg) {
    const BOutputs bo = b_price(p, t, v);
    const CTildeOutputs co = c_value(p, t, v, cfg);
    PriceBreakdown out;
    out.a = a_of_t(p, t);
    out.b = bo.b;
    out.c = co.c;
    out.c_tilde = co.c_tilde;
    out.discount = std::exp(-p.kappa * co.c_tilde);
    out.price = bo.b * out.discount;
    out.yield = yield_spread(out.price, p.D, p.T - t);
    return out;
}

double N_process(const ModelParams& p, double t, double v, const NumericsConfig& cfg) {
    const BOutputs bo = b_price(p, t, v);
    const CTildeOutputs co = c_value(p, t, v, cfg);
    return n_from_parts(p, v, bo, co.c_tilde, co.dctilde_dv);
}

double M_process(const ModelParams& p, double t, double v, const NumericsConfig& cfg) {
    if (!(t < p.T)) throw DomainError("M_process: needs t < T");
    const BOutputs bo = b_price(p, t, v);
    const CtFd cf = ct_with_fd(p, t, v, cfg);
    return m_from_parts(p, v, bo, cf);
}

namespace {

struct ScanAccum {
    double min_N = std::numeric_limits<double>::infinity();
    double sup_theta = 0.0;
    int skipped = 0;
    int viol_mono = 0;
    int viol_dbdv = 0;
    int viol_dct = 0;
};

// One scan over a (t, v) product grid with n intervals per axis; v log-spaced.
ScanAccum scan_grid(const ModelParams& p, const NumericsConfig& cfg, int n,
                    double v_lo, double v_hi, double t_hi) {
    const int n_nodes = n + 1;
    const double log_lo = std::log(v_lo);
    const double log_step = (std::log(v_hi) - log_lo) / n;
    std::vector<ScanAccum> rows(n_nodes);

    parallel_chunks(n_nodes, 1, [&](std::int64_t row, std::int64_t, std::int64_t) {
        const double t = t_hi * static_cast<double>(row) / n;
        ScanAccum& acc = rows[row];
        double prev_ct = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n_nodes; ++j) {
            const double v = std::exp(log_lo + log_step * j);
            const BOutputs bo = b_price(p, t, v);
            const CTildeOutputs co = c_value(p, t, v, cfg);
            // ties are saturation, not violations; below the noise floor the
            // comparison itself is meaningless (see kCtildeNoiseFloor)
            if (co.c_tilde > prev_ct && co.c_tilde > kCtildeNoiseFloor) ++acc.viol_mono;
            prev_ct = co.c_tilde;
            if (bo.d1 < kScoreFloor) {
                ++acc.skipped;
                continue;
            }
            if (!(bo.db_dv > 0.0)) ++acc.viol_dbdv;
            if (co.dctilde_dv > 0.0) ++acc.viol_dct;
            const double N = n_from_parts(p, v, bo, co.c_tilde, co.dctilde_dv);
            if (!(N > kNFloor)) {
                ++acc.skipped;
                continue;
            }
            acc.min_N = std::min(acc.min_N, N);
            // M needs a time bump of c_tilde; deep in the left tail near
            // maturity the bumped values differ by exp(d1^2 * ht / delta)
            // relative, so the central difference stops resolving anything.
            // Such points carry no information about sup |M/N| and are
            // skipped (counted) instead of polluting the sup with FD noise.
            const double delta = p.T - t;
            const double ht = std::min(cfg.fd_bump * p.T, 0.5 * delta);
            if (bo.d1 < 0.0 && bo.d1 * bo.d1 * ht > delta) {
                ++acc.skipped;
                continue;
            }
            const double M = m_from_parts(p, v, bo, ct_with_fd(p, t, v, cfg));
            acc.sup_theta = std::max(acc.sup_theta, std::abs(M / N));
        }
    });

    ScanAccum total;
    for (const ScanAccum& r : rows) {
        total.min_N = std::min(total.min_N, r.min_N);
        total.sup_theta = std::max(total.sup_theta, r.sup_theta);
        total.skipped += r.skipped;
        total.viol_mono += r.viol_mono;
        total.viol_dbdv += r.viol_dbdv;
        total.viol_dct += r.viol_dct;
    }
    return total;
}

}  // namespace

DiagnosticsReport nflvr_diagnostics(const ModelParams& p, const NumericsConfig& cfg) {
    const DerivedConstants dc = derive(p);
    validate(cfg);
    if (std::abs(p.rho) >= 1.0)
        throw DomainError("nflvr_diagnostics: |rho| = 1 is the complete-market case");

    DiagnosticsReport r{};
    r.grid_n_coarse = cfg.diag_grid_n;
    r.v_lo = p.D / 100.0;
    r.v_hi = p.D * 100.0;
    r.t_hi = p.T * (1.0 - cfg.diag_time_edge);
    r.novikov_condition = dc.novikov;

    const ScanAccum coarse = scan_grid(p, cfg, cfg.diag_grid_n, r.v_lo, r.v_hi, r.t_hi);
    const ScanAccum fine = scan_grid(p, cfg, 2 * cfg.diag_grid_n, r.v_lo, r.v_hi, r.t_hi);

    r.min_N = std::min(coarse.min_N, fine.min_N);
    r.sup_theta_coarse = coarse.sup_theta;
    r.sup_theta_fine = fine.sup_theta;
    r.violations_monotone_ctilde = coarse.viol_mono + fine.viol_mono;
    r.violations_sign_dbdv = coarse.viol_dbdv + fine.viol_dbdv;
    r.violations_sign_dctildedv = coarse.viol_dct + fine.viol_dct;
    r.skipped_underflow_coarse = coarse.skipped;
    r.skipped_underflow_fine = fine.skipped;
    return r;
}

std::string diagnostics_to_json(const DiagnosticsReport& r) {
    JsonWriter w;
    w.begin()
        .field("min_N", r.min_N)
        .field("sup_theta_coarse", r.sup_theta_coarse)
        .field("sup_theta_fine", r.sup_theta_fine)
        .field("violations_monotone_ctilde", r.violations_monotone_ctilde)
        .field("violations_sign_dbdv", r.violations_sign_dbdv)
        .field("violations_sign_dctildedv", r.violations_sign_dctildedv)
        .field("novikov_condition", r.novikov_condition)
        .field("skipped_underflow_coarse", r.skipped_underflow_coarse)
        .field("skipped_underflow_fine", r.skipped_underflow_fine)
        .field("grid_n_coarse", r.grid_n_coarse)
        .field("v_lo", r.v_lo)
        .field("v_hi", r.v_hi)
        .field("t_hi", r.t_hi)
        .end();
    return w.str();
}

}  // namespace mvh
