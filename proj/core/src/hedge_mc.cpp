#include "mvh/hedge_mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "mvh/closed_form.hpp"
#include "mvh/jsonw.hpp"
#include "mvh/normal.hpp"
#include "mvh/parallel.hpp"

namespace mvh {

namespace {

// Fixed accumulation chunk; reductions run in chunk order, so results do not
// depend on the worker count.
constexpr std::int64_t kChunk = 4096;
// Odd increment decorrelating per-path stream seeds.
constexpr std::uint64_t kStreamGamma = 0xD1B54A32D192ED03ULL;

struct SplitMix64 {
    std::uint64_t s;
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

struct Xoshiro256pp {
    std::uint64_t s[4];
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& x : s) x = sm.next();
    }
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t next() {
        const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }
    // Box-Muller; consumes exactly two draws per call.
    void gauss_pair(double& z0, double& z1) {
        const double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = static_cast<double>(next() >> 11) * 0x1.0p-53;          // [0, 1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.2831853071795864769 * u2;
        z0 = r * std::cos(a);
        z1 = r * std::sin(a);
    }
};

// b and db/dv stripped of per-call validation for the per-step loop.
struct FastB {
    double D, sigma1, alpha, half_var;
    FastB(const ModelParams& p, const DerivedConstants& dc)
        : D(p.D), sigma1(p.sigma1), alpha(dc.alpha),
          half_var(dc.alpha + 0.5 * p.sigma1 * p.sigma1) {}
    void eval(double tau, double v, double& b, double& db_dv) const {
        if (tau < 1e-12) {
            b = std::min(v, D);
            db_dv = v < D ? 1.0 : (v > D ? 0.0 : 0.5);
            return;
        }
        const double sq = sigma1 * std::sqrt(tau);
        const double growth = std::exp(alpha * tau);
        const double d1 = (std::log(D / v) - half_var * tau) / sq;
        const double nd1 = norm_cdf(d1);
        b = v * growth * nd1 + D * (1.0 - norm_cdf(d1 + sq));
        db_dv = growth * nd1;
    }
};

void check_batch(const ModelParams& p, const PathBatch& batch) {
    if (batch.n_paths < 1 || batch.n_steps < 1)
        throw DomainError("hedge: empty path batch");
    if (batch.params.T != p.T)
        throw DomainError("hedge: batch horizon differs from pricing horizon");
}

}  // namespace

PathBatch PathBatch::lazy(const ModelParams& p, double t0, double v0, double s0,
                          std::int64_t n_paths, int n_steps, std::uint64_t seed) {
    derive(p);  // validates
    if (!std::isfinite(t0) || t0 < 0.0 || t0 >= p.T)
        throw DomainError("PathBatch: t0 outside [0, T)");
    if (!(v0 > 0.0) || !(s0 > 0.0))
        throw DomainError("PathBatch: v0 and s0 must be positive");
    if (n_paths < 1 || n_steps < 1)
        throw DomainError("PathBatch: need n_paths >= 1 and n_steps >= 1");
    PathBatch b;
    b.params = p;
    b.t0 = t0;
    b.v0 = v0;
    b.s0 = s0;
    b.n_paths = n_paths;
    b.n_steps = n_steps;
    b.seed = seed;
    b.materialized = false;
    return b;
}

void PathBatch::fill_path(std::int64_t i, double* v_out, double* s_out) const {
    if (i < 0 || i >= n_paths) throw DomainError("fill_path: index out of range");
    const std::size_t row = static_cast<std::size_t>(n_steps) + 1;
    if (materialized) {
        std::memcpy(v_out, v.data() + i * row, row * sizeof(double));
        std::memcpy(s_out, s.data() + i * row, row * sizeof(double));
        return;
    }
    Xoshiro256pp rng(seed + static_cast<std::uint64_t>(i) * kStreamGamma);
    const double dt = (params.T - t0) / n_steps;
    const double sdt = std::sqrt(dt);
    const double drift_v = (params.mu1 - 0.5 * params.sigma1 * params.sigma1) * dt;
    const double drift_s = (params.mu2 - 0.5 * params.sigma2 * params.sigma2) * dt;
    const double orth = std::sqrt(1.0 - params.rho * params.rho);
    double vv = v0, ss = s0;
    v_out[0] = vv;
    s_out[0] = ss;
    for (int k = 0; k < n_steps; ++k) {
        double z0, z1;
        rng.gauss_pair(z0, z1);
        vv *= std::exp(drift_v + params.sigma1 * sdt * z0);
        ss *= std::exp(drift_s + params.sigma2 * sdt * (params.rho * z0 + orth * z1));
        v_out[k + 1] = vv;
        s_out[k + 1] = ss;
    }
}

PathBatch simulate_paths(const ModelParams& p, double t0, double v0, double s0,
                         std::int64_t n_paths, int n_steps, std::uint64_t seed) {
    PathBatch b = PathBatch::lazy(p, t0, v0, s0, n_paths, n_steps, seed);
    const std::size_t row = static_cast<std::size_t>(n_steps) + 1;
    b.v.resize(static_cast<std::size_t>(n_paths) * row);
    b.s.resize(static_cast<std::size_t>(n_paths) * row);
    parallel_chunks(n_paths, kChunk, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i)
            b.fill_path(i, b.v.data() + i * row, b.s.data() + i * row);
    });
    b.materialized = true;
    return b;
}

double optimal_theta(const ModelParams& p, double t, double v, double s, double pw) {
    const BOutputs bo = b_price(p, t, v);
    const double denom = p.sigma2 * s;
    if (denom == 0.0) return 0.0;
    return p.rho * p.sigma1 * v * bo.db_dv / denom -
           p.mu2 * (pw - bo.b) / (p.sigma2 * denom);
}

HedgeSimResult hedge_once(const ModelParams& p, const PathBatch& batch, double p0) {
    const DerivedConstants dc = derive(p);
    check_batch(p, batch);
    const FastB fb(p, dc);
    const double dt = (p.T - batch.t0) / batch.n_steps;
    const std::int64_t n_chunks = (batch.n_paths + kChunk - 1) / kChunk;
    std::vector<double> chunk_e2(n_chunks), chunk_e4(n_chunks);
    std::vector<std::int64_t> chunk_neg(n_chunks);

    parallel_chunks(batch.n_paths, kChunk, [&](std::int64_t c, std::int64_t lo, std::int64_t hi) {
        std::vector<double> vbuf(batch.n_steps + 1), sbuf(batch.n_steps + 1);
        KahanSum e2, e4;
        std::int64_t neg = 0;
        for (std::int64_t i = lo; i < hi; ++i) {
            batch.fill_path(i, vbuf.data(), sbuf.data());
            double wealth = p0;
            bool was_neg = false;
            for (int k = 0; k < batch.n_steps; ++k) {
                const double tau = (batch.n_steps - k) * dt;
                double bval, dbdv;
                fb.eval(tau, vbuf[k], bval, dbdv);
                const double denom = p.sigma2 * sbuf[k];
                double theta = 0.0;
                if (denom != 0.0)
                    theta = p.rho * p.sigma1 * vbuf[k] * dbdv / denom -
                            p.mu2 * (wealth - bval) / (p.sigma2 * denom);
                wealth += theta * (sbuf[k + 1] - sbuf[k]);
                if (wealth < 0.0) was_neg = true;
            }
            const double err = wealth - std::min(vbuf[batch.n_steps], p.D);
            const double err2 = err * err;
            e2.add(err2);
            e4.add(err2 * err2);
            if (was_neg) ++neg;
        }
        chunk_e2[c] = e2.value();
        chunk_e4[c] = e4.value();
        chunk_neg[c] = neg;
    });

    KahanSum se2, se4;
    std::int64_t sneg = 0;
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        se2.add(chunk_e2[c]);
        se4.add(chunk_e4[c]);
        sneg += chunk_neg[c];
    }
    const double n = static_cast<double>(batch.n_paths);
    HedgeSimResult r;
    r.p0 = p0;
    r.mean_sq_error = se2.value() / n;
    r.std_error = std::sqrt(
        std::max(0.0, se4.value() / n - r.mean_sq_error * r.mean_sq_error) / n);
    r.frac_paths_negative_wealth = static_cast<double>(sneg) / n;
    r.n_paths = batch.n_paths;
    r.n_steps = batch.n_steps;
    r.seed = batch.seed;
    return r;
}

ValueFitResult fit_value_function(const ModelParams& p, const PathBatch& batch,
                                  const std::vector<double>& p0_grid,
                                  const NumericsConfig& cfg) {
    const DerivedConstants dc = derive(p);
    validate(cfg);
    check_batch(p, batch);
    {
        std::vector<double> uniq(p0_grid);
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        if (uniq.size() < 3)
            throw DomainError("fit_value_function: need >= 3 distinct p0 values");
    }

    const FastB fb(p, dc);
    const double dt = (p.T - batch.t0) / batch.n_steps;
    const int np = static_cast<int>(p0_grid.size());
    const std::int64_t n_chunks = (batch.n_paths + kChunk - 1) / kChunk;
    // Per-chunk, per-p0 partial sums, reduced later in chunk order.
    std::vector<double> chunk_e2(n_chunks * np), chunk_e4(n_chunks * np);
    std::vector<std::int64_t> chunk_neg(n_chunks * np);

    // The rebalancing rule is affine in current wealth, so terminal wealth is
    // affine in p0 along a fixed path: run the p0 = 0 wealth and its p0
    // derivative once, then read off every sweep point. This is exact common
    // random numbers, not an approximation.
    parallel_chunks(batch.n_paths, kChunk, [&](std::int64_t c, std::int64_t lo, std::int64_t hi) {
        std::vector<double> vbuf(batch.n_steps + 1), sbuf(batch.n_steps + 1);
        std::vector<KahanSum> e2(np), e4(np);
        std::vector<std::int64_t> neg(np, 0);
        std::vector<unsigned char> was_neg(np);
        for (std::int64_t i = lo; i < hi; ++i) {
            batch.fill_path(i, vbuf.data(), sbuf.data());
            double w0 = 0.0, grad = 1.0;
            std::fill(was_neg.begin(), was_neg.end(), 0);
            for (int k = 0; k < batch.n_steps; ++k) {
                const double tau = (batch.n_steps - k) * dt;
                double bval, dbdv;
                fb.eval(tau, vbuf[k], bval, dbdv);
                const double ds = sbuf[k + 1] - sbuf[k];
                const double denom = p.sigma2 * sbuf[k];
                if (denom != 0.0) {
                    const double proj = p.rho * p.sigma1 * vbuf[k] * dbdv / denom;
                    const double pull = p.mu2 / (p.sigma2 * denom);
                    w0 += (proj - pull * (w0 - bval)) * ds;
                    grad *= 1.0 - pull * ds;
                }
                for (int j = 0; j < np; ++j)
                    if (w0 + grad * p0_grid[j] < 0.0) was_neg[j] = 1;
            }
            const double payoff = std::min(vbuf[batch.n_steps], p.D);
            const double e0 = w0 - payoff;
            for (int j = 0; j < np; ++j) {
                const double err = e0 + grad * p0_grid[j];
                const double err2 = err * err;
                e2[j].add(err2);
                e4[j].add(err2 * err2);
                neg[j] += was_neg[j];
            }
        }
        for (int j = 0; j < np; ++j) {
            chunk_e2[c * np + j] = e2[j].value();
            chunk_e4[c * np + j] = e4[j].value();
            chunk_neg[c * np + j] = neg[j];
        }
    });

    ValueFitResult out;
    out.points.resize(np);
    const double n = static_cast<double>(batch.n_paths);
    for (int j = 0; j < np; ++j) {
        KahanSum se2, se4;
        std::int64_t sneg = 0;
        for (std::int64_t c = 0; c < n_chunks; ++c) {
            se2.add(chunk_e2[c * np + j]);
            se4.add(chunk_e4[c * np + j]);
            sneg += chunk_neg[c * np + j];
        }
        HedgeSimResult& r = out.points[j];
        r.p0 = p0_grid[j];
        r.mean_sq_error = se2.value() / n;
        r.std_error = std::sqrt(
            std::max(0.0, se4.value() / n - r.mean_sq_error * r.mean_sq_error) / n);
        r.frac_paths_negative_wealth = static_cast<double>(sneg) / n;
        r.n_paths = batch.n_paths;
        r.n_steps = batch.n_steps;
        r.seed = batch.seed;
    }

    // Least-squares parabola through (p0, mse), solved on centered abscissae
    // so the normal equations stay well conditioned for tight sweeps.
    double xbar = 0.0;
    for (int j = 0; j < np; ++j) xbar += p0_grid[j];
    xbar /= np;
    double s1 = 0, sx = 0, sx2 = 0, sx3 = 0, sx4 = 0, sy = 0, sxy = 0, sx2y = 0;
    for (int j = 0; j < np; ++j) {
        const double x = p0_grid[j] - xbar, y = out.points[j].mean_sq_error;
        const double x2 = x * x;
        s1 += 1;
        sx += x;
        sx2 += x2;
        sx3 += x2 * x;
        sx4 += x2 * x2;
        sy += y;
        sxy += x * y;
        sx2y += x2 * y;
    }
    const double det = s1 * (sx2 * sx4 - sx3 * sx3) - sx * (sx * sx4 - sx2 * sx3) +
                       sx2 * (sx * sx3 - sx2 * sx2);
    if (det == 0.0) throw FitError("fit_value_function: singular normal equations");
    const double r0 = (sy * (sx2 * sx4 - sx3 * sx3) - sx * (sxy * sx4 - sx2y * sx3) +
                       sx2 * (sxy * sx3 - sx2y * sx2)) / det;
    const double r1 = (s1 * (sxy * sx4 - sx2y * sx3) - sy * (sx * sx4 - sx2 * sx3) +
                       sx2 * (sx * sx2y - sxy * sx2)) / det;
    const double q2 = (s1 * (sx2 * sx2y - sx3 * sxy) - sx * (sx * sx2y - sx3 * sy) +
                       sx2 * (sx * sxy - sx2 * sy)) / det;
    // undo the centering: q(p) = q2 p^2 + q1 p + q0
    const double q1 = r1 - 2.0 * q2 * xbar;
    const double q0 = r0 - r1 * xbar + q2 * xbar * xbar;

    double ss_res = 0.0, ss_tot = 0.0;
    const double ybar = sy / s1;
    for (int j = 0; j < np; ++j) {
        const double x = p0_grid[j] - xbar, y = out.points[j].mean_sq_error;
        const double fit = r0 + r1 * x + q2 * x * x;
        ss_res += (y - fit) * (y - fit);
        ss_tot += (y - ybar) * (y - ybar);
    }
    out.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    if (!(q2 > 0.0))
        throw FitError("fit_value_function: fitted quadratic coefficient is not positive");
    if (out.r2 < cfg.fit_min_r2)
        throw FitError("fit_value_function: fit quality below fit_min_r2");
    out.a_hat = q2;
    out.b_hat = -q1 / (2.0 * q2);
    out.c_hat = q0 - q1 * q1 / (4.0 * q2);

    int nearest = 0;
    for (int j = 1; j < np; ++j)
        if (std::abs(p0_grid[j] - out.b_hat) < std::abs(p0_grid[nearest] - out.b_hat))
            nearest = j;
    out.c_hat_se = out.points[nearest].std_error;
    return out;
}

namespace {
void hedge_fields(JsonWriter& w, const HedgeSimResult& r) {
    w.field("p0", r.p0)
        .field("mean_sq_error", r.mean_sq_error)
        .field("std_error", r.std_error)
        .field("frac_paths_negative_wealth", r.frac_paths_negative_wealth)
        .field("n_paths", static_cast<long long>(r.n_paths))
        .field("n_steps", r.n_steps)
        .field("seed", static_cast<unsigned long long>(r.seed));
}
}  // namespace

std::string hedge_result_to_json(const HedgeSimResult& r) {
    JsonWriter w;
    w.begin();
    hedge_fields(w, r);
    w.end();
    return w.str();
}

std::string fit_result_to_json(const ValueFitResult& r) {
    JsonWriter w;
    w.begin();
    w.begin_array("points");
    for (const HedgeSimResult& pt : r.points) {
        w.item_begin();
        hedge_fields(w, pt);
        w.end();
    }
    w.end_array();
    w.field("a_hat", r.a_hat)
        .field("b_hat", r.b_hat)
        .field("c_hat", r.c_hat)
        .field("c_hat_se", r.c_hat_se)
        .field("r2", r.r2)
        .end();
    return w.str();
}

}  // namespace mvh
