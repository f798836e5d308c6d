#include "mvh/pde_fd.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "mvh/closed_form.hpp"
#include "mvh/normal.hpp"
#include "mvh/replication.hpp"

namespace mvh {

namespace {

// off*x[i-1] + diag*x[i] + off*x[i+1] = r[i]; solution overwrites r.
void thomas_const(double off, double diag, std::vector<double>& r, std::vector<double>& cp) {
    const int n = static_cast<int>(r.size());
    cp[0] = off / diag;
    r[0] /= diag;
    for (int i = 1; i < n; ++i) {
        const double m = 1.0 / (diag - off * cp[i - 1]);
        cp[i] = off * m;
        r[i] = (r[i] - off * r[i - 1]) * m;
    }
    for (int i = n - 2; i >= 0; --i) r[i] -= cp[i] * r[i + 1];
}

void check_spec(const PdeGridSpec& spec) {
    if (spec.n_u < 4 || spec.n_u % 2 != 0)
        throw GridError("pde: n_u must be even and >= 4 (ln D must be a node)");
    if (spec.n_tau < 1) throw GridError("pde: n_tau must be >= 1");
    if (!(spec.width_sigmas > 0.0)) throw GridError("pde: width_sigmas must be > 0");
    if (spec.rannacher_substeps < 0 || spec.rannacher_substeps % 2 != 0)
        throw GridError("pde: rannacher_substeps must be even and >= 0");
}

// Backward march of a drift-free heat equation dx/dtau = sigma1^2/2 d2x/du2
// + src, trapezoidal in time with the first startup_full_steps steps split
// into fully implicit half-steps (damps the payoff kink), Dirichlet data
// from bc_lo/bc_hi. Rows are recorded at every full step via `record`.
struct HeatMarcher {
    const std::vector<double>& u;
    double sig2half;
    std::function<double(double)> bc_lo, bc_hi;
    std::function<double(double, double)> src;  // src(tau, u); null when absent

    std::vector<double> x, rhs, cp;

    HeatMarcher(const std::vector<double>& u_, double sigma1)
        : u(u_), sig2half(0.5 * sigma1 * sigma1),
          x(u_.size()), rhs(u_.size() - 2), cp(u_.size() - 2) {}

    void step(double tau_a, double h, double theta_s) {
        const int n_u = static_cast<int>(u.size()) - 1;
        const double du = (u.back() - u.front()) / n_u;
        const double lam = sig2half * h / (du * du);
        const double tau_b = tau_a + h;
        const double off = -theta_s * lam;
        const double diag = 1.0 + 2.0 * theta_s * lam;
        const double ex = (1.0 - theta_s) * lam;
        for (int i = 1; i < n_u; ++i) {
            double r = x[i] + ex * (x[i - 1] - 2.0 * x[i] + x[i + 1]);
            if (src)
                r += h * (theta_s * src(tau_b, u[i]) + (1.0 - theta_s) * src(tau_a, u[i]));
            rhs[i - 1] = r;
        }
        const double lo_b = bc_lo(tau_b), hi_b = bc_hi(tau_b);
        rhs[0] += theta_s * lam * lo_b;
        rhs[n_u - 2] += theta_s * lam * hi_b;
        thomas_const(off, diag, rhs, cp);
        x[0] = lo_b;
        x[n_u] = hi_b;
        for (int i = 1; i < n_u; ++i) x[i] = rhs[i - 1];
    }

    void march(double T, int n_tau, int startup_full_steps,
               const std::function<void(int, double)>& record) {
        const double dtau = T / n_tau;
        record(0, 0.0);
        for (int k = 0; k < n_tau; ++k) {
            const double tau_a = k * dtau;
            if (k < startup_full_steps) {
                step(tau_a, 0.5 * dtau, 1.0);
                step(tau_a + 0.5 * dtau, 0.5 * dtau, 1.0);
            } else {
                step(tau_a, dtau, 0.5);
            }
            record(k + 1, (k + 1) * dtau);
        }
    }
};

std::vector<double> make_u_grid(const ModelParams& p, const PdeGridSpec& spec) {
    const double w = spec.width_sigmas * p.sigma1 * std::sqrt(p.T);
    const double u0 = std::log(p.D) - w;
    const double du = 2.0 * w / spec.n_u;
    std::vector<double> u(spec.n_u + 1);
    for (int i = 0; i <= spec.n_u; ++i) u[i] = u0 + du * i;
    u[spec.n_u / 2] = std::log(p.D);  // pin the kink exactly on a node
    return u;
}

double n_of_d1(const ModelParams& p, const DerivedConstants& dc, double tau, double u) {
    const double logD = std::log(p.D);
    if (tau < 1e-14) return u < logD ? 1.0 : (u > logD ? 0.0 : 0.5);
    const double d1 = (logD - u - (dc.alpha + 0.5 * p.sigma1 * p.sigma1) * tau) /
                      (p.sigma1 * std::sqrt(tau));
    return norm_cdf(d1);
}

}  // namespace

double GridSolution::interp_u(int i_tau, double uq) const {
    const int n = static_cast<int>(u.size());
    if (uq <= u.front()) return at(i_tau, 0);
    if (uq >= u.back()) return at(i_tau, n - 1);
    const double du = (u.back() - u.front()) / (n - 1);
    int i = static_cast<int>((uq - u.front()) / du);
    if (i > n - 2) i = n - 2;
    const double w = (uq - (u.front() + i * du)) / du;
    return (1.0 - w) * at(i_tau, i) + w * at(i_tau, i + 1);
}

GridSolution solve_b_pde(const ModelParams& p, const PdeGridSpec& spec) {
    const DerivedConstants dc = derive(p);
    check_spec(spec);

    GridSolution sol;
    sol.u = make_u_grid(p, spec);
    sol.tau.resize(spec.n_tau + 1);
    sol.values.assign(static_cast<std::size_t>(spec.n_tau + 1) * sol.u.size(), 0.0);

    HeatMarcher m(sol.u, p.sigma1);
    const double eta = dc.eta, beta = dc.beta, alpha = dc.alpha;
    const double u_lo = sol.u.front(), u_hi = sol.u.back();
    // Transformed unknown x = b e^{-eta u - beta tau}; far fields b -> v e^{alpha tau}
    // below, b -> D above.
    for (std::size_t i = 0; i < sol.u.size(); ++i)
        m.x[i] = std::min(std::exp(sol.u[i]), p.D) * std::exp(-eta * sol.u[i]);
    m.bc_lo = [=](double tau) { return std::exp((1.0 - eta) * u_lo + (alpha - beta) * tau); };
    m.bc_hi = [&p, eta, beta, u_hi](double tau) { return p.D * std::exp(-eta * u_hi - beta * tau); };

    m.march(p.T, spec.n_tau, spec.rannacher_substeps / 2, [&](int k, double tau) {
        sol.tau[k] = tau;
        for (std::size_t i = 0; i < sol.u.size(); ++i)
            sol.values[static_cast<std::size_t>(k) * sol.u.size() + i] =
                m.x[i] * std::exp(eta * sol.u[i] + beta * tau);
    });
    return sol;
}

GridSolution solve_c_pde(const ModelParams& p, const PdeGridSpec& spec) {
    const DerivedConstants dc = derive(p);
    check_spec(spec);

    GridSolution sol;
    sol.u = make_u_grid(p, spec);
    sol.tau.resize(spec.n_tau + 1);
    sol.values.assign(static_cast<std::size_t>(spec.n_tau + 1) * sol.u.size(), 0.0);

    HeatMarcher m(sol.u, p.sigma1);
    const double a1 = dc.alpha1, b1 = dc.beta1;
    const double src_pref = p.sigma1 * p.sigma1 * (1.0 - p.rho * p.rho);
    const double tb2 = dc.theta_bar * dc.theta_bar;
    // x = c e^{-alpha1 u - beta1 tau}; zero payoff, zero far fields (the source
    // e^{-alpha1 u - beta1 tau} a(tau) sigma1^2 (1-rho^2) (db/du)^2 dies in both
    // tails: db/du -> 0 above, (e^u)^2 -> 0 below faster than e^{-alpha1 u} grows).
    std::fill(m.x.begin(), m.x.end(), 0.0);
    m.bc_lo = [](double) { return 0.0; };
    m.bc_hi = [](double) { return 0.0; };
    m.src = [&, a1, b1, src_pref, tb2](double tau, double u) {
        const double db_du = std::exp(u + dc.alpha * tau) * n_of_d1(p, dc, tau, u);
        return std::exp(-a1 * u - b1 * tau) * std::exp(-tb2 * tau) * src_pref * db_du * db_du;
    };

    m.march(p.T, spec.n_tau, spec.rannacher_substeps / 2, [&](int k, double tau) {
        sol.tau[k] = tau;
        for (std::size_t i = 0; i < sol.u.size(); ++i)
            sol.values[static_cast<std::size_t>(k) * sol.u.size() + i] =
                m.x[i] * std::exp(a1 * sol.u[i] + b1 * tau);
    });
    return sol;
}

namespace {

double rel_residual(std::initializer_list<double> terms) {
    double sum = 0.0, scale = 0.0;
    for (double t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    return scale > 0.0 ? std::abs(sum) / scale : 0.0;
}

}  // namespace

double residual_check(const ModelParams& p, Residual which,
                      const std::vector<double>& ts, const std::vector<double>& vs,
                      const NumericsConfig& cfg) {
    const DerivedConstants dc = derive(p);
    validate(cfg);
    double worst = 0.0;

    for (double t : ts) {
        if (!(t >= 0.0) || !(t < p.T))
            throw DomainError("residual_check: ts must lie in [0, T)");
        const double delta = p.T - t;
        double h = cfg.fd_bump * p.T;
        if (h > 0.5 * delta) h = 0.5 * delta;
        // a, b, c all depend on time only through T - t, so time derivatives
        // difference a bumped horizon; the stencil stays valid at t = 0.
        ModelParams up = p, dn = p;
        up.T = p.T + h;
        dn.T = p.T - h;

        if (which == Residual::a) {
            const double a0 = a_of_t(p, t);
            const double da_dt = -(a_of_t(up, t) - a_of_t(dn, t)) / (2.0 * h);
            worst = std::max(worst, rel_residual({da_dt, -dc.theta_bar * dc.theta_bar * a0}));
            continue;
        }

        for (double v : vs) {
            if (which == Residual::b) {
                const BOutputs bo = b_price(p, t, v);
                worst = std::max(worst, rel_residual({bo.db_dt, dc.alpha * v * bo.db_dv,
                                                      0.5 * p.sigma1 * p.sigma1 * v * v * bo.d2b_dv2}));
            } else {
                const double dc_dt = -v * v *
                    (c_value(up, t, v, cfg).c_tilde - c_value(dn, t, v, cfg).c_tilde) / (2.0 * h);
                auto dcdv = [&](double x) {
                    const CTildeOutputs o = c_value(p, t, x, cfg);
                    return 2.0 * x * o.c_tilde + x * x * o.dctilde_dv;
                };
                const double hv = cfg.fd_bump * v;
                const double d2c_dv2 = (dcdv(v + hv) - dcdv(v - hv)) / (2.0 * hv);
                const double dbdv = b_price(p, t, v).db_dv;
                const double source = a_of_t(p, t) * p.sigma1 * p.sigma1 * v * v *
                                      (1.0 - p.rho * p.rho) * dbdv * dbdv;
                worst = std::max(worst, rel_residual({dc_dt, p.mu1 * v * dcdv(v),
                                                      0.5 * p.sigma1 * p.sigma1 * v * v * d2c_dv2,
                                                      source}));
            }
        }
    }
    return worst;
}

}  // namespace mvh
