// Acceptance battery: eight go/no-go gates, one [PASS]/[FAIL] line each.
// Every tolerance is pinned here, next to the check that uses it.  The gates
// cross three independent evaluation routes (closed form / quadrature, finite
// differences, Monte Carlo) and the CLI binary itself; CSV artifacts for the
// qualitative reproductions land in ./artifacts.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mvh/closed_form.hpp"
#include "mvh/hedge_mc.hpp"
#include "mvh/params.hpp"
#include "mvh/pde_fd.hpp"
#include "mvh/pricing.hpp"
#include "mvh/replication.hpp"

#ifndef MVHBOND_PATH
#error "MVHBOND_PATH must point at the CLI binary"
#endif

using namespace mvh;

namespace {

int g_fails = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", idx, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_fails;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------- criterion 1

// max |pde - closed form| / D on the t = 0 row over the middle half of the
// log grid (the terminal kink sits on the pinned center node; the interior
// window keeps the boundary-condition error out of the measurement)
double b_row_error(const ModelParams& p, int n) {
    PdeGridSpec spec;
    spec.n_u = n;
    spec.n_tau = n;
    const GridSolution sol = solve_b_pde(p, spec);
    const double lo = sol.u.front(), hi = sol.u.back();
    const double quarter = 0.25 * (hi - lo), mid = 0.5 * (lo + hi);
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.u.size(); ++i) {
        if (std::abs(sol.u[i] - mid) > quarter) continue;
        const double ref = b_price(p, 0.0, std::exp(sol.u[i])).b;
        worst = std::max(worst,
                         std::abs(sol.at(spec.n_tau, static_cast<int>(i)) - ref) / p.D);
    }
    return worst;
}

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams p;
    const double e400 = b_row_error(p, 400);
    const double elapsed = seconds_since(t0);
    const double e200 = b_row_error(p, 200);
    const double ratio = e200 / e400;
    const bool pass = e400 <= 1e-3 && ratio >= 2.5 && ratio <= 6.0 && elapsed < 10.0;
    report(1, "closed-form b vs PDE", pass,
           fmt("max rel err %.3e (tol 1e-3) on 400x400 interior, halving ratio %.2f "
               "(need 2.5..6), solve %.1fs (< 10s)",
               e400, ratio, elapsed));
}

// ---------------------------------------------------------------- criterion 2

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams p;

    PdeGridSpec spec;
    spec.n_u = 400;
    spec.n_tau = 400;
    const GridSolution sol = solve_c_pde(p, spec);
    double pde_err = 0.0;
    for (double v : {66.0, 132.0}) {
        const double ref = c_value(p, 0.0, v).c;
        const double got = sol.interp_u(spec.n_tau, std::log(v));
        pde_err = std::max(pde_err, std::abs(got - ref) / ref);
    }

    const double c_ref = c_value(p, 0.0, 66.0).c;
    const double b0 = b_price(p, 0.0, 66.0).b;
    const PathBatch b500 = PathBatch::lazy(p, 0.0, 66.0, 100.0, 200000, 500, 1101);
    const HedgeSimResult r500 = hedge_once(p, b500, b0);
    const PathBatch b1000 = PathBatch::lazy(p, 0.0, 66.0, 100.0, 200000, 1000, 1101);
    const HedgeSimResult r1000 = hedge_once(p, b1000, b0);
    // the estimator carries O(dt) bias; the doubling run brackets it
    const double band = 2.0 * std::abs(r500.mean_sq_error - r1000.mean_sq_error);
    const double dev = std::abs(r500.mean_sq_error - c_ref);
    const double elapsed = seconds_since(t0);

    const bool pass =
        pde_err <= 1e-2 && dev <= 3.0 * r500.std_error + band && elapsed < 120.0;
    report(2, "c vs PDE and vs MC hedging error", pass,
           fmt("pde rel err %.2e (tol 1e-2); mse %.2f vs c %.2f: dev %.2f <= 3se %.2f "
               "+ bias band %.2f; %.0fs (< 120s)",
               pde_err, r500.mean_sq_error, c_ref, dev, 3.0 * r500.std_error, band,
               elapsed));
}

// ---------------------------------------------------------------- criterion 3

void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams p;
    const double b0 = b_price(p, 0.0, 66.0).b;
    const double a0 = a_of_t(p, 0.0);
    const double c0 = c_value(p, 0.0, 66.0).c;
    std::vector<double> grid;
    for (int i = -3; i <= 3; ++i) grid.push_back(b0 * (1.0 + 0.02 * i));
    const PathBatch batch = PathBatch::lazy(p, 0.0, 66.0, 100.0, 200000, 1000, 2202);
    const ValueFitResult fit = fit_value_function(p, batch, grid);
    const double b_err = std::abs(fit.b_hat - b0) / b0;
    const double a_err = std::abs(fit.a_hat - a0) / a0;
    const double c_dev = std::abs(fit.c_hat - c0);
    const bool pass = fit.r2 >= 0.999 && b_err <= 0.01 && a_err <= 0.05 &&
                      c_dev <= 3.0 * fit.c_hat_se;
    report(3, "quadratic value function", pass,
           fmt("R2 %.6f (>= 0.999); b_hat %.3f vs %.3f (%.2f%%, tol 1%%); a_hat %.4f vs "
               "%.4f (%.2f%%, tol 5%%); c_hat %.2f vs %.2f (dev %.2f <= 3se %.2f); %.0fs",
               fit.r2, fit.b_hat, b0, 100 * b_err, fit.a_hat, a0, 100 * a_err, fit.c_hat,
               c0, c_dev, 3.0 * fit.c_hat_se, seconds_since(t0)));
}

// ---------------------------------------------------------------- criterion 4

void criterion_4() {
    // five random valid parameter sets; fixed-seed 53-bit uniforms
    std::mt19937_64 gen(20260814);
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * ((gen() >> 11) * 0x1.0p-53);
    };
    int violations = 0, ties_or_noise = 0;
    std::string sets;
    for (int k = 0; k < 5; ++k) {
        ModelParams p;
        p.sigma1 = uni(0.1, 0.4);
        p.T = uni(4.0, 12.0);
        p.mu1 = uni(-0.04, 0.06);
        const double theta_bar = uni(-0.5, 0.8);
        p.mu2 = theta_bar * p.sigma2;
        p.rho = uni(-0.9, 0.9);
        validate(p);
        double prev = std::numeric_limits<double>::infinity();
        for (int j = 0; j <= 200; ++j) {
            const double v = (p.D / 100.0) * std::pow(1e4, j / 200.0);
            const double ct = c_value(p, 0.0, v).c_tilde;
            if (ct > prev && ct > kCtildeNoiseFloor)
                ++violations;
            else if (ct >= prev)
                ++ties_or_noise;
            prev = ct;
        }
        sets += fmt("%s{s1=%.2f,T=%.1f,m1=%.3f,tb=%.2f,r=%.2f}", k ? " " : "", p.sigma1,
                    p.T, p.mu1, theta_bar, p.rho);
    }
    report(4, "c_tilde monotone decreasing in v", violations == 0,
           fmt("0 violations required, got %d (%d saturated-tail ties) over 5 sets x 200 "
               "points: %s",
               violations, ties_or_noise, sets.c_str()));
}

// ---------------------------------------------------------------- criterion 5

void criterion_5() {
    const ModelParams p;
    NumericsConfig cfg;
    cfg.diag_grid_n = 100;  // the scan repeats on the nested 200-per-axis grid
    const DiagnosticsReport r = nflvr_diagnostics(p, cfg);

    double worst_db = 0.0, worst_dct = 0.0;
    for (double t : {0.0, 2.0, 5.0, 8.0})
        for (double v : {50.0, 70.0, 100.0, 130.0, 190.0}) {
            const double hv = 1e-6 * v;
            const BOutputs o = b_price(p, t, v);
            const double fd_b =
                (b_price(p, t, v + hv).b - b_price(p, t, v - hv).b) / (2.0 * hv);
            worst_db = std::max(worst_db, std::abs(o.db_dv - fd_b) / std::abs(fd_b));
            const double hv2 = 1e-4 * v;  // c_tilde is ~1e3 times flatter
            const CTildeOutputs c = c_value(p, t, v);
            const double fd_c = (c_value(p, t, v + hv2).c_tilde -
                                 c_value(p, t, v - hv2).c_tilde) /
                                (2.0 * hv2);
            worst_dct = std::max(worst_dct, std::abs(c.dctilde_dv - fd_c) / std::abs(fd_c));
        }

    const bool pass = r.violations_sign_dbdv == 0 && r.violations_sign_dctildedv == 0 &&
                      r.violations_monotone_ctilde == 0 && worst_db <= 1e-6 &&
                      worst_dct <= 1e-4;
    report(5, "sign conditions and analytic derivatives", pass,
           fmt("sign violations %d/%d (monotone %d) on 100x100 + nested 200x200; "
               "db/dv vs FD %.2e (tol 1e-6); dctilde/dv vs FD %.2e (tol 1e-4)",
               r.violations_sign_dbdv, r.violations_sign_dctildedv,
               r.violations_monotone_ctilde, worst_db, worst_dct));
}

// ---------------------------------------------------------------- criterion 6

void criterion_6() {
    ModelParams p;
    p.mu1 = 0.03;  // alpha = -0.006, inside the exponential-moment region
    const DerivedConstants d = derive(p);
    const DiagnosticsReport r = nflvr_diagnostics(p);
    const double ratio =
        r.sup_theta_coarse > 0.0 ? r.sup_theta_fine / r.sup_theta_coarse : 1.0;
    const bool pass = d.novikov && r.min_N > 0.0 && r.violations_sign_dbdv == 0 &&
                      r.violations_sign_dctildedv == 0 && ratio <= 1.10;
    report(6, "boundedness diagnostics, alpha = -0.006", pass,
           fmt("novikov %s; min N %.2e > 0; sup|M/N| %.4f -> %.4f under refinement "
               "(ratio %.3f <= 1.10)",
               d.novikov ? "true" : "false", r.min_N, r.sup_theta_coarse, r.sup_theta_fine,
               ratio));
}

// ---------------------------------------------------------------- criterion 7

std::ofstream open_csv(const std::string& name, const char* header) {
    std::filesystem::create_directories("artifacts");
    std::ofstream f("artifacts/" + name);
    f << header << "\n";
    f.precision(17);
    return f;
}

void criterion_7() {
    std::vector<std::string> problems;

    {  // (a) kappa = 0 with vanishing residual drift reproduces the baseline model
        ModelParams p;
        p.mu1 = 0.0;
        p.mu2 = 0.0;
        p.kappa = 0.0;
        auto f = open_csv("merton_equality.csv", "T,v,yield_model,yield_baseline,rel_diff");
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            p.T = 0.5 + i * 0.5;
            for (double v : {66.0, 132.0}) {
                const double ym = bond_price(p, 0.0, v).yield;
                const double yb =
                    yield_spread(merton_baseline(v, p.D, p.sigma1, p.T), p.D, p.T);
                const double rd = std::abs(ym - yb) / std::abs(yb);
                worst = std::max(worst, rd);
                f << p.T << "," << v << "," << ym << "," << yb << "," << rd << "\n";
            }
        }
        if (worst > 1e-10) problems.push_back(fmt("baseline equality off by %.1e", worst));
    }

    {  // (b) term-structure slopes at kappa = 1
        const ModelParams base;
        auto f = open_csv("yield_term_structure.csv", "T,v,yield");
        for (double v : {66.0, 132.0}) {
            double prev = v < 100.0 ? std::numeric_limits<double>::infinity() : -1.0;
            bool ok = true;
            for (int i = 0; i <= 38; ++i) {
                ModelParams p = base;
                p.T = 0.5 + i * 0.25;
                const double y = bond_price(p, 0.0, v).yield;
                f << p.T << "," << v << "," << y << "\n";
                ok = ok && (v < 100.0 ? y < prev : y > prev);
                prev = y;
            }
            if (!ok)
                problems.push_back(fmt("yield curve at v=%g not %s", v,
                                       v < 100.0 ? "decreasing" : "increasing"));
        }
    }

    {  // (c) yield increases pointwise in kappa
        auto f = open_csv("yield_in_kappa.csv", "T,v,kappa,yield");
        const double kappas[] = {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0};
        for (double T : {1.0, 5.0, 10.0})
            for (double v : {66.0, 100.0, 132.0}) {
                double prev = -std::numeric_limits<double>::infinity();
                for (double k : kappas) {
                    ModelParams p;
                    p.T = T;
                    p.kappa = k;
                    const double y = bond_price(p, 0.0, v).yield;
                    f << T << "," << v << "," << k << "," << y << "\n";
                    if (!(y > prev)) {
                        problems.push_back(
                            fmt("yield not increasing in kappa at T=%g v=%g k=%g", T, v, k));
                        break;
                    }
                    prev = y;
                }
            }
    }

    {  // (d) interior yield maximum at kappa = 100, v = 132
        auto f = open_csv("yield_hump.csv", "config,T,yield");
        for (int cfg = 2; cfg <= 3; ++cfg) {
            ModelParams p;
            if (cfg == 2)
                p.mu1 = 0.03;
            else
                p.rho = -0.6;
            p.kappa = 100.0;
            std::vector<double> ys;
            for (int i = 0; i <= 29; ++i) {
                p.T = 0.5 + i * 0.5;
                const double y = bond_price(p, 0.0, 132.0).yield;
                ys.push_back(y);
                f << cfg << "," << p.T << "," << y << "\n";
            }
            const auto it = std::max_element(ys.begin(), ys.end());
            const bool interior = it != ys.begin() && it != ys.end() - 1 &&
                                  *it > ys.front() + 1e-9 && *it > ys.back() + 1e-9;
            if (!interior) problems.push_back(fmt("no interior hump for config %d", cfg));
        }
    }

    {  // (e) b increases with the firm drift
        auto f = open_csv("b_in_mu1.csv", "mu1,v,b,db_dalpha");
        for (double v : {66.0, 132.0}) {
            double prev = -1.0;
            for (int i = 0; i <= 20; ++i) {
                ModelParams p;
                p.mu1 = -0.04 + i * 0.005;
                const BOutputs o = b_price(p, 0.0, v);
                f << p.mu1 << "," << v << "," << o.b << "," << o.db_dalpha << "\n";
                if (!(o.b > prev && o.db_dalpha > 0.0)) {
                    problems.push_back(fmt("b not increasing in mu1 at v=%g", v));
                    break;
                }
                prev = o.b;
            }
        }
    }

    {  // (f) residual variance is not monotone in the correlation at v = 132
        auto f = open_csv("rho_sweep_ctilde.csv", "rho,c_tilde");
        std::vector<double> cs;
        for (int i = 0; i <= 24; ++i) {
            ModelParams p;
            p.rho = -0.9 + i * 0.075;
            const double ct = c_value(p, 0.0, 132.0).c_tilde;
            cs.push_back(ct);
            f << p.rho << "," << ct << "\n";
        }
        bool rises = false, falls = false;
        for (std::size_t i = 1; i < cs.size(); ++i) {
            rises = rises || cs[i] > cs[i - 1];
            falls = falls || cs[i] < cs[i - 1];
        }
        if (!(rises && falls)) problems.push_back("rho sweep is monotone");
    }

    std::string detail = "artifacts: merton_equality, yield_term_structure, "
                         "yield_in_kappa, yield_hump, b_in_mu1, rho_sweep_ctilde";
    for (const std::string& s : problems) detail += "; " + s;
    report(7, "qualitative reproductions as CSV artifacts", problems.empty(), detail);
}

// ---------------------------------------------------------------- criterion 8

std::string run_to_file(const std::string& env, const std::string& args,
                        const std::string& path) {
    const std::string cmd = env + " \"" + MVHBOND_PATH + "\" " + args + " > " + path +
                            " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    if (raw < 0 || !WIFEXITED(raw) || WEXITSTATUS(raw) != 0)
        return "exit code " + std::to_string(raw < 0 ? raw : WEXITSTATUS(raw)) + " from " +
               args;
    return "";
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion_8() {
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories("artifacts");
    std::vector<std::string> problems;

    const std::string hedge_args = "hedge --paths 20000 --steps 100 --seed 31 --v 66";
    const char* henv[] = {"MVH_NUM_THREADS=2", "MVH_NUM_THREADS=2", "MVH_NUM_THREADS=1",
                          "MVH_NUM_THREADS=7"};
    std::vector<std::string> hedge_outs;
    for (int i = 0; i < 4; ++i) {
        const std::string path = fmt("artifacts/det_hedge_%d.json", i);
        const std::string err = run_to_file(henv[i], hedge_args, path);
        if (!err.empty()) problems.push_back(err);
        hedge_outs.push_back(slurp(path));
    }
    for (int i = 1; i < 4; ++i)
        if (hedge_outs[i] != hedge_outs[0]) {
            problems.push_back(fmt("hedge output %d differs (%s)", i, henv[i]));
            break;
        }

    const char* venv[] = {"MVH_NUM_THREADS=2", "MVH_NUM_THREADS=2", "MVH_NUM_THREADS=1"};
    std::vector<std::string> verify_outs;
    for (int i = 0; i < 3; ++i) {
        const std::string path = fmt("artifacts/det_verify_%d.json", i);
        const std::string err = run_to_file(venv[i], "verify", path);
        if (!err.empty()) problems.push_back(err);
        verify_outs.push_back(slurp(path));
    }
    for (int i = 1; i < 3; ++i)
        if (verify_outs[i] != verify_outs[0]) {
            problems.push_back(fmt("verify output %d differs (%s)", i, venv[i]));
            break;
        }

    std::string detail = fmt("hedge x4 and verify x3 byte-identical across runs and "
                             "1/2/7 workers; %.0fs",
                             seconds_since(t0));
    for (const std::string& s : problems) detail += "; " + s;
    report(8, "byte-identical JSON output", problems.empty(), detail);
}

}  // namespace

int main() {
    std::printf("acceptance battery (tolerances pinned in tests/acceptance_tests.cpp)\n");
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    std::printf("%d/8 criteria passed in %.0fs\n", 8 - g_fails, seconds_since(t0));
    return g_fails;
}
