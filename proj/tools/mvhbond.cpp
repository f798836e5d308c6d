// mvhbond: prices Merton-style bonds under mean-variance hedging of the
// non-traded firm value, and cross-verifies the closed forms against the
// PDE and simulation oracles. Emits plot-ready CSV / machine-readable JSON.
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mvh/closed_form.hpp"
#include "mvh/hedge_mc.hpp"
#include "mvh/jsonw.hpp"
#include "mvh/params.hpp"
#include "mvh/pde_fd.hpp"
#include "mvh/pricing.hpp"
#include "mvh/replication.hpp"
#include "mvh/version.hpp"

using namespace mvh;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string params_file;
    std::string out;
    bool json = false;
    double t = 0.0;
    double v = 66.0;
    double s0 = 100.0;
    std::uint64_t seed = 12345;
    long long paths = 200000;
    int steps = 500;
    int grid_nu = 400;
    int grid_ntau = 400;
    int quad_points = 64;

    // inline model overrides; presence tracked through the option pointers
    double mu1 = 0, sigma1 = 0, mu2 = 0, sigma2 = 0, rho = 0, T = 0, D = 0, kappa = 0;
    CLI::Option *o_mu1 = nullptr, *o_sigma1 = nullptr, *o_mu2 = nullptr, *o_sigma2 = nullptr,
                *o_rho = nullptr, *o_T = nullptr, *o_D = nullptr, *o_kappa = nullptr;

    // curve / sensitivity / hedge extras
    double T_min = 0.5, T_max = 15.0;
    int T_count = 30;
    std::string maturities;       // explicit comma list overrides the T range
    std::string v_list = "66,132";
    std::string kappa_list = "1";
    std::string sweep_param;
    double sweep_min = 0.0, sweep_max = 0.0;
    int sweep_count = 25;
    std::string p0 = "auto";
    std::string p0_grid;          // empty: single run; "auto" or comma list: fit
};

void add_common(CLI::App* cmd, Options& o, bool with_numerics) {
    cmd->add_option("--params", o.params_file, "JSON parameter file");
    o.o_mu1 = cmd->add_option("--mu1", o.mu1, "firm value drift override");
    o.o_sigma1 = cmd->add_option("--sigma1", o.sigma1, "firm value volatility override");
    o.o_mu2 = cmd->add_option("--mu2", o.mu2, "hedge asset drift override");
    o.o_sigma2 = cmd->add_option("--sigma2", o.sigma2, "hedge asset volatility override");
    o.o_rho = cmd->add_option("--rho", o.rho, "driver correlation override");
    o.o_T = cmd->add_option("--T", o.T, "maturity override");
    o.o_D = cmd->add_option("--D", o.D, "face value override");
    o.o_kappa = cmd->add_option("--kappa", o.kappa, "risk-aversion weight override");
    cmd->add_option("--out", o.out, "write output to this file instead of stdout");
    if (with_numerics)
        cmd->add_option("--quad-points", o.quad_points, "Gauss-Legendre order")
            ->check(CLI::PositiveNumber);
}

ModelParams resolve_params(const Options& o) {
    ModelParams p;
    if (!o.params_file.empty()) {
        std::ifstream f(o.params_file, std::ios::binary);
        if (!f) throw DomainError("params: cannot open file " + o.params_file);
        std::ostringstream ss;
        ss << f.rdbuf();
        p = params_from_json_text(ss.str());
    }
    if (o.o_mu1->count()) p.mu1 = o.mu1;
    if (o.o_sigma1->count()) p.sigma1 = o.sigma1;
    if (o.o_mu2->count()) p.mu2 = o.mu2;
    if (o.o_sigma2->count()) p.sigma2 = o.sigma2;
    if (o.o_rho->count()) p.rho = o.rho;
    if (o.o_T->count()) p.T = o.T;
    if (o.o_D->count()) p.D = o.D;
    if (o.o_kappa->count()) p.kappa = o.kappa;
    validate(p);
    return p;
}

NumericsConfig resolve_numerics(const Options& o) {
    NumericsConfig cfg;
    cfg.quad_points = o.quad_points;
    cfg.pde_n_u = o.grid_nu;
    cfg.pde_n_tau = o.grid_ntau;
    cfg.mc_paths = o.paths;
    cfg.mc_steps = o.steps;
    cfg.rng_seed = o.seed;
    validate(cfg);
    return cfg;
}

// SOURCE_DATE_EPOCH wins everywhere; JSON outputs otherwise omit the wall
// clock so fixed-seed runs are byte-identical, CSV outputs record it.
void manifest_timestamp(JsonWriter& w, bool deterministic) {
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
        w.field("timestamp", static_cast<long long>(std::atoll(sde)));
    } else if (deterministic) {
        w.null_field("timestamp");
    } else {
        w.field("timestamp", static_cast<long long>(std::time(nullptr)));
    }
}

void write_manifest(JsonWriter& w, const std::string& command, const Options& o,
                    const ModelParams& p, const NumericsConfig& cfg, bool deterministic_ts) {
    w.object_begin("manifest")
        .field("command", command)
        .field("tool_version", version_string);
    if (o.params_file.empty())
        w.null_field("params_file");
    else
        w.field("params_file", o.params_file);
    w.object_begin("params")
        .field("mu1", p.mu1)
        .field("sigma1", p.sigma1)
        .field("mu2", p.mu2)
        .field("sigma2", p.sigma2)
        .field("rho", p.rho)
        .field("T", p.T)
        .field("D", p.D)
        .field("kappa", p.kappa)
        .end();
    w.object_begin("numerics")
        .field("quad_points", cfg.quad_points)
        .field("fd_bump", cfg.fd_bump)
        .field("pde_n_u", cfg.pde_n_u)
        .field("pde_n_tau", cfg.pde_n_tau)
        .field("mc_paths", static_cast<long long>(cfg.mc_paths))
        .field("mc_steps", cfg.mc_steps)
        .end();
    if (o.out.empty())
        w.null_field("out");
    else
        w.field("out", o.out);
    w.field("seed", static_cast<unsigned long long>(o.seed));
    manifest_timestamp(w, deterministic_ts);
    w.end();
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw DomainError("out: cannot open file " + o.out);
    f << text;
}

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            const double x = std::stod(tok, &used);
            while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(x);
        } catch (const std::exception&) {
            throw DomainError(std::string(what) + ": cannot parse '" + tok + "' as a number");
        }
    }
    if (out.empty()) throw DomainError(std::string(what) + ": empty list");
    return out;
}

std::string fmt(double x) { return json_double(x); }  // %.17g, shared with JSON

// ---------------------------------------------------------------- price ----

int cmd_price(const Options& o) {
    const ModelParams p = resolve_params(o);
    const NumericsConfig cfg = resolve_numerics(o);
    const PriceBreakdown pb = bond_price(p, o.t, o.v, cfg);
    if (o.json) {
        JsonWriter w;
        w.begin();
        write_manifest(w, "price", o, p, cfg, /*deterministic_ts=*/true);
        w.field("t", o.t)
            .field("v", o.v)
            .field("a", pb.a)
            .field("b", pb.b)
            .field("c", pb.c)
            .field("c_tilde", pb.c_tilde)
            .field("discount", pb.discount)
            .field("price", pb.price)
            .field("yield", pb.yield)
            .end();
        emit(o, w.str() + "\n");
        return kExitOk;
    }
    std::ostringstream out;
    out << "t         " << fmt(o.t) << "\n"
        << "v         " << fmt(o.v) << "\n"
        << "a         " << fmt(pb.a) << "\n"
        << "b         " << fmt(pb.b) << "\n"
        << "c         " << fmt(pb.c) << "\n"
        << "c_tilde   " << fmt(pb.c_tilde) << "\n"
        << "discount  " << fmt(pb.discount) << "\n"
        << "price     " << fmt(pb.price) << "\n"
        << "yield     " << fmt(pb.yield) << "\n";
    emit(o, out.str());
    return kExitOk;
}

// ---------------------------------------------------------------- curve ----

std::string csv_manifest_line(const std::string& command, const Options& o,
                              const ModelParams& p, const NumericsConfig& cfg) {
    JsonWriter w;
    w.begin();
    write_manifest(w, command, o, p, cfg, /*deterministic_ts=*/false);
    w.end();
    const std::string line = w.str();
    // {"manifest":{...}} -> {...}
    const std::string prefix = "{\"manifest\":";
    return "# manifest " + line.substr(prefix.size(), line.size() - prefix.size() - 1) + "\n";
}

int cmd_curve(const Options& o) {
    const ModelParams base = resolve_params(o);
    const NumericsConfig cfg = resolve_numerics(o);
    std::vector<double> Ts;
    if (!o.maturities.empty()) {
        Ts = parse_list(o.maturities, "--maturities");
    } else {
        if (!(o.T_min > 0.0) || !(o.T_max >= o.T_min) || o.T_count < 1)
            throw DomainError("curve: need 0 < --T-min <= --T-max and --T-count >= 1");
        for (int i = 0; i < o.T_count; ++i)
            Ts.push_back(o.T_count == 1
                             ? o.T_min
                             : o.T_min + (o.T_max - o.T_min) * i / (o.T_count - 1));
    }
    const std::vector<double> vs = parse_list(o.v_list, "--v-list");
    const std::vector<double> ks = parse_list(o.kappa_list, "--kappa-list");

    std::ostringstream out;
    out << csv_manifest_line("curve", o, base, cfg);
    out << "T,v,kappa,b,c_tilde,B,yield\n";
    for (double k : ks)
        for (double v : vs)
            for (double T : Ts) {
                ModelParams q = base;
                q.T = T;
                q.kappa = k;
                validate(q);
                const PriceBreakdown pb = bond_price(q, 0.0, v, cfg);
                out << fmt(T) << ',' << fmt(v) << ',' << fmt(k) << ',' << fmt(pb.b) << ','
                    << fmt(pb.c_tilde) << ',' << fmt(pb.price) << ',' << fmt(pb.yield) << "\n";
            }
    emit(o, out.str());
    return kExitOk;
}

// ---------------------------------------------------------- sensitivity ----

int cmd_sensitivity(const Options& o) {
    const ModelParams base = resolve_params(o);
    const NumericsConfig cfg = resolve_numerics(o);
    const std::string& name = o.sweep_param;
    if (name != "mu1" && name != "theta_bar" && name != "sigma1" && name != "rho" &&
        name != "kappa")
        throw DomainError("sensitivity: --param must be one of mu1, theta_bar, sigma1, rho, kappa");
    if (!(o.sweep_max >= o.sweep_min) || o.sweep_count < 2)
        throw DomainError("sensitivity: need --min <= --max and --count >= 2");

    std::ostringstream out;
    out << csv_manifest_line("sensitivity", o, base, cfg);
    out << "param,value,b,c_tilde,B,yield\n";
    for (int i = 0; i < o.sweep_count; ++i) {
        const double x = o.sweep_min + (o.sweep_max - o.sweep_min) * i / (o.sweep_count - 1);
        ModelParams q = base;
        if (name == "mu1") q.mu1 = x;
        else if (name == "theta_bar") q.mu2 = x * q.sigma2;  // theta_bar = mu2/sigma2
        else if (name == "sigma1") q.sigma1 = x;
        else if (name == "rho") q.rho = x;
        else q.kappa = x;
        validate(q);
        const PriceBreakdown pb = bond_price(q, o.t, o.v, cfg);
        out << name << ',' << fmt(x) << ',' << fmt(pb.b) << ',' << fmt(pb.c_tilde) << ','
            << fmt(pb.price) << ',' << fmt(pb.yield) << "\n";
    }
    emit(o, out.str());
    return kExitOk;
}

// ---------------------------------------------------------------- hedge ----

int cmd_hedge(const Options& o) {
    const ModelParams p = resolve_params(o);
    const NumericsConfig cfg = resolve_numerics(o);
    const PathBatch batch =
        PathBatch::lazy(p, o.t, o.v, o.s0, cfg.mc_paths, cfg.mc_steps, cfg.rng_seed);
    const double b0 = b_price(p, o.t, o.v).b;
    const CTildeOutputs c0 = c_value(p, o.t, o.v, cfg);
    const double a0 = a_of_t(p, o.t);

    JsonWriter w;
    w.begin();
    write_manifest(w, "hedge", o, p, cfg, /*deterministic_ts=*/true);
    w.field("t0", o.t).field("v0", o.v).field("s0", o.s0);
    w.object_begin("reference").field("a", a0).field("b", b0).field("c", c0.c).end();

    if (!o.p0_grid.empty()) {
        std::vector<double> grid;
        if (o.p0_grid == "auto") {
            for (int i = -3; i <= 3; ++i) grid.push_back(b0 * (1.0 + 0.02 * i));
        } else {
            grid = parse_list(o.p0_grid, "--p0-grid");
        }
        const ValueFitResult fit = fit_value_function(p, batch, grid, cfg);
        w.field("mode", "fit");
        w.key("fit").raw_json(fit_result_to_json(fit));
        w.field("b_hat_rel_err", fit.b_hat / b0 - 1.0)
            .field("a_hat_rel_err", fit.a_hat / a0 - 1.0)
            .field("c_hat_z", fit.c_hat_se > 0.0 ? (fit.c_hat - c0.c) / fit.c_hat_se : 0.0);
    } else {
        const double p0 = o.p0 == "auto" ? b0 : parse_list(o.p0, "--p0").at(0);
        const HedgeSimResult hr = hedge_once(p, batch, p0);
        w.field("mode", "single");
        w.key("result").raw_json(hedge_result_to_json(hr));
        w.field("mse_minus_c", hr.mean_sq_error - c0.c)
            .field("z_score", hr.std_error > 0.0 ? (hr.mean_sq_error - c0.c) / hr.std_error : 0.0);
    }
    w.end();
    emit(o, w.str() + "\n");
    return kExitOk;
}

// --------------------------------------------------------------- verify ----

struct Check {
    std::string name;
    bool pass;
    std::string detail;  // JSON object text with the numbers behind the verdict
};

void push_check(std::vector<Check>& cs, const std::string& name, bool pass, JsonWriter& detail) {
    cs.push_back({name, pass, detail.str()});
}

int cmd_verify(const Options& o) {
    const ModelParams p = resolve_params(o);
    NumericsConfig cfg = resolve_numerics(o);
    std::vector<Check> checks;

    // 1. time-integral quadrature: doubling the order must not move c~
    {
        NumericsConfig hi = cfg;
        hi.quad_points = 2 * cfg.quad_points;
        double worst = 0.0;
        for (double v : {0.66 * p.D, 1.32 * p.D}) {
            const double lo_v = c_value(p, 0.0, v, cfg).c_tilde;
            const double hi_v = c_value(p, 0.0, v, hi).c_tilde;
            if (lo_v != 0.0) worst = std::max(worst, std::abs(hi_v / lo_v - 1.0));
        }
        JsonWriter d;
        d.begin().field("max_rel_shift", worst).field("tol", 1e-10).end();
        push_check(checks, "quadrature_doubling", worst <= 1e-10, d);
    }

    // 2. closed forms satisfy their generator equations
    {
        const std::vector<double> ts{0.0, 0.25 * p.T, 0.7 * p.T};
        const std::vector<double> vs{0.4 * p.D, 0.66 * p.D, p.D, 1.32 * p.D, 2.5 * p.D};
        const double ra = residual_check(p, Residual::a, ts, vs, cfg);
        const double rb = residual_check(p, Residual::b, ts, vs, cfg);
        const double rc = residual_check(p, Residual::c, ts, vs, cfg);
        JsonWriter d;
        d.begin()
            .field("residual_a", ra)
            .field("residual_b", rb)
            .field("residual_c", rc)
            .field("tol_a", 1e-8)
            .field("tol_b", 1e-12)
            .field("tol_c", 1e-5)
            .end();
        push_check(checks, "generator_residuals", ra <= 1e-8 && rb <= 1e-12 && rc <= 1e-5, d);
    }

    // 3. b: independent PDE march vs closed form at valuation time, plus
    //    second-order convergence under grid halving
    double b_err_fine = 0.0;
    {
        auto b_err = [&](int n) {
            PdeGridSpec spec;
            spec.n_u = n;
            spec.n_tau = n;
            const GridSolution g = solve_b_pde(p, spec);
            const int last = static_cast<int>(g.tau.size()) - 1;
            const double win = 0.5 * (g.u.back() - g.u.front()) / 2.0;
            double worst = 0.0;
            for (std::size_t i = 0; i < g.u.size(); ++i) {
                if (std::abs(g.u[i] - std::log(p.D)) > win) continue;
                const double ref = b_price(p, 0.0, std::exp(g.u[i])).b;
                worst = std::max(worst, std::abs(g.at(last, i) - ref));
            }
            return worst / p.D;
        };
        const int n = cfg.pde_n_u;
        const double coarse = b_err(n / 2);
        b_err_fine = b_err(n);
        const double ratio = b_err_fine > 0.0 ? coarse / b_err_fine : 4.0;
        JsonWriter d;
        d.begin()
            .field("rel_err", b_err_fine)
            .field("rel_err_half_grid", coarse)
            .field("refinement_ratio", ratio)
            .field("tol", 1e-3)
            .field("n", n)
            .end();
        push_check(checks, "b_pde_vs_closed_form",
                   b_err_fine <= 1e-3 && ratio >= 2.5 && ratio <= 6.0, d);
    }

    // 4. c: quadrature vs PDE march with the analytic source
    {
        PdeGridSpec spec;
        spec.n_u = cfg.pde_n_u;
        spec.n_tau = cfg.pde_n_tau;
        const GridSolution g = solve_c_pde(p, spec);
        const int last = static_cast<int>(g.tau.size()) - 1;
        double worst = 0.0;
        for (double v : {0.66 * p.D, 1.32 * p.D}) {
            const double ref = c_value(p, 0.0, v, cfg).c;
            const double got = g.interp_u(last, std::log(v));
            if (ref != 0.0) worst = std::max(worst, std::abs(got / ref - 1.0));
            else worst = std::max(worst, std::abs(got));
        }
        JsonWriter d;
        d.begin().field("max_rel_err", worst).field("tol", 1e-2).end();
        push_check(checks, "c_pde_vs_quadrature", worst <= 1e-2, d);
    }

    // 5. c vs realized mean-square hedging error at p0 = b, with an O(dt)
    //    bias band from a steps-doubling run
    {
        const double v0 = 0.66 * p.D;
        const double b0 = b_price(p, 0.0, v0).b;
        const double cref = c_value(p, 0.0, v0, cfg).c;
        const PathBatch batch =
            PathBatch::lazy(p, 0.0, v0, o.s0, cfg.mc_paths, cfg.mc_steps, cfg.rng_seed);
        const HedgeSimResult h1 = hedge_once(p, batch, b0);
        const PathBatch batch2 =
            PathBatch::lazy(p, 0.0, v0, o.s0, cfg.mc_paths, 2 * cfg.mc_steps, cfg.rng_seed);
        const HedgeSimResult h2 = hedge_once(p, batch2, b0);
        const double band = 2.0 * std::abs(h1.mean_sq_error - h2.mean_sq_error);
        const double dev = std::abs(h1.mean_sq_error - cref);
        const bool pass = dev <= 3.0 * h1.std_error + band;
        JsonWriter d;
        d.begin()
            .field("mse", h1.mean_sq_error)
            .field("mse_double_steps", h2.mean_sq_error)
            .field("c", cref)
            .field("std_error", h1.std_error)
            .field("bias_band", band)
            .field("deviation", dev)
            .field("n_paths", static_cast<long long>(cfg.mc_paths))
            .field("n_steps", cfg.mc_steps)
            .end();
        push_check(checks, "c_vs_mc_hedging_error", pass, d);
    }

    // 6. sign/monotonicity scan and market-price-of-risk stability
    {
        JsonWriter d;
        if (std::abs(p.rho) >= 1.0) {
            d.begin()
                .field("skipped", true)
                .field("note", "degenerate: complete market")
                .end();
            push_check(checks, "nflvr_diagnostics", true, d);
        } else {
            const DiagnosticsReport r = nflvr_diagnostics(p, cfg);
            const double ratio =
                r.sup_theta_coarse > 0.0 ? r.sup_theta_fine / r.sup_theta_coarse : 1.0;
            bool pass = r.min_N > 0.0 && r.violations_monotone_ctilde == 0 &&
                        r.violations_sign_dbdv == 0 && r.violations_sign_dctildedv == 0;
            d.begin().key("report").raw_json(diagnostics_to_json(r));
            d.field("sup_theta_refinement_ratio", ratio);
            // The boundedness statement behind the sup|M/N| stability gate
            // assumes 1/2 + alpha/sigma1^2 > 0; outside that regime the sup is
            // reported but not gated.
            if (r.novikov_condition) {
                pass = pass && ratio <= 1.10;
            } else {
                d.field("note",
                        "novikov_condition=false: sup_theta ratio reported, not gated");
            }
            d.end();
            push_check(checks, "nflvr_diagnostics", pass, d);
        }
    }

    // 7. simulation repeatability (same seed, bitwise)
    {
        const PathBatch batch = PathBatch::lazy(p, 0.0, 0.66 * p.D, o.s0, 2000, 100, cfg.rng_seed);
        const double b0 = b_price(p, 0.0, 0.66 * p.D).b;
        const HedgeSimResult r1 = hedge_once(p, batch, b0);
        const HedgeSimResult r2 = hedge_once(p, batch, b0);
        const bool pass = r1.mean_sq_error == r2.mean_sq_error && r1.std_error == r2.std_error;
        JsonWriter d;
        d.begin()
            .field("mse_first", r1.mean_sq_error)
            .field("mse_second", r2.mean_sq_error)
            .end();
        push_check(checks, "mc_repeatability", pass, d);
    }

    bool all = true;
    for (const Check& c : checks) all = all && c.pass;

    JsonWriter w;
    w.begin();
    write_manifest(w, "verify", o, p, cfg, /*deterministic_ts=*/true);
    w.field("novikov_condition", derive(p).novikov);
    w.begin_array("checks");
    for (const Check& c : checks) {
        w.item_begin();
        w.field("name", c.name).field("pass", c.pass);
        w.key("detail").raw_json(c.detail);
        w.end();
    }
    w.end_array();
    w.field("all_pass", all);
    w.end();
    emit(o, w.str() + "\n");
    std::fprintf(stderr, "verify: %s (%zu checks)\n", all ? "PASS" : "FAIL", checks.size());
    return all ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean-variance bond pricing and verification"};
    app.require_subcommand(1);
    Options po, cu, se, he, ve;

    CLI::App* price = app.add_subcommand("price", "price one bond state (a, b, c, B, yield)");
    add_common(price, po, true);
    price->add_option("--t", po.t, "valuation time");
    price->add_option("--v", po.v, "firm value");
    price->add_flag("--json", po.json, "emit JSON instead of aligned text");

    CLI::App* curve = app.add_subcommand("curve", "yield curves over maturity (CSV)");
    add_common(curve, cu, true);
    curve->add_option("--T-min", cu.T_min, "smallest maturity");
    curve->add_option("--T-max", cu.T_max, "largest maturity");
    curve->add_option("--T-count", cu.T_count, "number of maturities");
    curve->add_option("--maturities", cu.maturities, "explicit comma-separated maturities");
    curve->add_option("--v-list", cu.v_list, "comma-separated firm values");
    curve->add_option("--kappa-list", cu.kappa_list, "comma-separated risk weights");

    CLI::App* sens = app.add_subcommand("sensitivity", "one-parameter sweep (CSV)");
    add_common(sens, se, true);
    sens->add_option("--param", se.sweep_param, "mu1 | theta_bar | sigma1 | rho | kappa")
        ->required();
    sens->add_option("--min", se.sweep_min, "sweep start")->required();
    sens->add_option("--max", se.sweep_max, "sweep end")->required();
    sens->add_option("--count", se.sweep_count, "sweep points");
    sens->add_option("--t", se.t, "valuation time");
    sens->add_option("--v", se.v, "firm value");

    CLI::App* hedge = app.add_subcommand("hedge", "simulate the variance-optimal hedge (JSON)");
    add_common(hedge, he, true);
    hedge->add_option("--t", he.t, "start time");
    hedge->add_option("--v", he.v, "initial firm value");
    hedge->add_option("--s0", he.s0, "initial hedge asset price");
    hedge->add_option("--p0", he.p0, "initial wealth, or 'auto' for b(t,v)");
    hedge->add_option("--p0-grid", he.p0_grid,
                      "comma-separated wealth sweep (or 'auto'): quadratic fit mode");
    hedge->add_option("--paths", he.paths, "simulated paths")->check(CLI::PositiveNumber);
    hedge->add_option("--steps", he.steps, "rebalancing steps")->check(CLI::PositiveNumber);
    hedge->add_option("--seed", he.seed, "RNG seed");

    // verify defaults: half-resolution PDE (it runs two solves) and a light
    // MC pass; flags widen them when more assurance is wanted
    ve.grid_nu = 200;
    ve.grid_ntau = 200;
    ve.paths = 20000;
    ve.steps = 250;
    CLI::App* verify = app.add_subcommand("verify", "cross-oracle verification battery (JSON)");
    add_common(verify, ve, true);
    verify->add_option("--grid-nu", ve.grid_nu, "PDE space intervals")->check(CLI::PositiveNumber);
    verify->add_option("--grid-ntau", ve.grid_ntau, "PDE time steps")->check(CLI::PositiveNumber);
    verify->add_option("--paths", ve.paths, "MC paths for the hedging check")
        ->check(CLI::PositiveNumber);
    verify->add_option("--steps", ve.steps, "MC steps for the hedging check")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", ve.seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        if (price->parsed()) return cmd_price(po);
        if (curve->parsed()) return cmd_curve(cu);
        if (sens->parsed()) return cmd_sensitivity(se);
        if (hedge->parsed()) return cmd_hedge(he);
        if (verify->parsed()) return cmd_verify(ve);
    } catch (const DomainError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const GridError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const FitError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    }
    return kExitInput;
}
