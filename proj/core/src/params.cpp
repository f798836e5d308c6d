#include "mvh/params.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "mvh/jsonw.hpp"

namespace mvh {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void validate(const ModelParams& p) {
    require(finite(p.mu1) && finite(p.mu2), "drifts must be finite");
    require(finite(p.sigma1) && p.sigma1 > 0.0, "sigma1 must be positive");
    require(finite(p.sigma2) && p.sigma2 > 0.0, "sigma2 must be positive");
    require(finite(p.rho) && p.rho >= -1.0 && p.rho <= 1.0, "rho must lie in [-1, 1]");
    require(finite(p.T) && p.T > 0.0, "T must be positive");
    require(finite(p.D) && p.D > 0.0, "D must be positive");
    require(finite(p.kappa) && p.kappa >= 0.0, "kappa must be nonnegative");
}

void validate(const NumericsConfig& cfg) {
    require(cfg.quad_points >= 2, "quad_points must be >= 2");
    require(cfg.inner_quad_points >= 2, "inner_quad_points must be >= 2");
    require(finite(cfg.fd_bump) && cfg.fd_bump > 0.0 && cfg.fd_bump <= 1e-2,
            "fd_bump must lie in (0, 1e-2]");
    require(cfg.pde_n_u >= 4 && cfg.pde_n_u % 2 == 0, "pde_n_u must be even and >= 4");
    require(cfg.pde_n_tau >= 2, "pde_n_tau must be >= 2");
    require(finite(cfg.pde_width_sigmas) && cfg.pde_width_sigmas > 0.0,
            "pde_width_sigmas must be positive");
    require(cfg.pde_rannacher_substeps >= 0, "pde_rannacher_substeps must be >= 0");
    require(cfg.mc_paths >= 1, "mc_paths must be >= 1");
    require(cfg.mc_steps >= 1, "mc_steps must be >= 1");
    require(cfg.diag_grid_n >= 2, "diag_grid_n must be >= 2");
    require(finite(cfg.diag_time_edge) && cfg.diag_time_edge > 0.0 && cfg.diag_time_edge < 1.0,
            "diag_time_edge must lie in (0, 1)");
    require(finite(cfg.fit_min_r2) && cfg.fit_min_r2 > 0.0 && cfg.fit_min_r2 < 1.0,
            "fit_min_r2 must lie in (0, 1)");
}

DerivedConstants derive(const ModelParams& p) {
    validate(p);
    DerivedConstants d;
    d.alpha = p.mu1 - p.rho * p.mu2 * p.sigma1 / p.sigma2;
    d.theta_bar = p.mu2 / p.sigma2;
    const double s2 = p.sigma1 * p.sigma1;
    d.eta = 0.5 - d.alpha / s2;
    d.beta = -s2 * d.eta * d.eta / 2.0;
    d.alpha1 = 0.5 - p.mu1 / s2;
    d.beta1 = -s2 * d.alpha1 * d.alpha1 / 2.0;
    d.k1 = -d.theta_bar * d.theta_bar - s2 - 2.0 * d.theta_bar * p.rho * p.sigma1;
    d.novikov = (0.5 + d.alpha / s2) > 0.0;
    return d;
}

ModelParams params_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(std::string("parameter file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw DomainError("parameter file must hold a JSON object");

    ModelParams p;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (!it.value().is_number())
            throw DomainError("parameter '" + k + "' must be a number");
        const double x = it.value().get<double>();
        if (k == "mu1") p.mu1 = x;
        else if (k == "sigma1") p.sigma1 = x;
        else if (k == "mu2") p.mu2 = x;
        else if (k == "sigma2") p.sigma2 = x;
        else if (k == "rho") p.rho = x;
        else if (k == "T") p.T = x;
        else if (k == "D") p.D = x;
        else if (k == "kappa") p.kappa = x;
        else throw DomainError("unknown parameter key '" + k + "'");
    }
    validate(p);
    return p;
}

std::string params_to_json_text(const ModelParams& p) {
    JsonWriter w;
    w.begin()
        .field("mu1", p.mu1)
        .field("sigma1", p.sigma1)
        .field("mu2", p.mu2)
        .field("sigma2", p.sigma2)
        .field("rho", p.rho)
        .field("T", p.T)
        .field("D", p.D)
        .field("kappa", p.kappa)
        .end();
    return w.str();
}

}  // namespace mvh
