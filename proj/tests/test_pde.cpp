#include <cmath>
#include <vector>

#include "doctest.h"
#include "mvh/closed_form.hpp"
#include "mvh/params.hpp"
#include "mvh/pde_fd.hpp"
#include "mvh/replication.hpp"

using namespace mvh;

namespace {

// max |pde - closed form| / D on the t = 0 row, over the middle half of the
// log grid (the payoff kink sits on the pinned center node)
double b_row_error(const ModelParams& p, int n) {
    PdeGridSpec spec;
    spec.n_u = n;
    spec.n_tau = n;
    const GridSolution sol = solve_b_pde(p, spec);
    const double lo = sol.u.front(), hi = sol.u.back();
    const double quarter = 0.25 * (hi - lo);
    const double mid = 0.5 * (lo + hi);
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.u.size(); ++i) {
        if (std::abs(sol.u[i] - mid) > quarter) continue;
        const double v = std::exp(sol.u[i]);
        const double ref = b_price(p, 0.0, v).b;
        const double err = std::abs(sol.at(spec.n_tau, static_cast<int>(i)) - ref) / p.D;
        worst = std::max(worst, err);
    }
    return worst;
}

}  // namespace

TEST_CASE("grid construction rejects bad specs") {
    const ModelParams p;
    PdeGridSpec spec;
    spec.n_u = 3;
    CHECK_THROWS_AS(solve_b_pde(p, spec), GridError);
    spec = PdeGridSpec{};
    spec.n_u = 101;  // must be even so ln D lands on a node
    CHECK_THROWS_AS(solve_b_pde(p, spec), GridError);
    spec = PdeGridSpec{};
    spec.n_tau = 0;
    CHECK_THROWS_AS(solve_b_pde(p, spec), GridError);
    spec = PdeGridSpec{};
    spec.width_sigmas = 0.0;
    CHECK_THROWS_AS(solve_b_pde(p, spec), GridError);
    spec = PdeGridSpec{};
    spec.rannacher_substeps = 3;  // pairs of implicit half-steps
    CHECK_THROWS_AS(solve_b_pde(p, spec), GridError);
}

TEST_CASE("b solver agrees with the closed form and converges at order 2") {
    const ModelParams p;
    const double e100 = b_row_error(p, 100);
    const double e200 = b_row_error(p, 200);
    CHECK(e100 < 1e-3);
    CHECK(e200 < 2.5e-4);
    const double ratio = e100 / e200;
    CHECK(ratio > 2.5);
    CHECK(ratio < 6.0);
}

TEST_CASE("b solver terminal row is the payoff") {
    const ModelParams p;
    PdeGridSpec spec;
    spec.n_u = 64;
    spec.n_tau = 8;
    const GridSolution sol = solve_b_pde(p, spec);
    for (std::size_t i = 0; i < sol.u.size(); ++i) {
        const double v = std::exp(sol.u[i]);
        CHECK(sol.at(0, static_cast<int>(i)) ==
              doctest::Approx(std::min(v, p.D)).epsilon(1e-12));
    }
    // ln D is pinned on the middle node
    CHECK(sol.u[spec.n_u / 2] == doctest::Approx(std::log(p.D)).epsilon(1e-14));
}

TEST_CASE("c solver agrees with the quadrature") {
    const ModelParams p;
    PdeGridSpec spec;
    spec.n_u = 200;
    spec.n_tau = 200;
    const GridSolution sol = solve_c_pde(p, spec);
    for (double v : {66.0, 132.0}) {
        const double ref = c_value(p, 0.0, v).c;
        const double got = sol.interp_u(spec.n_tau, std::log(v));
        CHECK(got == doctest::Approx(ref).epsilon(1e-2));
    }
}

TEST_CASE("closed forms satisfy the generator identities") {
    const ModelParams p;
    const std::vector<double> ts = {0.0, 2.5, 7.0};
    const std::vector<double> vs = {40.0, 66.0, 100.0, 132.0, 250.0};
    CHECK(residual_check(p, Residual::a, ts, vs) < 1e-8);
    CHECK(residual_check(p, Residual::b, ts, vs) < 1e-12);
    CHECK(residual_check(p, Residual::c, ts, vs) < 1e-6);
}

TEST_CASE("interp_u is exact on nodes and clamps outside") {
    const ModelParams p;
    PdeGridSpec spec;
    spec.n_u = 32;
    spec.n_tau = 4;
    const GridSolution sol = solve_b_pde(p, spec);
    const int row = spec.n_tau;
    CHECK(sol.interp_u(row, sol.u[7]) == doctest::Approx(sol.at(row, 7)).epsilon(1e-14));
    const double mid = 0.5 * (sol.u[7] + sol.u[8]);
    const double expect = 0.5 * (sol.at(row, 7) + sol.at(row, 8));
    CHECK(sol.interp_u(row, mid) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(sol.interp_u(row, sol.u.front() - 5.0) ==
          doctest::Approx(sol.at(row, 0)).epsilon(1e-14));
    CHECK(sol.interp_u(row, sol.u.back() + 5.0) ==
          doctest::Approx(sol.at(row, spec.n_u)).epsilon(1e-14));
}
