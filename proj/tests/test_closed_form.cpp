#include <cmath>
#include <random>

#include "doctest.h"
#include "mvh/closed_form.hpp"
#include "mvh/normal.hpp"
#include "mvh/params.hpp"

using namespace mvh;

namespace {

ModelParams default_set() { return ModelParams{}; }

ModelParams shifted_drift_set() {
    ModelParams p;
    p.mu1 = 0.03;
    return p;
}

}  // namespace

TEST_CASE("a(t) closed form") {
    const ModelParams p = default_set();  // theta_bar = 0.4
    CHECK(a_of_t(p, 0.0) == doctest::Approx(0.2018965179946554085).epsilon(1e-14));
    CHECK(a_of_t(p, p.T) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a_of_t(p, 5.0) == doctest::Approx(std::exp(-0.16 * 5.0)).epsilon(1e-14));
    CHECK_THROWS_AS(a_of_t(p, -0.1), DomainError);
    CHECK_THROWS_AS(a_of_t(p, p.T + 0.1), DomainError);
}

TEST_CASE("b(0,v) pinned references") {
    // 50-digit quadrature references for the two working parameter sets
    const ModelParams p = default_set();
    CHECK(b_price(p, 0.0, 66.0).b ==
          doctest::Approx(54.336115629549387545).epsilon(1e-13));
    CHECK(b_price(p, 0.0, 132.0).b ==
          doctest::Approx(85.726651345223307145).epsilon(1e-13));
    const ModelParams q = shifted_drift_set();
    CHECK(b_price(q, 0.0, 66.0).b ==
          doctest::Approx(59.110235780898395184).epsilon(1e-13));
    CHECK(b_price(q, 0.0, 132.0).b ==
          doctest::Approx(89.00570098080651605).epsilon(1e-13));
}

TEST_CASE("b Monte Carlo oracle") {
    // b(0,v) = E[min(V_T, D)] under dV/V = alpha dt + sigma1 dW
    const ModelParams p = default_set();
    const double alpha = derive(p).alpha;
    std::mt19937_64 gen(88001);
    std::normal_distribution<double> z;
    const int n = 1'000'000;
    const double drift = (alpha - 0.5 * p.sigma1 * p.sigma1) * p.T;
    const double vol = p.sigma1 * std::sqrt(p.T);
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double vt = 66.0 * std::exp(drift + vol * z(gen));
        const double pay = std::min(vt, p.D);
        sum += pay;
        sum2 += pay * pay;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - b_price(p, 0.0, 66.0).b) < 4.0 * se);
    CHECK(se < 0.05);
}

TEST_CASE("b payoff limits and terminal branch") {
    const ModelParams p = default_set();
    const BOutputs at_T = b_price(p, p.T, 66.0);
    CHECK(at_T.b == 66.0);
    CHECK(b_price(p, p.T, 150.0).b == p.D);
    CHECK(b_price(p, p.T, p.D).db_dv == 0.5);  // symmetric one-sided limits
    // deep limits at t = 0
    const double b_lo = b_price(p, 0.0, 1e-9).b;
    CHECK(b_lo > 0.0);
    CHECK(b_lo < 1e-8);
    CHECK(b_price(p, 0.0, 1e9).b == doctest::Approx(p.D).epsilon(1e-12));
    CHECK_THROWS_AS(b_price(p, -0.5, 66.0), DomainError);
    CHECK_THROWS_AS(b_price(p, 0.0, -1.0), DomainError);
    CHECK_THROWS_AS(b_price(p, 0.0, 0.0), DomainError);
}

TEST_CASE("b sensitivities match central differences") {
    const ModelParams p = default_set();
    for (double t : {0.0, 3.0, 8.0})
        for (double v : {50.0, 90.0, 100.0, 140.0, 220.0}) {
            const BOutputs o = b_price(p, t, v);
            const double hv = 1e-6 * v;
            const double fd_v =
                (b_price(p, t, v + hv).b - b_price(p, t, v - hv).b) / (2.0 * hv);
            CHECK(o.db_dv == doctest::Approx(fd_v).epsilon(1e-8));
            const double fd_vv = (b_price(p, t, v + hv).db_dv -
                                  b_price(p, t, v - hv).db_dv) /
                                 (2.0 * hv);
            CHECK(o.d2b_dv2 == doctest::Approx(fd_vv).epsilon(1e-7));
            if (t > 0.0) {  // central time stencil needs room on both sides
                const double ht = 1e-7 * p.T;
                const double fd_t =
                    (b_price(p, t + ht, v).b - b_price(p, t - ht, v).b) / (2.0 * ht);
                CHECK(o.db_dt == doctest::Approx(fd_t).epsilon(1e-6));
            }
            // alpha enters through mu1 with unit slope
            ModelParams up = p, dn = p;
            up.mu1 += 1e-7;
            dn.mu1 -= 1e-7;
            const double fd_a =
                (b_price(up, t, v).b - b_price(dn, t, v).b) / 2e-7;
            CHECK(o.db_dalpha == doctest::Approx(fd_a).epsilon(1e-6));
            CHECK(o.db_dalpha > 0.0);
        }
}

TEST_CASE("score identity v e^{alpha tau} phi(d1) = D phi(d2)") {
    const ModelParams p = default_set();
    const double alpha = derive(p).alpha;
    for (double t : {0.0, 5.0, 9.5})
        for (double v : {40.0, 100.0, 250.0}) {
            const BOutputs o = b_price(p, t, v);
            const double tau = p.T - t;
            const double lhs = v * std::exp(alpha * tau) * norm_pdf(o.d1);
            const double rhs = p.D * norm_pdf(o.d2);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
}

TEST_CASE("merton baseline equals b when the residual drift vanishes") {
    ModelParams p;  // mu1 = mu2 = 0 makes alpha = 0 = the baseline drift
    p.mu1 = 0.0;
    p.mu2 = 0.0;
    for (double v : {50.0, 100.0, 180.0}) {
        const double lhs = b_price(p, 0.0, v).b;
        const double rhs = merton_baseline(v, p.D, p.sigma1, p.T);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
    }
    CHECK(merton_baseline(66.0, 100.0, 0.15, 10.0) ==
          doctest::Approx(62.024929335861129642).epsilon(1e-13));
    CHECK(merton_baseline(132.0, 100.0, 0.15, 10.0) ==
          doctest::Approx(90.7262342903344497).epsilon(1e-13));
}

TEST_CASE("yield_spread conventions") {
    const double B = 100.0 * std::exp(-0.07 * 4.0);
    CHECK(yield_spread(B, 100.0, 4.0) == doctest::Approx(0.07).epsilon(1e-13));
    CHECK(std::isnan(yield_spread(50.0, 100.0, 0.0)));
    CHECK(std::isnan(yield_spread(0.0, 100.0, 2.0)));
    CHECK(std::isnan(yield_spread(50.0, 0.0, 2.0)));
}
