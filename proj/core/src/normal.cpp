#include "mvh/normal.hpp"

#include <algorithm>
#include <cmath>

namespace mvh {

namespace {
constexpr double inv_sqrt_2pi = 0.39894228040143267794;
constexpr double sqrt2 = 1.4142135623730950488;
constexpr double two_pi = 6.2831853071795864769;

// Gauss-Legendre half-rules on [-1,1] (symmetric nodes omitted); order picked
// by |r| as in Genz's rectangle algorithm.
constexpr double gx6[3] = {-0.93246951420315203, -0.66120938646626451, -0.23861918608319691};
constexpr double gw6[3] = {0.17132449237917036, 0.36076157304813861, 0.46791393457269104};
constexpr double gx12[6] = {-0.98156063424671925, -0.90411725637047486, -0.76990267419430469,
                            -0.58731795428661745, -0.36783149899818019, -0.12523340851146892};
constexpr double gw12[6] = {0.047175336386511827, 0.10693932599531843, 0.16007832854334622,
                            0.20316742672306592,  0.23349253653835481, 0.24914704581340277};
constexpr double gx20[10] = {-0.99312859918509492, -0.96397192727791379, -0.91223442825132590,
                             -0.83911697182221882, -0.74633190646015079, -0.63605368072651503,
                             -0.51086700195082710, -0.37370608871541956, -0.22778585114164508,
                             -0.076526521133497334};
constexpr double gw20[10] = {0.017614007139152118, 0.040601429800386941, 0.062672048334109064,
                             0.083276741576704749, 0.10193011981724044,  0.11819453196151842,
                             0.13168863844917663,  0.14209610931838205,  0.14917298647260375,
                             0.15275338713072585};
}  // namespace

double norm_pdf(double x) { return inv_sqrt_2pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / sqrt2); }

// Upper-orthant probability P(X > h, Y > k); Drezner & Wesolowsky's single
// integral over the correlation, with Genz's asymptotic split for |r| > 0.925.
static double bvn_upper(double h, double k, double r) {
    const double* gx;
    const double* gw;
    int ng;
    const double ar = std::abs(r);
    if (ar < 0.3) {
        gx = gx6; gw = gw6; ng = 3;
    } else if (ar < 0.75) {
        gx = gx12; gw = gw12; ng = 6;
    } else {
        gx = gx20; gw = gw20; ng = 10;
    }

    double hk = h * k;
    double bvn = 0.0;
    if (ar < 0.925) {
        if (ar > 0.0) {
            const double hs = (h * h + k * k) / 2.0;
            const double asr = std::asin(r);
            for (int i = 0; i < ng; ++i) {
                for (int is = -1; is <= 1; is += 2) {
                    const double sn = std::sin(asr * (is * gx[i] + 1.0) / 2.0);
                    bvn += gw[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
                }
            }
            bvn = bvn * asr / (2.0 * two_pi);
        }
        bvn += norm_cdf(-h) * norm_cdf(-k);
    } else {
        if (r < 0.0) {
            k = -k;
            hk = -hk;
        }
        if (ar < 1.0) {
            const double as = (1.0 - r) * (1.0 + r);
            double a = std::sqrt(as);
            const double bs = (h - k) * (h - k);
            const double c = (4.0 - hk) / 8.0;
            const double d = (12.0 - hk) / 16.0;
            double asr = -(bs / as + hk) / 2.0;
            if (asr > -100.0)
                bvn = a * std::exp(asr) *
                      (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
            if (-hk < 100.0) {
                const double b = std::sqrt(bs);
                bvn -= std::exp(-hk / 2.0) * std::sqrt(two_pi) * norm_cdf(-b / a) * b *
                       (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
            }
            a /= 2.0;
            for (int i = 0; i < ng; ++i) {
                for (int is = -1; is <= 1; is += 2) {
                    const double x = a * (is * gx[i] + 1.0);
                    const double xs = x * x;
                    const double rs = std::sqrt(1.0 - xs);
                    asr = -(bs / xs + hk) / 2.0;
                    if (asr > -100.0) {
                        bvn += a * gw[i] * std::exp(asr) *
                               (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
                                (1.0 + c * xs * (1.0 + d * xs)));
                    }
                }
            }
            bvn = -bvn / two_pi;
        }
        if (r > 0.0) {
            bvn += norm_cdf(-std::max(h, k));
        } else {
            bvn = -bvn;
            if (k > h) bvn += norm_cdf(k) - norm_cdf(h);
        }
    }
    return std::clamp(bvn, 0.0, 1.0);
}

double bvn_cdf(double x, double y, double r) {
    return bvn_upper(-x, -y, r);
}

}  // namespace mvh
