#include "mvh/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mvh {

namespace {

// Newton on P_n with the usual cosine initial guesses.
QuadRule make_legendre(int n) {
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[n - 1 - i] = r.w[i];
    }
    return r;
}

// Newton on Hermite functions (normalized recurrence keeps magnitudes sane).
QuadRule make_hermite(int n) {
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    const double pim4 = 0.75112554446494248286;  // pi^{-1/4}
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(n, 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * r.x[n - 1];
        else if (i == 3)
            z = 1.91 * z - 0.91 * r.x[n - 2];
        else
            z = 2.0 * z - r.x[n - i + 1];
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(double(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-14) break;
        }
        r.x[n - 1 - i] = z;   // positive roots descend into the upper half
        r.x[i] = -z;
        r.w[i] = 2.0 / (pp * pp);
        r.w[n - 1 - i] = r.w[i];
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

std::mutex cache_mutex;
std::map<int, QuadRule> legendre_cache;
std::map<int, QuadRule> hermite_cache;

const QuadRule& cached(std::map<int, QuadRule>& cache, int n, QuadRule (*make)(int)) {
    if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make(n)).first;
    return it->second;
}

}  // namespace

const QuadRule& gauss_legendre(int n) { return cached(legendre_cache, n, make_legendre); }
const QuadRule& gauss_hermite(int n) { return cached(hermite_cache, n, make_hermite); }

}  // namespace mvh
