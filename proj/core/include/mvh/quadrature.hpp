#pragma once

#include <vector>

namespace mvh {

struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Gauss-Legendre nodes/weights on [-1, 1]; cached per order, thread-safe.
const QuadRule& gauss_legendre(int n);

// Gauss-Hermite nodes/weights for weight exp(-x^2); cached per order.
// For Z ~ N(m, s^2): E[f(Z)] = pi^{-1/2} * sum_i w_i f(m + sqrt(2) s x_i).
const QuadRule& gauss_hermite(int n);

}  // namespace mvh
