#include "sno/kernels.hpp"

#include <cmath>

namespace sno::kernels::scalar {

double sum_squares(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += x[i] * x[i];
    }
    return acc;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double abs_deviation_sum(const double* x, std::size_t n, double center) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += std::fabs(x[i] - center);
    }
    return acc;
}

double rosenbrock_chain(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double t = x[i + 1] - x[i] * x[i];
        const double u = 1.0 - x[i];
        acc += 100.0 * t * t + u * u;
    }
    return acc;
}

}  // namespace sno::kernels::scalar
