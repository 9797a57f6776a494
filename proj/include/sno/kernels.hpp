#pragma once

#include <cstddef>
#include <span>

// Arithmetic inner loops shared by the objective functions, the nearest-point
// scans, and the diversity metric. Each kernel has a scalar reference
// implementation and (on x86-64) an AVX2 variant; the active variant is picked
// at runtime from CPU features, or forced via force_backend() /
// SNO_KERNEL_BACKEND=scalar|avx2|auto. Variants may differ from the reference
// by summation order only.

namespace sno::kernels {

enum class Backend { Auto, Scalar, Avx2 };

bool avx2_available();

/// Backend that calls currently dispatch to (never Auto).
Backend active_backend();

/// Returns false (and changes nothing) if the requested backend is
/// unavailable on this CPU.
bool force_backend(Backend backend);

double sum_squares(const double* x, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
double abs_deviation_sum(const double* x, std::size_t n, double center);
double rosenbrock_chain(const double* x, std::size_t n);

namespace scalar {
double sum_squares(const double* x, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
double abs_deviation_sum(const double* x, std::size_t n, double center);
double rosenbrock_chain(const double* x, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__)
namespace avx2 {
double sum_squares(const double* x, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
double abs_deviation_sum(const double* x, std::size_t n, double center);
double rosenbrock_chain(const double* x, std::size_t n);
}  // namespace avx2
#endif

inline double sum_squares(std::span<const double> x) {
    return sum_squares(x.data(), x.size());
}
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    return squared_distance(a.data(), b.data(), a.size());
}
inline double abs_deviation_sum(std::span<const double> x, double center) {
    return abs_deviation_sum(x.data(), x.size(), center);
}
inline double rosenbrock_chain(std::span<const double> x) {
    return rosenbrock_chain(x.data(), x.size());
}

}  // namespace sno::kernels
