#include "sno/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace sno::kernels {

namespace {

Backend detect_from_env() {
    const char* env = std::getenv("SNO_KERNEL_BACKEND");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) {
            return Backend::Scalar;
        }
        if (std::strcmp(env, "avx2") == 0 && avx2_available()) {
            return Backend::Avx2;
        }
    }
    return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& backend_slot() {
    static std::atomic<Backend> slot{detect_from_env()};
    return slot;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Backend active_backend() {
    return backend_slot().load(std::memory_order_relaxed);
}

bool force_backend(Backend backend) {
    if (backend == Backend::Auto) {
        backend = avx2_available() ? Backend::Avx2 : Backend::Scalar;
    }
    if (backend == Backend::Avx2 && !avx2_available()) {
        return false;
    }
    backend_slot().store(backend, std::memory_order_relaxed);
    return true;
}

#if defined(__x86_64__)
#define SNO_DISPATCH(call) \
    return active_backend() == Backend::Avx2 ? avx2::call : scalar::call
#else
#define SNO_DISPATCH(call) return scalar::call
#endif

double sum_squares(const double* x, std::size_t n) {
    SNO_DISPATCH(sum_squares(x, n));
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    SNO_DISPATCH(squared_distance(a, b, n));
}

double abs_deviation_sum(const double* x, std::size_t n, double center) {
    SNO_DISPATCH(abs_deviation_sum(x, n, center));
}

double rosenbrock_chain(const double* x, std::size_t n) {
    SNO_DISPATCH(rosenbrock_chain(x, n));
}

#undef SNO_DISPATCH

}  // namespace sno::kernels
