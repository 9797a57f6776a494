#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sno/kernels.hpp"

using namespace sno;

namespace {

bool close_rel(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

TEST_CASE("kernel reference values") {
    const std::vector<double> v{3.0, 4.0};
    CHECK(kernels::scalar::sum_squares(v.data(), v.size()) == 25.0);

    const std::vector<double> a{1.0, 2.0, 3.0};
    const std::vector<double> b{4.0, 6.0, 3.0};
    CHECK(kernels::scalar::squared_distance(a.data(), b.data(), 3) == 25.0);

    CHECK(kernels::scalar::abs_deviation_sum(a.data(), 3, 2.0) == 2.0);

    const std::vector<double> ones{1.0, 1.0, 1.0, 1.0, 1.0};
    CHECK(kernels::scalar::rosenbrock_chain(ones.data(), ones.size()) == 0.0);
    const std::vector<double> chain{0.0, 0.0};
    // 100*(0-0)^2 + (1-0)^2
    CHECK(kernels::scalar::rosenbrock_chain(chain.data(), 2) == 1.0);
    CHECK(kernels::scalar::rosenbrock_chain(chain.data(), 1) == 0.0);
    CHECK(kernels::scalar::rosenbrock_chain(chain.data(), 0) == 0.0);
}

TEST_CASE("dispatched kernels match the scalar reference") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> value(-100.0, 100.0);
    const std::size_t sizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 100, 257};

    INFO("active backend: ", static_cast<int>(kernels::active_backend()));
    for (const std::size_t n : sizes) {
        std::vector<double> x(n);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = value(rng);
            y[i] = value(rng);
        }
        CHECK(close_rel(kernels::sum_squares(x.data(), n),
                        kernels::scalar::sum_squares(x.data(), n), 1e-12));
        CHECK(close_rel(kernels::squared_distance(x.data(), y.data(), n),
                        kernels::scalar::squared_distance(x.data(), y.data(), n), 1e-12));
        CHECK(close_rel(kernels::abs_deviation_sum(x.data(), n, 1.5),
                        kernels::scalar::abs_deviation_sum(x.data(), n, 1.5), 1e-12));
        CHECK(close_rel(kernels::rosenbrock_chain(x.data(), n),
                        kernels::scalar::rosenbrock_chain(x.data(), n), 1e-12));
    }
}

#if defined(__x86_64__)
TEST_CASE("avx2 variant matches scalar when available") {
    if (!kernels::avx2_available()) {
        return;
    }
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> value(-50.0, 50.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng() % 40);
        std::vector<double> x(n);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = value(rng);
            y[i] = value(rng);
        }
        CHECK(close_rel(kernels::avx2::sum_squares(x.data(), n),
                        kernels::scalar::sum_squares(x.data(), n), 1e-12));
        CHECK(close_rel(kernels::avx2::squared_distance(x.data(), y.data(), n),
                        kernels::scalar::squared_distance(x.data(), y.data(), n), 1e-12));
        CHECK(close_rel(kernels::avx2::abs_deviation_sum(x.data(), n, -2.5),
                        kernels::scalar::abs_deviation_sum(x.data(), n, -2.5), 1e-12));
        CHECK(close_rel(kernels::avx2::rosenbrock_chain(x.data(), n),
                        kernels::scalar::rosenbrock_chain(x.data(), n), 1e-12));
    }
}
#endif

TEST_CASE("backend forcing") {
    const kernels::Backend before = kernels::active_backend();
    CHECK(kernels::force_backend(kernels::Backend::Scalar));
    CHECK(kernels::active_backend() == kernels::Backend::Scalar);
    CHECK(kernels::force_backend(kernels::Backend::Auto));
    CHECK(kernels::active_backend() != kernels::Backend::Auto);
    kernels::force_backend(before);
}
