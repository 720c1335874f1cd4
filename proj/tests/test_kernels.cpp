#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dtn/kernels.hpp"

using namespace dtn;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                               double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

}  // namespace

TEST_CASE("scalar reference values on tiny fixed inputs") {
    const auto& vt = kernels::table(kernels::Backend::scalar);
    double a[3] = {1.0, 2.0, 3.0};
    double b[3] = {4.0, -5.0, 6.0};
    double w[3] = {0.5, 0.5, 1.0};
    CHECK(vt.dot(a, b, 3) == doctest::Approx(12.0).epsilon(1e-15));
    CHECK(vt.wdot(a, b, w, 3) == doctest::Approx(2.0 - 5.0 + 18.0).epsilon(1e-15));
    CHECK(vt.sum(a, 3) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(vt.max_abs(b, 3) == doctest::Approx(6.0).epsilon(1e-15));

    double out[3];
    vt.hadamard(out, a, b, 3);
    CHECK(out[1] == doctest::Approx(-10.0));
    double y[3] = {1.0, 1.0, 1.0};
    vt.axpy(y, 2.0, a, 3);
    CHECK(y[2] == doctest::Approx(7.0));
    vt.scale(y, -1.0, 3);
    CHECK(y[0] == doctest::Approx(-3.0));
}

TEST_CASE("every compiled backend matches the scalar reference") {
    std::mt19937_64 rng(20240817);
    const auto& ref = kernels::table(kernels::Backend::scalar);

    for (auto b : {kernels::Backend::avx2, kernels::Backend::neon}) {
        if (!kernels::backend_compiled(b)) continue;
        const auto& vt = kernels::table(b);
        // Sizes straddle the vector width and include remainder tails.
        for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 33u, 257u, 4096u}) {
            auto x = random_vec(rng, n), y = random_vec(rng, n), w = random_vec(rng, n, 0.0, 2.0);

            // Reductions may reassociate; allow roundoff-scale drift only.
            double tol = 1e-13 * (static_cast<double>(n) + 1.0);
            CHECK(vt.dot(x.data(), y.data(), n) ==
                  doctest::Approx(ref.dot(x.data(), y.data(), n)).epsilon(tol));
            CHECK(vt.wdot(x.data(), y.data(), w.data(), n) ==
                  doctest::Approx(ref.wdot(x.data(), y.data(), w.data(), n)).epsilon(tol));
            CHECK(vt.sum(x.data(), n) == doctest::Approx(ref.sum(x.data(), n)).epsilon(tol));
            // max_abs and hadamard/scale are exact: no reassociation happens.
            CHECK(vt.max_abs(x.data(), n) == ref.max_abs(x.data(), n));

            std::vector<double> o1(n), o2(n);
            ref.hadamard(o1.data(), x.data(), y.data(), n);
            vt.hadamard(o2.data(), x.data(), y.data(), n);
            CHECK(o1 == o2);

            auto y1 = y, y2 = y;
            ref.axpy(y1.data(), 0.37, x.data(), n);
            vt.axpy(y2.data(), 0.37, x.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));

            ref.scale(y1.data(), -2.5, n);
            vt.scale(y2.data(), -2.5, n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));
        }
    }
}

TEST_CASE("dispatch reports a backend that is actually compiled") {
    auto b = kernels::active_backend();
    CHECK(kernels::backend_compiled(b));
    CHECK(kernels::backend_name() != nullptr);
    // The dispatched entry points agree with the table for that backend.
    double a[5] = {1, 2, 3, 4, 5}, c[5] = {5, 4, 3, 2, 1};
    CHECK(kernels::dot(a, c, 5) == kernels::table(b).dot(a, c, 5));
}
