#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dtn/error.hpp"
#include "dtn/semigroup.hpp"

using namespace dtn;

namespace {

DtNSpectrum circle_spec(int N, double R = 1.0) {
    return spectrum(assemble_dtn(make_grid(discretize_boundary(Circle{R}, N)),
                                 identity_conductivity()));
}

DtNSpectrum sphere_spec(int L, double R = 1.0) {
    return spectrum(assemble_dtn(make_grid(discretize_boundary(Sphere{R}, L)),
                                 identity_conductivity()));
}

}  // namespace

TEST_CASE("evolve damps each mode by e^{-t lambda}") {
    auto spec = circle_spec(32);
    // basis column 5 is the cos(3 theta) mode
    auto f = BoundaryFunction::from_coeffs(spec.grid,
                                           Eigen::VectorXd::Unit(spec.grid->basis_size(), 5));
    auto uf = evolve(spec, 0.2, f);
    double want = std::exp(-0.6);  // e^{-t k}, k = 3
    CHECK(uf.coeffs[5] == doctest::Approx(want).epsilon(1e-12));
    CHECK((uf.coeffs - want * f.coeffs).cwiseAbs().maxCoeff() < 1e-12);

    // t = 0 is the identity, bitwise
    auto u0 = evolve(spec, 0.0, f);
    CHECK(u0.coeffs == f.coeffs);
    CHECK_THROWS_AS(evolve(spec, -0.1, f), Error);

    // sphere mode: Y_{2,1} decays with e^{-2t}
    auto sp = sphere_spec(6);
    auto y = BoundaryFunction::from_coeffs(sp.grid,
                                           Eigen::VectorXd::Unit(sp.grid->basis_size(), 7));
    auto uy = evolve(sp, 0.5, y);
    CHECK((uy.coeffs - std::exp(-1.0) * y.coeffs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("semigroup law, contraction, Markov property") {
    auto spec = sphere_spec(8);
    auto f = BoundaryFunction::random_bandlimited(spec.grid, 8, 1.0, 31);

    auto two_step = evolve(spec, 0.3, evolve(spec, 0.45, f));
    auto one_step = evolve(spec, 0.75, f);
    CHECK(l2_norm(BoundaryFunction::from_coeffs(
              spec.grid, (two_step.coeffs - one_step.coeffs).eval())) <= 1e-10 * l2_norm(f));

    for (double t : {0.05, 0.4, 2.0}) CHECK(l2_norm(evolve(spec, t, f)) <= l2_norm(f) * (1 + 1e-13));

    auto one = BoundaryFunction::constant(spec.grid, 1.0);
    for (double t : {0.1, 1.0, 5.0}) {
        auto ut = evolve(spec, t, one);
        CHECK((ut.values - one.values).cwiseAbs().maxCoeff() < 1e-8);
    }

    Eigen::MatrixXd u = semigroup_matrix(spec, 0.7);
    CHECK((u - u.transpose()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(u.operatorNorm() <= 1.0 + 1e-12);
    CHECK(semigroup_matrix(spec, 0.0) == Eigen::MatrixXd::Identity(spec.size(), spec.size()));
}

TEST_CASE("trace norm against geometric series closed forms") {
    double e1 = std::exp(-1.0);

    auto cn = trace_norm(circle_spec(256), 1.0);
    double circle_closed = 1.0 + 2.0 * e1 / (1.0 - e1);
    CHECK(cn.value == doctest::Approx(circle_closed).epsilon(1e-12));
    CHECK(cn.truncation == 255);

    auto sn = trace_norm(sphere_spec(16), 1.0);
    double sphere_closed = 2.0 * e1 / ((1.0 - e1) * (1.0 - e1)) + 1.0 / (1.0 - e1);
    // the resolved sum misses sum_{l>16} (2l+1) e^{-l} ~ 2.4e-6
    CHECK(sn.value == doctest::Approx(sphere_closed).epsilon(1e-5));
    CHECK(std::fabs(sn.value - sphere_closed) > 1e-7);  // truncation is real

    // monotone decreasing in t
    auto spec = sphere_spec(12);
    double prev = trace_norm(spec, 0.5).value;
    for (double t : {1.0, 2.0, 4.0}) {
        double cur = trace_norm(spec, t).value;
        CHECK(cur < prev);
        prev = cur;
    }

    CHECK_THROWS_AS(trace_norm(spec, 0.0), Error);
    CHECK_THROWS_AS(trace_norm(spec, -1.0), Error);
}

TEST_CASE("Weyl tail estimate is small once the spectrum resolves the time scale") {
    // circle: tail ~ (C/t) e^{-t n / C} with C ~ 2
    auto cn = trace_norm(circle_spec(768), 0.1);
    CHECK(cn.tail_bound < 1e-6);
    CHECK(cn.tail_bound > 0.0);

    auto sn = trace_norm(sphere_spec(32), 1.0);
    CHECK(sn.tail_bound < 1e-6);

    // under-resolved: the estimate honestly reports a large remainder
    auto coarse = trace_norm(sphere_spec(16), 0.1);
    CHECK(coarse.tail_bound > 1.0);
}

TEST_CASE("Lax contraction form coincides with spectral calculus") {
    for (bool ball : {false, true}) {
        auto spec = ball ? sphere_spec(8) : circle_spec(48);
        for (int seed : {1, 2, 3, 4, 5}) {
            auto f = BoundaryFunction::random_bandlimited(spec.grid, 6, 1.0, seed);
            for (double t : {0.1, 0.5, 1.0}) {
                auto lax = lax_apply(f, t);
                auto spectral = evolve(spec, t, f);
                CHECK((lax.coeffs - spectral.coeffs).cwiseAbs().maxCoeff() < 1e-11);
            }
        }
    }

    // radius enters through e^{-t/R}
    auto spec2 = circle_spec(32, 2.0);
    auto m = BoundaryFunction::from_coeffs(spec2.grid,
                                           Eigen::VectorXd::Unit(spec2.grid->basis_size(), 3));
    auto lm = lax_apply(m, 0.4);  // mode k = 2, lambda = 1: e^{-0.4}
    CHECK(lm.coeffs[3] == doctest::Approx(std::exp(-0.4)).epsilon(1e-12));

    auto star = make_grid(discretize_boundary(StarShaped2D{{1.0, 0.1}}, 16));
    CHECK_THROWS_AS(lax_apply(BoundaryFunction::constant(star, 1.0), 0.5), Error);
    CHECK_THROWS_AS(lax_apply(m, -0.2), Error);
}

TEST_CASE("generator recovery: (f - U(t) f)/t tends to Lambda f at first order") {
    auto grid = make_grid(discretize_boundary(Sphere{1.0}, 8));
    auto op = assemble_dtn(grid, identity_conductivity());
    auto spec = spectrum(op);
    auto f = BoundaryFunction::random_bandlimited(grid, 6, 2.0, 11);
    auto lf = op.apply(f);

    auto err = [&](double t) {
        auto ut = evolve(spec, t, f);
        return (((f.coeffs - ut.coeffs) / t) - lf.coeffs).norm();
    };
    double e1 = err(2e-3), e2 = err(1e-3);
    CHECK(e1 / e2 > 1.6);
    CHECK(e1 / e2 < 2.6);
    CHECK(e2 < 1e-2 * l2_norm(lf));
}
