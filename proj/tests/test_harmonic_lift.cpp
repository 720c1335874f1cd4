#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dtn/error.hpp"
#include "dtn/harmonic_lift.hpp"

using namespace dtn;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("spectral lift on the disk follows the radial power law") {
    auto grid = make_grid(discretize_boundary(Circle{1.0}, 32));
    auto f = BoundaryFunction::from_callable(
        grid, [](const Vec3& x) { return x.x() * x.x() - x.y() * x.y(); });  // cos 2theta
    auto v = lift(f, identity_conductivity());
    CHECK(v.backend() == HarmonicField::Backend::spectral);

    // v(r, theta) = r^2 cos(2 theta)
    for (auto [r, th] : {std::pair{0.5, 0.3}, {0.9, 2.0}, {0.05, -1.2}}) {
        Vec3 x{r * std::cos(th), r * std::sin(th), 0.0};
        CHECK(v.value(x) == doctest::Approx(r * r * std::cos(2.0 * th)).epsilon(1e-12));
    }
    CHECK(v.value(Vec3::Zero()) == doctest::Approx(0.0).epsilon(1e-13));

    // gradient of r^2 cos(2 theta) = (2x, -2y)
    Vec3 g = v.gradient(Vec3{0.3, 0.4, 0.0});
    CHECK(g.x() == doctest::Approx(2.0 * 0.3).epsilon(1e-11));
    CHECK(g.y() == doctest::Approx(-2.0 * 0.4).epsilon(1e-11));

    // trace returns the data
    auto tr = v.trace();
    CHECK((tr.values - f.values).cwiseAbs().maxCoeff() < 1e-12);

    // conormal of cos(k theta) on the unit circle is k cos(k theta)
    CHECK(v.conormal(identity_conductivity(), 0) == doctest::Approx(2.0).epsilon(1e-12));
    // and scales with a for gamma = a I
    CHECK(v.conormal(scalar_conductivity(3.0), 0) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("spectral lift on the ball: single harmonic mode") {
    int L = 8;
    auto grid = make_grid(discretize_boundary(Sphere{1.0}, L));
    int p = 3 * 4 + 2;  // (l, m) = (3, 2)
    auto f = BoundaryFunction::from_coeffs(grid, Eigen::VectorXd::Unit(grid->basis_size(), p));
    auto v = lift(f, identity_conductivity());

    // v(r omega) = r^l f(omega); compare against the boundary value at a node
    for (std::size_t j : {std::size_t{0}, std::size_t{40}, std::size_t{100}}) {
        double r = 0.5;
        CHECK(v.value(r * grid->nodes[j]) ==
              doctest::Approx(std::pow(r, 3) * f.values[j]).epsilon(1e-11));
    }
    // conormal picks up l/R
    CHECK(v.conormal(identity_conductivity(), 17) ==
          doctest::Approx(3.0 * f.values[17]).epsilon(1e-11));

    // affine data z: exact harmonic already, gradient is the unit z vector
    auto fz = BoundaryFunction::from_callable(grid, [](const Vec3& x) { return x.z(); });
    auto vz = lift(fz, identity_conductivity());
    CHECK(vz.value(Vec3{0.2, 0.1, 0.4}) == doctest::Approx(0.4).epsilon(1e-11));
    Vec3 gz = vz.gradient(Vec3{0.2, 0.1, 0.4});
    CHECK(gz.x() == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(gz.z() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("constant data lifts to the constant function on every backend") {
    for (auto domain : std::vector<Domain>{Circle{1.3}, Sphere{2.0}, Annulus{1.0, 2.0},
                                           StarShaped2D{{1.0, 0.2}}}) {
        auto grid = make_grid(discretize_boundary(domain, std::get_if<Sphere>(&domain) ? 6 : 24));
        auto one = BoundaryFunction::constant(grid, 1.0);
        auto v = lift(one, identity_conductivity());
        for (double frac : {0.0, 0.4, 0.95}) {
            Vec3 x = grid->nodes[3] * (std::get_if<Annulus>(&domain)
                                           ? 1.0 + frac  // annulus: walk outward instead
                                           : frac);
            if (std::get_if<Annulus>(&domain) && 1.0 + frac > 2.0) continue;
            double want = 1.0;
            if (auto* a = std::get_if<Annulus>(&domain)) {
                double r = (1.0 + frac) * a->inner_radius;
                want = std::log(a->outer_radius / r) / std::log(a->outer_radius / a->inner_radius);
            }
            CHECK(v.value(x) == doctest::Approx(want).epsilon(1e-10));
        }
    }
}

TEST_CASE("FD lift matches separation of variables on the disk") {
    auto grid = make_grid(discretize_boundary(Circle{1.0}, 32));
    auto f = BoundaryFunction::from_callable(
        grid, [](const Vec3& x) { return std::cos(3.0 * std::atan2(x.y(), x.x())); });

    LiftOptions coarse;
    coarse.force_fd = true;
    coarse.fd_factor = 4;
    LiftOptions fine = coarse;
    fine.fd_factor = 8;

    auto vc = lift(f, identity_conductivity(), coarse);
    auto vf = lift(f, identity_conductivity(), fine);
    CHECK(vc.backend() == HarmonicField::Backend::fd);
    CHECK(vc.residual() < 1e-10);

    // oracle: v = r^3 cos(3 theta)
    double ec = 0.0, ef = 0.0;
    for (auto [r, th] : {std::pair{0.31, 0.7}, {0.55, 2.3}, {0.72, 4.0}, {0.45, 5.9}}) {
        Vec3 x{r * std::cos(th), r * std::sin(th), 0.0};
        double exact = std::pow(r, 3) * std::cos(3.0 * th);
        ec = std::max(ec, std::fabs(vc.value(x) - exact));
        ef = std::max(ef, std::fabs(vf.value(x) - exact));
    }
    CHECK(ef < 2e-4);
    // second-order convergence: halving h divides the error by about 4
    CHECK(ec / ef > 2.5);
    CHECK(ec / ef < 6.5);

    // FD gradient against the analytic one, at a point away from center/boundary
    Vec3 x{0.4, 0.25, 0.0};
    double r2 = x.head<2>().squaredNorm();
    // grad of Re((x+iy)^3): (3(x^2-y^2), -6xy) for cos; here d/dx r^3 cos3t = 3(x^2-y^2)
    Vec3 gf = vf.gradient(x);
    CHECK(gf.x() == doctest::Approx(3.0 * (x.x() * x.x() - x.y() * x.y())).epsilon(2e-3));
    CHECK(gf.y() == doctest::Approx(-6.0 * x.x() * x.y()).epsilon(2e-3));
    (void)r2;
}

TEST_CASE("FD lift: trace reproduces the boundary data") {
    auto grid = make_grid(discretize_boundary(StarShaped2D{{1.0, 0.15, 0.0, 0.05}}, 24));
    auto f = BoundaryFunction::random_bandlimited(grid, 5, 1.5, 2024);
    auto v = lift(f, anisotropic_conductivity(0.3), {.fd_factor = 4});
    auto tr = v.trace();
    CHECK((tr.values - f.values).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((tr.coeffs - f.coeffs).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("FD lift is linear in the data") {
    auto grid = make_grid(discretize_boundary(Circle{1.0}, 24));
    auto gam = radial_scalar_conductivity(1.0, 0.5);
    LiftOptions opts;
    opts.fd_factor = 4;
    auto f = BoundaryFunction::random_bandlimited(grid, 4, 1.0, 7);
    auto g = BoundaryFunction::random_bandlimited(grid, 4, 1.0, 8);
    auto fg = BoundaryFunction::from_coeffs(grid, (2.0 * f.coeffs - 0.5 * g.coeffs).eval());

    auto vf = lift(f, gam, opts), vg = lift(g, gam, opts), vfg = lift(fg, gam, opts);
    for (auto [r, th] : {std::pair{0.2, 1.0}, {0.6, 3.3}, {0.85, 5.1}}) {
        Vec3 x{r * std::cos(th), r * std::sin(th), 0.0};
        CHECK(vfg.value(x) ==
              doctest::Approx(2.0 * vf.value(x) - 0.5 * vg.value(x)).epsilon(1e-11));
    }
}

TEST_CASE("maximum principle holds inside (FD path)") {
    auto grid = make_grid(discretize_boundary(StarShaped2D{{1.0, 0.2}}, 32));
    auto f = BoundaryFunction::random_bandlimited(grid, 4, 2.0, 99);
    auto v = lift(f, identity_conductivity(), {.fd_factor = 8});
    double lo = f.values.minCoeff(), hi = f.values.maxCoeff();

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> us(0.0, 0.94), ut(0.0, 2.0 * kPi);
    for (int rep = 0; rep < 200; ++rep) {
        double th = ut(rng), s = us(rng);
        double rho = StarShaped2D{{1.0, 0.2}}.rho(th);
        Vec3 x{s * rho * std::cos(th), s * rho * std::sin(th), 0.0};
        double val = v.value(x);
        CHECK(val >= lo - 1e-8);
        CHECK(val <= hi + 1e-8);
    }
}

TEST_CASE("annulus lift: explicit radial profiles") {
    auto grid = make_grid(discretize_boundary(Annulus{1.0, 2.0}, 32));

    // mode 0: log profile, value 1/2 at r = sqrt(2)
    auto one = BoundaryFunction::constant(grid, 1.0);
    auto v0 = lift(one, identity_conductivity());
    CHECK(v0.backend() == HarmonicField::Backend::annulus);
    CHECK(v0.value(Vec3{std::sqrt(2.0), 0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(v0.value(Vec3{2.0, 0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v0.value(Vec3{0.0, 1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));

    // mode k: sinh(k ln(R0/r)) / sinh(k ln(R0/R))
    auto fk = BoundaryFunction::from_callable(
        grid, [](const Vec3& x) { return std::cos(4.0 * std::atan2(x.y(), x.x())); });
    auto vk = lift(fk, identity_conductivity());
    double r = 1.5, th = 0.6;
    double want = std::sinh(4.0 * std::log(2.0 / r)) / std::sinh(4.0 * std::log(2.0)) *
                  std::cos(4.0 * th);
    CHECK(vk.value(Vec3{r * std::cos(th), r * std::sin(th), 0.0}) ==
          doctest::Approx(want).epsilon(1e-12));

    // conormal at the inner circle: a * u_k'(R) f, u_k'(R) = -(k/R) coth(k ln(R0/R))
    double lam4 = 4.0 * std::cosh(4.0 * std::log(2.0)) / std::sinh(4.0 * std::log(2.0));
    CHECK(vk.conormal(identity_conductivity(), 0) == doctest::Approx(-lam4).epsilon(1e-12));
}

TEST_CASE("Dirichlet energy quadrature agrees with closed forms") {
    // disk, f = cos 2theta: energy = 2 pi (the DtN quadratic form lambda_2 |f|^2)
    auto grid = make_grid(discretize_boundary(Circle{1.0}, 32));
    auto f = BoundaryFunction::from_callable(
        grid, [](const Vec3& x) { return x.x() * x.x() - x.y() * x.y(); });
    auto v = lift(f, identity_conductivity());
    CHECK(dirichlet_energy(v, identity_conductivity()) ==
          doctest::Approx(2.0 * kPi).epsilon(1e-4));

    // annulus, f = 1: energy = 2 pi / ln 2
    auto agrid = make_grid(discretize_boundary(Annulus{1.0, 2.0}, 16));
    auto one = BoundaryFunction::constant(agrid, 1.0);
    auto va = lift(one, identity_conductivity());
    CHECK(dirichlet_energy(va, identity_conductivity()) ==
          doctest::Approx(2.0 * kPi / std::log(2.0)).epsilon(1e-4));

    // ball, f = z: v = z, |grad|^2 = 1, energy = volume = 4 pi / 3
    auto sgrid = make_grid(discretize_boundary(Sphere{1.0}, 4));
    auto fz = BoundaryFunction::from_callable(sgrid, [](const Vec3& x) { return x.z(); });
    auto vz = lift(fz, identity_conductivity());
    CHECK(dirichlet_energy(vz, identity_conductivity(), 60, 24) ==
          doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-3));
}

TEST_CASE("unsupported configurations are rejected") {
    auto sgrid = make_grid(discretize_boundary(Sphere{1.0}, 4));
    auto fz = BoundaryFunction::from_callable(sgrid, [](const Vec3& x) { return x.z(); });
    CHECK_THROWS_AS(lift(fz, anisotropic_conductivity(0.3)), Error);

    auto agrid = make_grid(discretize_boundary(Annulus{1.0, 2.0}, 16));
    auto one = BoundaryFunction::constant(agrid, 1.0);
    CHECK_THROWS_AS(lift(one, radial_scalar_conductivity(1.0, 0.1)), Error);

    // evaluation outside the closure
    auto grid = make_grid(discretize_boundary(Circle{1.0}, 16));
    auto v = lift(BoundaryFunction::constant(grid, 1.0), identity_conductivity());
    CHECK_THROWS_AS(v.value(Vec3{1.5, 0.0, 0.0}), Error);
    auto va = lift(one, identity_conductivity());
    CHECK_THROWS_AS(va.value(Vec3{0.5, 0.0, 0.0}), Error);  // inside the hole
    CHECK_THROWS_AS(va.value(Vec3{2.5, 0.0, 0.0}), Error);
}

TEST_CASE("lifted basis shares one factorization and matches single lifts") {
    auto grid = make_grid(discretize_boundary(Circle{1.0}, 16));
    auto gam = anisotropic_conductivity(0.3);
    LiftOptions opts;
    opts.fd_factor = 4;
    LiftedBasis basis(grid, gam, opts);
    CHECK_FALSE(basis.spectral());
    CHECK(basis.size() == grid->basis_size());

    int k = 5;
    auto fk = BoundaryFunction::from_coeffs(grid, Eigen::VectorXd::Unit(grid->basis_size(), k));
    auto direct = lift(fk, gam, opts);
    for (auto [r, th] : {std::pair{0.3, 0.2}, {0.7, 4.4}}) {
        Vec3 x{r * std::cos(th), r * std::sin(th), 0.0};
        CHECK(basis.field(k).value(x) == doctest::Approx(direct.value(x)).epsilon(1e-13));
    }

    LiftedBasis sb(make_grid(discretize_boundary(Sphere{1.0}, 4)), scalar_conductivity(2.0));
    CHECK(sb.spectral());
    CHECK(sb.size() == 25);
}
