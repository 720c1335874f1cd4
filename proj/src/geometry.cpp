#include "dtn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dtn/error.hpp"

namespace dtn {

namespace {
constexpr double kPi = std::numbers::pi;
}

// ---- star-shaped radius -----------------------------------------------------

double StarShaped2D::rho(double theta) const {
    if (rho_coeffs.empty()) return 0.0;
    double r = rho_coeffs[0];
    for (std::size_t k = 1; 2 * k - 1 < rho_coeffs.size(); ++k) {
        r += rho_coeffs[2 * k - 1] * std::cos(k * theta);
        if (2 * k < rho_coeffs.size()) r += rho_coeffs[2 * k] * std::sin(k * theta);
    }
    return r;
}

double StarShaped2D::drho(double theta) const {
    double r = 0.0;
    for (std::size_t k = 1; 2 * k - 1 < rho_coeffs.size(); ++k) {
        r -= k * rho_coeffs[2 * k - 1] * std::sin(k * theta);
        if (2 * k < rho_coeffs.size()) r += k * rho_coeffs[2 * k] * std::cos(k * theta);
    }
    return r;
}

double StarShaped2D::ddrho(double theta) const {
    double r = 0.0;
    for (std::size_t k = 1; 2 * k - 1 < rho_coeffs.size(); ++k) {
        double k2 = static_cast<double>(k) * k;
        r -= k2 * rho_coeffs[2 * k - 1] * std::cos(k * theta);
        if (2 * k < rho_coeffs.size()) r -= k2 * rho_coeffs[2 * k] * std::sin(k * theta);
    }
    return r;
}

int domain_dim(const Domain& d) {
    return std::holds_alternative<Sphere>(d) ? 3 : 2;
}

std::string domain_tag(const Domain& d) {
    if (auto* c = std::get_if<Circle>(&d)) return "circle(R=" + std::to_string(c->radius) + ")";
    if (auto* s = std::get_if<Sphere>(&d)) return "sphere(R=" + std::to_string(s->radius) + ")";
    if (std::get_if<StarShaped2D>(&d)) return "star2d";
    auto* a = std::get_if<Annulus>(&d);
    return "annulus(R=" + std::to_string(a->inner_radius) +
           ",R0=" + std::to_string(a->outer_radius) + ")";
}

// ---- Gauss-Legendre ---------------------------------------------------------

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw Error(ErrorKind::config, "gauss_legendre: n must be >= 1");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess, then Newton on the recurrence.
        double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = xi;
            for (int l = 2; l <= n; ++l) {
                double p2 = ((2.0 * l - 1.0) * xi * p1 - (l - 1.0) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
            double dx = p1 / dp;
            xi -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        x[i] = -xi;  // ascending order
        x[n - 1 - i] = xi;
        double wi = 2.0 / ((1.0 - xi * xi) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
}

// ---- real spherical harmonics -----------------------------------------------

void real_spherical_harmonics(int L, double theta, double phi, double* out) {
    const double ct = std::cos(theta);
    const double st = std::sin(theta);

    // Fully normalized associated Legendre values P(l,m), packed triangularly.
    auto idx = [](int l, int m) { return l * (l + 1) / 2 + m; };
    std::vector<double> P((L + 1) * (L + 2) / 2, 0.0);
    P[0] = 1.0 / std::sqrt(4.0 * kPi);
    for (int m = 1; m <= L; ++m)
        P[idx(m, m)] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * P[idx(m - 1, m - 1)];
    for (int m = 0; m < L; ++m)
        P[idx(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * ct * P[idx(m, m)];
    for (int m = 0; m <= L; ++m) {
        for (int l = m + 2; l <= L; ++l) {
            double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - m * m));
            double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - m * m) /
                                 (4.0 * static_cast<double>(l - 1) * (l - 1) - 1.0));
            P[idx(l, m)] = a * (ct * P[idx(l - 1, m)] - b * P[idx(l - 2, m)]);
        }
    }

    const double sqrt2 = std::numbers::sqrt2;
    for (int l = 0; l <= L; ++l) {
        out[l * (l + 1)] = P[idx(l, 0)];
        for (int m = 1; m <= l; ++m) {
            double base = sqrt2 * P[idx(l, m)];
            out[l * (l + 1) + m] = base * std::cos(m * phi);
            out[l * (l + 1) - m] = base * std::sin(m * phi);
        }
    }
}

// ---- 2D boundary helpers ----------------------------------------------------

Vec3 boundary_point_2d(const Domain& domain, double theta) {
    double r;
    if (auto* c = std::get_if<Circle>(&domain)) {
        r = c->radius;
    } else if (auto* a = std::get_if<Annulus>(&domain)) {
        r = a->inner_radius;
    } else if (auto* s = std::get_if<StarShaped2D>(&domain)) {
        r = s->rho(theta);
    } else {
        throw Error(ErrorKind::unsupported, "boundary_point_2d: not a 2D domain");
    }
    return {r * std::cos(theta), r * std::sin(theta), 0.0};
}

Vec3 boundary_normal_2d(const Domain& domain, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    if (auto* st = std::get_if<StarShaped2D>(&domain)) {
        double r = st->rho(theta), dr = st->drho(theta);
        Vec3 n{r * c + dr * s, r * s - dr * c, 0.0};
        return n / n.norm();
    }
    return {c, s, 0.0};
}

// ---- discretization ---------------------------------------------------------

namespace {

// Orthonormal Fourier-type basis modulated by 1/sqrt(J): exactly orthonormal
// under the trapezoid arclength weights for any positive J sampled on the
// uniform theta grid.
void fill_2d_basis(BoundaryGrid& g, const std::vector<double>& J) {
    int N = static_cast<int>(g.n_nodes());
    int kmax = (N - 1) / 2;
    int dim = 2 * kmax + 1;
    g.max_degree = kmax;
    g.basis.resize(N, dim);
    g.degrees.assign(dim, 0);
    for (int j = 0; j < N; ++j) {
        double mod = 1.0 / std::sqrt(J[j]);
        double th = g.thetas[j];
        g.basis(j, 0) = mod / std::sqrt(2.0 * kPi);
        for (int k = 1; k <= kmax; ++k) {
            g.basis(j, 2 * k - 1) = mod * std::cos(k * th) / std::sqrt(kPi);
            g.basis(j, 2 * k) = mod * std::sin(k * th) / std::sqrt(kPi);
        }
    }
    for (int k = 1; k <= kmax; ++k) g.degrees[2 * k - 1] = g.degrees[2 * k] = k;
}

BoundaryGrid discretize_circle_like(const Domain& domain, double R, int N) {
    if (N < 4) throw Error(ErrorKind::config, "boundary resolution must be >= 4");
    if (R <= 0.0) throw Error(ErrorKind::invalid_domain, "circle radius must be positive");
    BoundaryGrid g;
    g.domain = domain;
    g.dim = 2;
    g.resolution = N;
    double h = 2.0 * kPi / N;
    g.nodes.resize(N);
    g.normals.resize(N);
    g.tangents.resize(N);
    g.weights.resize(N);
    g.thetas.resize(N);
    std::vector<double> J(N, R);
    for (int j = 0; j < N; ++j) {
        double th = j * h, c = std::cos(th), s = std::sin(th);
        g.thetas[j] = th;
        g.nodes[j] = {R * c, R * s, 0.0};
        g.normals[j] = {c, s, 0.0};
        g.tangents[j] = {-s, c, 0.0};
        g.weights[j] = R * h;
    }
    fill_2d_basis(g, J);
    return g;
}

BoundaryGrid discretize_star(const StarShaped2D& star, int N) {
    if (N < 4) throw Error(ErrorKind::config, "boundary resolution must be >= 4");
    if (star.rho_coeffs.empty())
        throw Error(ErrorKind::invalid_domain, "star-shaped domain needs rho coefficients");
    // Positivity check on a sampling much finer than the grid.
    int M = std::max(4096, 8 * N);
    for (int m = 0; m < M; ++m) {
        if (star.rho(2.0 * kPi * m / M) <= 0.0)
            throw Error(ErrorKind::invalid_domain, "rho(theta) must stay positive");
    }
    BoundaryGrid g;
    g.domain = star;
    g.dim = 2;
    g.resolution = N;
    double h = 2.0 * kPi / N;
    g.nodes.resize(N);
    g.normals.resize(N);
    g.tangents.resize(N);
    g.weights.resize(N);
    g.thetas.resize(N);
    std::vector<double> J(N);
    for (int j = 0; j < N; ++j) {
        double th = j * h, c = std::cos(th), s = std::sin(th);
        double r = star.rho(th), dr = star.drho(th);
        J[j] = std::sqrt(r * r + dr * dr);
        g.thetas[j] = th;
        g.nodes[j] = {r * c, r * s, 0.0};
        Vec3 tangent{dr * c - r * s, dr * s + r * c, 0.0};
        g.tangents[j] = tangent / J[j];
        g.normals[j] = {(r * c + dr * s) / J[j], (r * s - dr * c) / J[j], 0.0};
        g.weights[j] = J[j] * h;
    }
    fill_2d_basis(g, J);
    return g;
}

BoundaryGrid discretize_sphere(const Sphere& sph, int L) {
    if (L < 1) throw Error(ErrorKind::config, "sphere resolution L must be >= 1");
    if (sph.radius <= 0.0) throw Error(ErrorKind::invalid_domain, "sphere radius must be positive");
    const double R = sph.radius;
    BoundaryGrid g;
    g.domain = sph;
    g.dim = 3;
    g.resolution = L;
    g.n_theta = L + 1;
    g.n_phi = 2 * L + 1;
    int n = g.n_theta * g.n_phi;

    std::vector<double> x, wgl;
    gauss_legendre(g.n_theta, x, wgl);

    g.nodes.resize(n);
    g.normals.resize(n);
    g.weights.resize(n);
    g.thetas.resize(n);
    g.phis.resize(n);
    int nb = (L + 1) * (L + 1);
    g.basis.resize(n, nb);
    g.degrees.assign(nb, 0);
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m) g.degrees[l * (l + 1) + m] = l;
    g.max_degree = L;

    std::vector<double> ylm(nb);
    const double wphi = 2.0 * kPi / g.n_phi;
    for (int i = 0; i < g.n_theta; ++i) {
        double theta = std::acos(x[i]);
        double st = std::sin(theta);
        for (int j = 0; j < g.n_phi; ++j) {
            int p = i * g.n_phi + j;
            double phi = wphi * j;
            g.thetas[p] = theta;
            g.phis[p] = phi;
            g.normals[p] = {st * std::cos(phi), st * std::sin(phi), x[i]};
            g.nodes[p] = R * g.normals[p];
            g.weights[p] = R * R * wgl[i] * wphi;
            real_spherical_harmonics(L, theta, phi, ylm.data());
            for (int k = 0; k < nb; ++k) g.basis(p, k) = ylm[k] / R;
        }
    }
    return g;
}

}  // namespace

BoundaryGrid discretize_boundary(const Domain& domain, int resolution) {
    if (auto* c = std::get_if<Circle>(&domain))
        return discretize_circle_like(domain, c->radius, resolution);
    if (auto* a = std::get_if<Annulus>(&domain)) {
        if (!(a->inner_radius > 0.0) || !(a->outer_radius > a->inner_radius))
            throw Error(ErrorKind::invalid_domain, "annulus needs 0 < R_inner < R_outer");
        return discretize_circle_like(domain, a->inner_radius, resolution);
    }
    if (auto* s = std::get_if<StarShaped2D>(&domain)) return discretize_star(*s, resolution);
    return discretize_sphere(std::get<Sphere>(domain), resolution);
}

// ---- basis formulas off the grid nodes --------------------------------------

namespace {

// (J, J') of the arclength density sqrt(rho^2 + rho'^2) for a 2D domain.
void arclength_density(const Domain& domain, double theta, double& J, double& dJ) {
    if (auto* c = std::get_if<Circle>(&domain)) {
        J = c->radius;
        dJ = 0.0;
        return;
    }
    if (auto* a = std::get_if<Annulus>(&domain)) {
        J = a->inner_radius;
        dJ = 0.0;
        return;
    }
    const auto& st = std::get<StarShaped2D>(domain);
    double r = st.rho(theta), dr = st.drho(theta), ddr = st.ddrho(theta);
    J = std::sqrt(r * r + dr * dr);
    dJ = (r * dr + dr * ddr) / J;
}

}  // namespace

void eval_basis_2d(const BoundaryGrid& grid, double theta, double* values) {
    if (grid.dim != 2) throw Error(ErrorKind::unsupported, "eval_basis_2d needs a 2D grid");
    double J, dJ;
    arclength_density(grid.domain, theta, J, dJ);
    double mod = 1.0 / std::sqrt(J);
    int kmax = grid.max_degree;
    values[0] = mod / std::sqrt(2.0 * kPi);
    for (int k = 1; k <= kmax; ++k) {
        values[2 * k - 1] = mod * std::cos(k * theta) / std::sqrt(kPi);
        values[2 * k] = mod * std::sin(k * theta) / std::sqrt(kPi);
    }
}

void eval_basis_arclength_deriv_2d(const BoundaryGrid& grid, double theta, double* derivs) {
    if (grid.dim != 2)
        throw Error(ErrorKind::unsupported, "eval_basis_arclength_deriv_2d needs a 2D grid");
    double J, dJ;
    arclength_density(grid.domain, theta, J, dJ);
    // d/ds = (1/J) d/dtheta applied to F_k(theta) / sqrt(J(theta))
    double mod = 1.0 / std::sqrt(J);
    double modderiv = -0.5 * dJ / (J * std::sqrt(J));
    int kmax = grid.max_degree;
    derivs[0] = modderiv / std::sqrt(2.0 * kPi) / J;
    for (int k = 1; k <= kmax; ++k) {
        double c = std::cos(k * theta) / std::sqrt(kPi), s = std::sin(k * theta) / std::sqrt(kPi);
        derivs[2 * k - 1] = (-k * s * mod + c * modderiv) / J;
        derivs[2 * k] = (k * c * mod + s * modderiv) / J;
    }
}

// ---- interior tangent balls -------------------------------------------------

namespace {

// Distance from p to the star boundary: dense sampling plus golden-section
// refinement inside the best bracket. Independent of the bisection below; the
// tests also use it as the containment oracle.
double distance_to_star_boundary(const StarShaped2D& star, const Vec3& p) {
    const int M = 4096;
    double best = std::numeric_limits<double>::max();
    int best_m = 0;
    for (int m = 0; m < M; ++m) {
        double th = 2.0 * kPi * m / M;
        double r = star.rho(th);
        double dx = p.x() - r * std::cos(th), dy = p.y() - r * std::sin(th);
        double d2 = dx * dx + dy * dy;
        if (d2 < best) {
            best = d2;
            best_m = m;
        }
    }
    auto dist2 = [&](double th) {
        double r = star.rho(th);
        double dx = p.x() - r * std::cos(th), dy = p.y() - r * std::sin(th);
        return dx * dx + dy * dy;
    };
    double a = 2.0 * kPi * (best_m - 1) / M;
    double b = 2.0 * kPi * (best_m + 1) / M;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = dist2(c), fd = dist2(d);
    for (int it = 0; it < 80 && (b - a) > 1e-14; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = dist2(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = dist2(d);
        }
    }
    return std::sqrt(std::min(fc, fd));
}

}  // namespace

InteriorBall interior_ball(const Domain& domain, const Vec3& omega) {
    if (std::get_if<Annulus>(&domain))
        throw Error(ErrorKind::unsupported,
                    "interior_ball: annulus has no interior tangent ball at the inner circle");

    if (auto* c = std::get_if<Circle>(&domain)) {
        double R = c->radius;
        if (std::fabs(omega.norm() - R) > 1e-8 * R)
            throw Error(ErrorKind::invalid_domain, "interior_ball: point is not on the circle");
        return {omega, Vec3::Zero(), R};
    }
    if (auto* s = std::get_if<Sphere>(&domain)) {
        double R = s->radius;
        if (std::fabs(omega.norm() - R) > 1e-8 * R)
            throw Error(ErrorKind::invalid_domain, "interior_ball: point is not on the sphere");
        return {omega, Vec3::Zero(), R};
    }

    const auto& star = std::get<StarShaped2D>(domain);
    double theta = std::atan2(omega.y(), omega.x());
    double rho = star.rho(theta);
    if (std::fabs(omega.head<2>().norm() - rho) > 1e-8 * std::max(1.0, rho))
        throw Error(ErrorKind::invalid_domain, "interior_ball: point is not on the boundary");

    Vec3 nu = boundary_normal_2d(domain, theta);
    double scale = std::fabs(star.rho_coeffs[0]);
    for (std::size_t i = 1; i < star.rho_coeffs.size(); ++i)
        scale += std::fabs(star.rho_coeffs[i]);

    // A ball of radius r tangent at omega has center omega - r nu; it stays
    // inside exactly while dist(center, boundary) == r (it is never larger).
    auto contained = [&](double r) {
        Vec3 center = omega - r * nu;
        return distance_to_star_boundary(star, center) >= r - 1e-9 * scale;
    };

    double lo = 1e-6 * scale;
    if (!contained(lo))
        throw Error(ErrorKind::numerical, "interior_ball: no tangent ball found (boundary kink?)");
    double hi = lo;
    while (contained(hi) && hi < 4.0 * scale) hi *= 2.0;
    if (hi >= 4.0 * scale) hi = 4.0 * scale;
    for (int it = 0; it < 80 && (hi - lo) > 1e-12 * scale; ++it) {
        double mid = 0.5 * (lo + hi);
        (contained(mid) ? lo : hi) = mid;
    }
    return {omega, omega - lo * nu, lo};
}

}  // namespace dtn
