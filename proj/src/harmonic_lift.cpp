#include "dtn/harmonic_lift.hpp"

#include <cmath>
#include <numbers>

#include "dtn/error.hpp"

namespace dtn {

namespace {

constexpr double kPi = std::numbers::pi;

double boundary_rho(const Domain& domain, double theta) {
    if (auto* c = std::get_if<Circle>(&domain)) return c->radius;
    if (auto* a = std::get_if<Annulus>(&domain)) return a->inner_radius;
    if (auto* s = std::get_if<StarShaped2D>(&domain)) return s->rho(theta);
    throw Error(ErrorKind::unsupported, "boundary_rho: not a 2D domain");
}

double wrap_angle(double th) {
    th = std::fmod(th, 2.0 * kPi);
    return th < 0.0 ? th + 2.0 * kPi : th;
}

}  // namespace

// ---- annulus radial modes ----------------------------------------------------

double HarmonicField::annulus_radial(int k, double r, bool deriv) const {
    if (k == 0) {
        double d = std::log(R_out_ / R_);
        return deriv ? -1.0 / (r * d) : std::log(R_out_ / r) / d;
    }
    double arg_total = k * std::log(R_out_ / R_);
    double arg_r = k * std::log(R_out_ / r);
    if (arg_total > 700.0) {
        // outer wall numerically invisible; pure decaying mode
        double q = std::pow(R_ / r, k);
        return deriv ? -(k / r) * q : q;
    }
    double den = std::sinh(arg_total);
    return deriv ? -(k / r) * std::cosh(arg_r) / den : std::sinh(arg_r) / den;
}

// ---- value -------------------------------------------------------------------

double HarmonicField::value(const Vec3& x) const {
    const BoundaryGrid& g = *grid_;

    if (backend_ == Backend::fd) {
        double theta = wrap_angle(std::atan2(x.y(), x.x()));
        double rho = boundary_rho(g.domain, theta);
        double s = std::hypot(x.x(), x.y()) / rho;
        if (s > 1.0 + 1e-9)
            throw Error(ErrorKind::config, "evaluation point lies outside the domain");
        return interp_->value(std::min(s, 1.0), theta);
    }

    if (backend_ == Backend::annulus) {
        double r = std::hypot(x.x(), x.y());
        if (r < R_ * (1.0 - 1e-9) || r > R_out_ * (1.0 + 1e-9))
            throw Error(ErrorKind::config, "evaluation point lies outside the annulus");
        r = std::clamp(r, R_, R_out_);
        double theta = std::atan2(x.y(), x.x());
        double v = coeffs_[0] * annulus_radial(0, r, false) / std::sqrt(2.0 * kPi * R_);
        double sq = 1.0 / std::sqrt(kPi * R_);
        for (int k = 1; k <= g.max_degree; ++k) {
            double rad = annulus_radial(k, r, false) * sq;
            v += rad * (coeffs_[2 * k - 1] * std::cos(k * theta) +
                        coeffs_[2 * k] * std::sin(k * theta));
        }
        return v;
    }

    // spectral ball
    if (!sphere_) {
        double r = std::hypot(x.x(), x.y());
        if (r > R_ * (1.0 + 1e-9))
            throw Error(ErrorKind::config, "evaluation point lies outside the disk");
        double rr = std::min(r / R_, 1.0);
        double theta = std::atan2(x.y(), x.x());
        double v = coeffs_[0] / std::sqrt(2.0 * kPi * R_);
        double sq = 1.0 / std::sqrt(kPi * R_);
        double p = 1.0;
        for (int k = 1; k <= g.max_degree; ++k) {
            p *= rr;
            v += p * sq *
                 (coeffs_[2 * k - 1] * std::cos(k * theta) + coeffs_[2 * k] * std::sin(k * theta));
        }
        return v;
    }

    double r = x.norm();
    if (r > R_ * (1.0 + 1e-9))
        throw Error(ErrorKind::config, "evaluation point lies outside the ball");
    double rr = std::min(r / R_, 1.0);
    int L = g.max_degree;
    thread_local std::vector<double> ylm;
    ylm.resize(static_cast<std::size_t>((L + 1) * (L + 1)));
    double theta = r < 1e-300 ? 0.0 : std::acos(std::clamp(x.z() / r, -1.0, 1.0));
    double phi = std::atan2(x.y(), x.x());
    real_spherical_harmonics(L, theta, phi, ylm.data());
    double v = 0.0;
    std::vector<double> rpow(static_cast<std::size_t>(L + 1));
    rpow[0] = 1.0;
    for (int l = 1; l <= L; ++l) rpow[l] = rpow[l - 1] * rr;
    for (Eigen::Index p = 0; p < coeffs_.size(); ++p)
        if (coeffs_[p] != 0.0) v += coeffs_[p] * rpow[g.degrees[p]] * ylm[p];
    return v / R_;
}

// ---- gradient ----------------------------------------------------------------

Vec3 HarmonicField::gradient(const Vec3& x) const {
    const BoundaryGrid& g = *grid_;

    if (backend_ == Backend::fd) {
        double theta = wrap_angle(std::atan2(x.y(), x.x()));
        double rho = boundary_rho(g.domain, theta);
        double s = std::hypot(x.x(), x.y()) / rho;
        if (s > 1.0 + 1e-9)
            throw Error(ErrorKind::config, "evaluation point lies outside the domain");
        s = std::clamp(s, 1e-12, 1.0);
        double vs, vt;
        interp_->partials(s, theta, vs, vt);
        // chain rule through x(s, theta) = s rho(theta) (cos, sin)
        const auto* star = std::get_if<StarShaped2D>(&g.domain);
        double dr = star ? star->drho(theta) : 0.0;
        double c = std::cos(theta), sn = std::sin(theta);
        double J11 = rho * c, J12 = s * (dr * c - rho * sn);
        double J21 = rho * sn, J22 = s * (dr * sn + rho * c);
        double det = s * rho * rho;
        return {(J22 * vs - J21 * vt) / det, (-J12 * vs + J11 * vt) / det, 0.0};
    }

    if (backend_ == Backend::annulus) {
        double r = std::clamp(std::hypot(x.x(), x.y()), R_, R_out_);
        double theta = std::atan2(x.y(), x.x());
        double sq0 = 1.0 / std::sqrt(2.0 * kPi * R_), sq = 1.0 / std::sqrt(kPi * R_);
        double vr = coeffs_[0] * annulus_radial(0, r, true) * sq0;
        double vt = 0.0;
        for (int k = 1; k <= g.max_degree; ++k) {
            double ck = std::cos(k * theta), sk = std::sin(k * theta);
            double a = coeffs_[2 * k - 1], b = coeffs_[2 * k];
            vr += annulus_radial(k, r, true) * sq * (a * ck + b * sk);
            vt += annulus_radial(k, r, false) * sq * k * (-a * sk + b * ck);
        }
        Vec3 rhat{std::cos(theta), std::sin(theta), 0.0};
        Vec3 that{-rhat.y(), rhat.x(), 0.0};
        return vr * rhat + (vt / r) * that;
    }

    if (!sphere_) {
        double r = std::hypot(x.x(), x.y());
        if (r > R_ * (1.0 + 1e-9))
            throw Error(ErrorKind::config, "evaluation point lies outside the disk");
        double sq = 1.0 / std::sqrt(kPi * R_);
        if (r < 1e-12 * R_) {
            // only the k = 1 modes reach the center with a nonzero gradient
            if (g.max_degree < 1) return Vec3::Zero();
            return {coeffs_[1] * sq / R_, coeffs_[2] * sq / R_, 0.0};
        }
        double rr = std::min(r / R_, 1.0);
        double theta = std::atan2(x.y(), x.x());
        double vr = 0.0, vt = 0.0;
        double p = 1.0;  // rr^{k-1}
        for (int k = 1; k <= g.max_degree; ++k) {
            double ck = std::cos(k * theta), sk = std::sin(k * theta);
            double a = coeffs_[2 * k - 1], b = coeffs_[2 * k];
            vr += (k / R_) * p * sq * (a * ck + b * sk);
            vt += p * rr * sq * k * (-a * sk + b * ck);
            p *= rr;
        }
        Vec3 rhat{std::cos(theta), std::sin(theta), 0.0};
        Vec3 that{-rhat.y(), rhat.x(), 0.0};
        return vr * rhat + (vt / r) * that;
    }

    // sphere: analytic radial part, small central differences on the angles
    double r = x.norm();
    if (r > R_ * (1.0 + 1e-9))
        throw Error(ErrorKind::config, "evaluation point lies outside the ball");
    int L = g.max_degree;
    if (r < 1e-12 * R_) {
        if (L < 1) return Vec3::Zero();
        double c = std::sqrt(3.0 / (4.0 * kPi)) / (R_ * R_);
        return {c * coeffs_[3], c * coeffs_[1], c * coeffs_[2]};
    }
    double rr = std::min(r / R_, 1.0);
    double theta = std::acos(std::clamp(x.z() / r, -1.0, 1.0));
    double phi = std::atan2(x.y(), x.x());
    std::vector<double> rpow(static_cast<std::size_t>(L + 1));
    rpow[0] = 1.0;
    for (int l = 1; l <= L; ++l) rpow[l] = rpow[l - 1] * rr;

    std::vector<double> ylm(static_cast<std::size_t>((L + 1) * (L + 1)));
    auto angular = [&](double th, double ph, bool radial_weighted) {
        real_spherical_harmonics(L, th, ph, ylm.data());
        double v = 0.0;
        for (Eigen::Index p = 0; p < coeffs_.size(); ++p)
            if (coeffs_[p] != 0.0) {
                int l = g.degrees[p];
                double w = radial_weighted ? (l / R_) * (l >= 1 ? rpow[l - 1] : 0.0) : rpow[l];
                v += coeffs_[p] * w * ylm[p];
            }
        return v / R_;
    };

    double vr = angular(theta, phi, true);
    const double d = 1e-6;
    double vth = (angular(theta + d, phi, false) - angular(theta - d, phi, false)) / (2.0 * d);
    double st = std::sin(theta);
    double vph = 0.0;
    if (std::fabs(st) > 1e-8)
        vph = (angular(theta, phi + d, false) - angular(theta, phi - d, false)) / (2.0 * d) / st;

    Vec3 rhat = x / r;
    Vec3 thhat{std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -st};
    Vec3 phhat{-std::sin(phi), std::cos(phi), 0.0};
    return vr * rhat + (vth / r) * thhat + (vph / r) * phhat;
}

// ---- trace and conormal --------------------------------------------------------

BoundaryFunction HarmonicField::trace() const {
    if (backend_ != Backend::fd) return BoundaryFunction::from_coeffs(grid_, coeffs_);
    Eigen::VectorXd v(grid_->n_nodes());
    for (std::size_t j = 0; j < grid_->n_nodes(); ++j) v[j] = value(grid_->nodes[j]);
    return BoundaryFunction::from_values(grid_, v);
}

double HarmonicField::conormal(const ConductivityField& gamma, std::size_t node) const {
    const BoundaryGrid& g = *grid_;

    if (backend_ == Backend::spectral) {
        if (!gamma.is_constant_scalar)
            throw Error(ErrorKind::unsupported,
                        "spectral conormal requires constant scalar conductivity");
        double acc = 0.0;
        for (Eigen::Index p = 0; p < coeffs_.size(); ++p)
            acc += coeffs_[p] * g.degrees[p] * g.basis(node, p);
        return gamma.scalar_value * acc / R_;
    }

    if (backend_ == Backend::annulus) {
        if (!gamma.is_constant_scalar)
            throw Error(ErrorKind::unsupported,
                        "annulus conormal requires constant scalar conductivity");
        // nu is the grid normal (+r direction); conormal = a * d v / d r at R
        double acc0 = coeffs_[0] * annulus_radial(0, R_, true) / std::sqrt(2.0 * kPi * R_);
        double sq = 1.0 / std::sqrt(kPi * R_);
        double th = g.thetas[node];
        for (int k = 1; k <= g.max_degree; ++k)
            acc0 += annulus_radial(k, R_, true) * sq *
                    (coeffs_[2 * k - 1] * std::cos(k * th) + coeffs_[2 * k] * std::sin(k * th));
        return gamma.scalar_value * acc0;
    }

    // FD: one-sided 3-point normal derivative of the interpolant at a small
    // step h (a fraction of the radial cell), plus the analytic tangential
    // derivative of the boundary data.
    const Vec3& omega = g.nodes[node];
    const Vec3& nu = g.normals[node];
    const Vec3& tau = g.tangents[node];
    double theta = g.thetas[node];
    double h = nd_factor_ * hs_ * boundary_rho(g.domain, theta);

    double v0 = g.basis.row(node).dot(coeffs_);
    double v1 = value(omega - h * nu);
    double v2 = value(omega - 2.0 * h * nu);
    double dn = (3.0 * v0 - 4.0 * v1 + v2) / (2.0 * h);

    thread_local std::vector<double> dbas;
    dbas.resize(static_cast<std::size_t>(g.basis_size()));
    eval_basis_arclength_deriv_2d(g, theta, dbas.data());
    double dt = 0.0;
    for (Eigen::Index p = 0; p < coeffs_.size(); ++p) dt += coeffs_[p] * dbas[p];

    Eigen::Matrix3d m = gamma(omega);
    return nu.dot(m * nu) * dn + nu.dot(m * tau) * dt;
}

// ---- lift dispatch -------------------------------------------------------------

namespace detail {

struct FieldBuilder {
    static HarmonicField spectral(GridPtr grid, Eigen::VectorXd coeffs, double R, bool sphere);
    static HarmonicField annulus(GridPtr grid, Eigen::VectorXd coeffs, double Rin, double Rout);
    static HarmonicField fd(GridPtr grid, const FdSolver& solver, Eigen::VectorXd coeffs,
                            const Eigen::VectorXd& fd_boundary, const LiftOptions& opts);
};

HarmonicField FieldBuilder::spectral(GridPtr grid, Eigen::VectorXd coeffs, double R,
                                     bool sphere) {
    HarmonicField h;
    h.backend_ = HarmonicField::Backend::spectral;
    h.grid_ = std::move(grid);
    h.coeffs_ = std::move(coeffs);
    h.R_ = R;
    h.sphere_ = sphere;
    return h;
}

HarmonicField FieldBuilder::annulus(GridPtr grid, Eigen::VectorXd coeffs, double Rin,
                                    double Rout) {
    HarmonicField h;
    h.backend_ = HarmonicField::Backend::annulus;
    h.grid_ = std::move(grid);
    h.coeffs_ = std::move(coeffs);
    h.R_ = Rin;
    h.R_out_ = Rout;
    return h;
}

HarmonicField FieldBuilder::fd(GridPtr grid, const FdSolver& solver, Eigen::VectorXd coeffs,
                               const Eigen::VectorXd& fd_boundary, const LiftOptions& opts) {
    auto sol = solver.solve(fd_boundary);
    HarmonicField h;
    h.backend_ = HarmonicField::Backend::fd;
    h.grid_ = std::move(grid);
    h.coeffs_ = std::move(coeffs);
    h.residual_ = sol.residual;
    h.hs_ = 1.0 / solver.n_s();
    h.nd_factor_ = opts.normal_step_factor;
    h.interp_ = std::make_shared<GridInterpolator>(std::move(sol.v), h.hs_,
                                                   2.0 * kPi / solver.n_theta());
    return h;
}

}  // namespace detail

namespace {

using detail::FieldBuilder;

// boundary basis rows at the FD angular nodes: (n_theta_fd) x basis_size
Eigen::MatrixXd fd_basis_rows(const BoundaryGrid& g, const FdSolver& solver) {
    Eigen::MatrixXd B(solver.n_theta(), g.basis_size());
    std::vector<double> row(static_cast<std::size_t>(g.basis_size()));
    for (int j = 0; j < solver.n_theta(); ++j) {
        eval_basis_2d(g, solver.thetas()[j], row.data());
        for (int p = 0; p < g.basis_size(); ++p) B(j, p) = row[p];
    }
    return B;
}

std::pair<int, int> fd_sizes(const BoundaryGrid& g, const LiftOptions& opts) {
    if (opts.fd_factor < 1 || opts.fd_radial_divisor < 1)
        throw Error(ErrorKind::config, "FD refinement factors must be >= 1");
    int n_theta = opts.fd_factor * static_cast<int>(g.n_nodes());
    int n_s = std::max(8, n_theta / opts.fd_radial_divisor);
    return {n_theta, n_s};
}

enum class Route { spectral, annulus, fd };

Route pick_route(const Domain& domain, const ConductivityField& gamma, const LiftOptions& opts) {
    if (std::get_if<Annulus>(&domain)) {
        if (!gamma.is_constant_scalar)
            throw Error(ErrorKind::unsupported,
                        "annulus lifts require constant scalar conductivity");
        return Route::annulus;
    }
    if (std::get_if<Sphere>(&domain)) {
        if (!gamma.is_constant_scalar)
            throw Error(ErrorKind::unsupported,
                        "variable conductivity on the sphere is not supported");
        return Route::spectral;
    }
    if (std::get_if<Circle>(&domain) && gamma.is_constant_scalar && !opts.force_fd)
        return Route::spectral;
    return Route::fd;
}

}  // namespace

HarmonicField lift(const BoundaryFunction& f, const ConductivityField& gamma,
                   const LiftOptions& opts) {
    const Domain& dom = f.grid->domain;
    switch (pick_route(dom, gamma, opts)) {
        case Route::spectral: {
            double R = std::get_if<Circle>(&dom) ? std::get<Circle>(dom).radius
                                                 : std::get<Sphere>(dom).radius;
            return FieldBuilder::spectral(f.grid, f.coeffs, R, f.grid->dim == 3);
        }
        case Route::annulus: {
            const auto& a = std::get<Annulus>(dom);
            return FieldBuilder::annulus(f.grid, f.coeffs, a.inner_radius, a.outer_radius);
        }
        case Route::fd: {
            auto [n_theta, n_s] = fd_sizes(*f.grid, opts);
            FdSolver solver(dom, gamma, n_theta, n_s);
            Eigen::MatrixXd B = fd_basis_rows(*f.grid, solver);
            return FieldBuilder::fd(f.grid, solver, f.coeffs, B * f.coeffs, opts);
        }
    }
    throw Error(ErrorKind::numerical, "unreachable");
}

LiftedBasis::LiftedBasis(GridPtr grid, ConductivityField gamma, LiftOptions opts)
    : grid_(std::move(grid)), gamma_(std::move(gamma)), opts_(opts) {
    const Domain& dom = grid_->domain;
    int dim = grid_->basis_size();
    fields_.reserve(static_cast<std::size_t>(dim));

    Route route = pick_route(dom, gamma_, opts_);
    spectral_ = route != Route::fd;

    if (route == Route::spectral) {
        double R = std::get_if<Circle>(&dom) ? std::get<Circle>(dom).radius
                                             : std::get<Sphere>(dom).radius;
        for (int k = 0; k < dim; ++k)
            fields_.push_back(
                FieldBuilder::spectral(grid_, Eigen::VectorXd::Unit(dim, k), R, grid_->dim == 3));
        return;
    }
    if (route == Route::annulus) {
        const auto& a = std::get<Annulus>(dom);
        for (int k = 0; k < dim; ++k)
            fields_.push_back(FieldBuilder::annulus(grid_, Eigen::VectorXd::Unit(dim, k), a.inner_radius,
                                           a.outer_radius));
        return;
    }

    auto [n_theta, n_s] = fd_sizes(*grid_, opts_);
    FdSolver solver(dom, gamma_, n_theta, n_s);
    Eigen::MatrixXd B = fd_basis_rows(*grid_, solver);
    for (int k = 0; k < dim; ++k)
        fields_.push_back(FieldBuilder::fd(grid_, solver, Eigen::VectorXd::Unit(dim, k), B.col(k), opts_));
}

// ---- Dirichlet energy ----------------------------------------------------------

double dirichlet_energy(const HarmonicField& v, const ConductivityField& gamma, int n_r,
                        int n_t) {
    const BoundaryGrid& g = *v.grid();
    const Domain& dom = g.domain;

    if (g.dim == 2) {
        double r_lo = 0.0, r_hi = 1.0;
        bool annulus = std::holds_alternative<Annulus>(dom);
        if (annulus) {
            r_lo = std::get<Annulus>(dom).inner_radius;
            r_hi = std::get<Annulus>(dom).outer_radius;
        }
        double hr = (r_hi - r_lo) / n_r, ht = 2.0 * kPi / n_t;
        double acc = 0.0;
        for (int i = 0; i < n_r; ++i) {
            double sc = r_lo + (i + 0.5) * hr;
            for (int j = 0; j < n_t; ++j) {
                double th = (j + 0.5) * ht;
                double rho = annulus ? 1.0 : boundary_rho(dom, th);
                double r_phys = annulus ? sc : sc * rho;
                Vec3 x{r_phys * std::cos(th), r_phys * std::sin(th), 0.0};
                Vec3 grad = v.gradient(x);
                double det = annulus ? sc : sc * rho * rho;
                Eigen::Vector2d g2 = grad.head<2>();
                acc += det * hr * ht * g2.dot(gamma(x).topLeftCorner<2, 2>() * g2);
            }
        }
        return acc;
    }

    // ball: midpoint radii x Gauss-Legendre colatitude x uniform azimuth
    double R = std::get<Sphere>(dom).radius;
    std::vector<double> xg, wg;
    gauss_legendre(n_t, xg, wg);
    int n_phi = 2 * n_t;
    double hr = R / n_r, hp = 2.0 * kPi / n_phi;
    double acc = 0.0;
    for (int i = 0; i < n_r; ++i) {
        double r = (i + 0.5) * hr;
        for (int q = 0; q < n_t; ++q) {
            double th = std::acos(xg[q]);
            double st = std::sin(th);
            for (int j = 0; j < n_phi; ++j) {
                double ph = j * hp;
                Vec3 x{r * st * std::cos(ph), r * st * std::sin(ph), r * xg[q]};
                Vec3 grad = v.gradient(x);
                acc += r * r * wg[q] * hp * hr * grad.dot(gamma(x) * grad);
            }
        }
    }
    return acc;
}

}  // namespace dtn
