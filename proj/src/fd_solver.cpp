#include "dtn/fd_solver.hpp"

#include <cmath>
#include <numbers>

#include "dtn/error.hpp"

namespace dtn {

namespace {
constexpr double kPi = std::numbers::pi;

struct RhoFn {
    double R = 1.0;
    const StarShaped2D* star = nullptr;
    double rho(double th) const { return star ? star->rho(th) : R; }
    double drho(double th) const { return star ? star->drho(th) : 0.0; }
};

RhoFn rho_of(const Domain& domain) {
    if (auto* c = std::get_if<Circle>(&domain)) return {c->radius, nullptr};
    if (auto* s = std::get_if<StarShaped2D>(&domain)) return {0.0, s};
    throw Error(ErrorKind::unsupported,
                "finite-difference solver covers disks and star-shaped 2D domains only");
}

// G = adj(J) gamma adj(J)^T / det(J) at parameter point (s, theta), s > 0.
Eigen::Matrix2d metric_coeff(const RhoFn& rf, const ConductivityField& gamma, double s,
                             double th) {
    double c = std::cos(th), sn = std::sin(th);
    double r = rf.rho(th), dr = rf.drho(th);
    Eigen::Matrix2d adj;
    adj << s * (dr * sn + r * c), -s * (dr * c - r * sn), -r * sn, r * c;
    Vec3 x{s * r * c, s * r * sn, 0.0};
    Eigen::Matrix2d g2 = gamma(x).topLeftCorner<2, 2>();
    return adj * g2 * adj.transpose() / (s * r * r);
}

}  // namespace

FdSolver::FdSolver(const Domain& domain, const ConductivityField& gamma, int n_theta, int n_s)
    : domain_(domain), n_theta_(n_theta), n_s_(n_s) {
    if (n_theta < 8 || n_s < 4)
        throw Error(ErrorKind::config, "FD solver needs n_theta >= 8 and n_s >= 4");
    RhoFn rf = rho_of(domain_);
    hs_ = 1.0 / n_s_;
    ht_ = 2.0 * kPi / n_theta_;
    thetas_.resize(n_theta_);
    for (int j = 0; j < n_theta_; ++j) thetas_[j] = j * ht_;

    const int n_unknowns = 1 + (n_s_ - 1) * n_theta_;
    auto unknown_of = [&](int i, int j) {
        return i == 0 ? 0 : 1 + (i - 1) * n_theta_ + ((j % n_theta_) + n_theta_) % n_theta_;
    };

    std::vector<Eigen::Triplet<double>> at, bt;
    at.reserve(static_cast<std::size_t>(n_unknowns) * 9);
    // Accumulate "coef * v(i,j)" into row `row`; boundary ring n_s goes to the
    // data-scatter matrix B with flipped sign (moved to the right-hand side).
    auto acc = [&](int row, int i, int j, double coef) {
        if (coef == 0.0) return;
        if (i == n_s_)
            bt.emplace_back(row, ((j % n_theta_) + n_theta_) % n_theta_, -coef);
        else
            at.emplace_back(row, unknown_of(i, j), coef);
    };

    // Face coefficient caches: Gs at (i+1/2, j) for i = 0..n_s-1, Gt at
    // (i, j+1/2) for i = 1..n_s-1.
    std::vector<Eigen::Matrix2d> Gs(static_cast<std::size_t>(n_s_) * n_theta_);
    std::vector<Eigen::Matrix2d> Gt(static_cast<std::size_t>(n_s_) * n_theta_);
    for (int i = 0; i < n_s_; ++i)
        for (int j = 0; j < n_theta_; ++j)
            Gs[i * n_theta_ + j] = metric_coeff(rf, gamma, (i + 0.5) * hs_, thetas_[j]);
    for (int i = 1; i < n_s_; ++i)
        for (int j = 0; j < n_theta_; ++j)
            Gt[i * n_theta_ + j] = metric_coeff(rf, gamma, i * hs_, thetas_[j] + 0.5 * ht_);

    // Radial flux through face (i+1/2, j), signed along +s, accumulated with
    // weight `w` into `row`:
    //   F = G11 (v(i+1,j) - v(i,j))/hs
    //     + G12 (v(i,j-1..j+1) + v(i+1,j-1..j+1)) / (4 ht)   [theta average]
    auto add_flux_s = [&](int row, int i, int j, double w) {
        const Eigen::Matrix2d& G = Gs[i * n_theta_ + j];
        acc(row, i + 1, j, w * G(0, 0) / hs_);
        acc(row, i, j, -w * G(0, 0) / hs_);
        double q = w * G(0, 1) / (4.0 * ht_);
        // the center ring is a single value: its theta difference vanishes
        if (i != 0) {
            acc(row, i, j + 1, q);
            acc(row, i, j - 1, -q);
        }
        acc(row, i + 1, j + 1, q);
        acc(row, i + 1, j - 1, -q);
    };
    // Angular flux through face (i, j+1/2), signed along +theta.
    auto add_flux_t = [&](int row, int i, int j, double w) {
        const Eigen::Matrix2d& G = Gt[i * n_theta_ + j];
        acc(row, i, j + 1, w * G(1, 1) / ht_);
        acc(row, i, j, -w * G(1, 1) / ht_);
        double q = w * G(0, 1) / (4.0 * hs_);
        acc(row, i + 1, j, q);
        acc(row, i - 1, j, -q);
        acc(row, i + 1, j + 1, q);
        acc(row, i - 1, j + 1, -q);
    };

    // Ring equations: net outflux of the hs x ht cell around (i, j) is zero.
    // Negated so diagonals come out positive.
    for (int i = 1; i < n_s_; ++i) {
        for (int j = 0; j < n_theta_; ++j) {
            int row = unknown_of(i, j);
            add_flux_s(row, i, j, -ht_);
            add_flux_s(row, i - 1, j, ht_);
            add_flux_t(row, i, j, -hs_);
            add_flux_t(row, i, (j - 1 + n_theta_) % n_theta_, hs_);
        }
    }
    // Center closure: total flux through the first half-ring s = hs/2.
    for (int j = 0; j < n_theta_; ++j) add_flux_s(0, 0, j, -ht_);

    A_.resize(n_unknowns, n_unknowns);
    A_.setFromTriplets(at.begin(), at.end());
    B_.resize(n_unknowns, n_theta_);
    B_.setFromTriplets(bt.begin(), bt.end());

    lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    lu_->compute(A_);
    if (lu_->info() != Eigen::Success)
        throw Error(ErrorKind::numerical, "FD operator factorization failed");
}

FdSolver::Solution FdSolver::solve(const Eigen::VectorXd& boundary_values) const {
    if (boundary_values.size() != n_theta_)
        throw Error(ErrorKind::config, "boundary data size does not match the FD grid");
    Eigen::VectorXd b = B_ * boundary_values;
    Eigen::VectorXd u = lu_->solve(b);
    if (lu_->info() != Eigen::Success)
        throw Error(ErrorKind::numerical, "FD solve failed");

    Solution sol;
    double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    sol.residual = (A_ * u - b).cwiseAbs().maxCoeff() / scale;
    if (!(sol.residual < 1e-8))
        throw Error(ErrorKind::numerical, "FD solution residual too large");

    sol.v.resize(n_s_ + 1, n_theta_);
    sol.v.row(0).setConstant(u[0]);
    for (int i = 1; i < n_s_; ++i)
        for (int j = 0; j < n_theta_; ++j) sol.v(i, j) = u[1 + (i - 1) * n_theta_ + j];
    sol.v.row(n_s_) = boundary_values.transpose();
    return sol;
}

// ---- interpolation ----------------------------------------------------------

GridInterpolator::GridInterpolator(Eigen::MatrixXd values, double hs, double ht)
    : v_(std::move(values)), hs_(hs), ht_(ht) {
    n_s_ = static_cast<int>(v_.rows()) - 1;
    n_theta_ = static_cast<int>(v_.cols());
}

double GridInterpolator::row_at(int i, int j) const {
    j = ((j % n_theta_) + n_theta_) % n_theta_;
    // quadratic ghost extrapolation keeps the edge cells third order and the
    // patched spline C1 across every interior knot
    if (i < 0) return 3.0 * v_(0, j) - 3.0 * v_(1, j) + v_(2, j);
    if (i > n_s_) return 3.0 * v_(n_s_, j) - 3.0 * v_(n_s_ - 1, j) + v_(n_s_ - 2, j);
    return v_(i, j);
}

namespace {

inline double cr_value(const double p[4], double u) {
    return p[1] + 0.5 * u *
                      (p[2] - p[0] +
                       u * (2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3] +
                            u * (3.0 * (p[1] - p[2]) + p[3] - p[0])));
}

inline double cr_deriv(const double p[4], double u) {
    return 0.5 * (p[2] - p[0]) + u * (2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3]) +
           1.5 * u * u * (3.0 * (p[1] - p[2]) + p[3] - p[0]);
}

}  // namespace

double GridInterpolator::value(double s, double theta) const {
    double tf = theta / ht_;
    double jf = std::floor(tf);
    int j0 = static_cast<int>(jf);
    double w = tf - jf;
    double sf = s / hs_;
    int i0 = std::clamp(static_cast<int>(std::floor(sf)), 0, n_s_ - 1);
    double u = sf - i0;

    double q[4];
    for (int r = 0; r < 4; ++r) {
        double p[4];
        for (int c = 0; c < 4; ++c) p[c] = row_at(i0 - 1 + r, j0 - 1 + c);
        q[r] = cr_value(p, w);
    }
    return cr_value(q, u);
}

void GridInterpolator::partials(double s, double theta, double& dv_ds, double& dv_dt) const {
    double tf = theta / ht_;
    double jf = std::floor(tf);
    int j0 = static_cast<int>(jf);
    double w = tf - jf;
    double sf = s / hs_;
    int i0 = std::clamp(static_cast<int>(std::floor(sf)), 0, n_s_ - 1);
    double u = sf - i0;

    double q[4], qd[4];
    for (int r = 0; r < 4; ++r) {
        double p[4];
        for (int c = 0; c < 4; ++c) p[c] = row_at(i0 - 1 + r, j0 - 1 + c);
        q[r] = cr_value(p, w);
        qd[r] = cr_deriv(p, w);
    }
    dv_ds = cr_deriv(q, u) / hs_;
    dv_dt = cr_value(qd, u) / ht_;
}

}  // namespace dtn
