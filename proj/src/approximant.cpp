#include "dtn/approximant.hpp"

#include <cmath>

#include "dtn/error.hpp"

namespace dtn {

double operator_norm(const Eigen::MatrixXd& a) {
    return Eigen::BDCSVD<Eigen::MatrixXd>(a).singularValues()[0];
}

double nuclear_norm(const Eigen::MatrixXd& a) {
    return Eigen::BDCSVD<Eigen::MatrixXd>(a).singularValues().sum();
}

ApproximantFamily::ApproximantFamily(std::shared_ptr<const LiftedBasis> basis, double s)
    : basis_(std::move(basis)), s_(s) {
    if (!(s_ > 0.0) || s_ > 1.0)
        throw Error(ErrorKind::config, "ApproximantFamily: scale s must lie in (0, 1]");
    const BoundaryGrid& g = *basis_->grid();
    balls_.reserve(g.n_nodes());
    gamma_at_nodes_.reserve(g.n_nodes());
    for (const Vec3& x : g.nodes) {
        balls_.push_back(interior_ball(g.domain, x));
        gamma_at_nodes_.push_back(basis_->gamma()(x));
    }
}

ApproximantFamily::ApproximantFamily(GridPtr grid, ConductivityField gamma, LiftOptions opts,
                                     double s)
    : ApproximantFamily(std::make_shared<LiftedBasis>(std::move(grid), std::move(gamma), opts),
                        s) {}

const Eigen::MatrixXd& ApproximantFamily::matrix(double t) const {
    if (t < 0.0) throw Error(ErrorKind::config, "ApproximantFamily: t must be >= 0");
    if (auto it = cache_.find(t); it != cache_.end()) return it->second;

    const BoundaryGrid& g = *basis_->grid();
    const int n = static_cast<int>(g.n_nodes());
    const int m = g.basis_size();

    Eigen::MatrixXd nodal(n, m);
    for (int j = 0; j < n; ++j) {
        Vec3 p = pullback_point(balls_[static_cast<std::size_t>(j)],
                                g.normals[static_cast<std::size_t>(j)], s_, t,
                                gamma_at_nodes_[static_cast<std::size_t>(j)], g.dim);
        for (int k = 0; k < m; ++k) nodal(j, k) = basis_->field(k).value(p);
    }
    Eigen::MatrixXd v = g.basis.transpose() * g.weights.asDiagonal() * nodal;
    return cache_.emplace(t, std::move(v)).first->second;
}

BoundaryFunction ApproximantFamily::v_step(const BoundaryFunction& f, double t) const {
    if (f.grid != basis_->grid())
        throw Error(ErrorKind::config, "v_step: function lives on a different grid");
    return BoundaryFunction::from_coeffs(f.grid, matrix(t) * f.coeffs);
}

BoundaryFunction ApproximantFamily::chernoff_product(const BoundaryFunction& f, double t,
                                                     int n) const {
    if (n < 1) throw Error(ErrorKind::config, "chernoff_product: n must be >= 1");
    if (!(t > 0.0)) throw Error(ErrorKind::config, "chernoff_product: t must be > 0");
    if (f.grid != basis_->grid())
        throw Error(ErrorKind::config, "chernoff_product: function lives on a different grid");
    const Eigen::MatrixXd& v = matrix(t / n);
    Eigen::VectorXd c = f.coeffs;
    for (int i = 0; i < n; ++i) c = v * c;
    return BoundaryFunction::from_coeffs(f.grid, std::move(c));
}

Eigen::MatrixXd ApproximantFamily::chernoff_matrix(double t, int n) const {
    if (n < 1) throw Error(ErrorKind::config, "chernoff_matrix: n must be >= 1");
    if (!(t > 0.0)) throw Error(ErrorKind::config, "chernoff_matrix: t must be > 0");
    const Eigen::MatrixXd& v = matrix(t / n);
    Eigen::MatrixXd acc = v;
    for (int i = 1; i < n; ++i) acc = v * acc;
    return acc;
}

std::vector<ChernoffEntry> convergence_report(const ApproximantFamily& fam,
                                              const DtNSpectrum& spec, double t,
                                              const std::vector<int>& n_list) {
    if (spec.grid != fam.grid())
        throw Error(ErrorKind::config, "convergence_report: spectrum from a different grid");
    if (spec.size() > 2048)
        throw Error(ErrorKind::config, "convergence_report: basis too large to materialize");
    if (!(t > 0.0)) throw Error(ErrorKind::config, "convergence_report: t must be > 0");

    Eigen::MatrixXd u_full = semigroup_matrix(spec, t);
    std::vector<ChernoffEntry> out;
    out.reserve(n_list.size());
    for (int n : n_list) {
        if (n < 2) throw Error(ErrorKind::config, "convergence_report: every n must be >= 2");
        ChernoffEntry e;
        e.n = n;
        e.k_n = n / 2;
        e.m_n = (n + 1) / 2;

        const Eigen::MatrixXd& v = fam.matrix(t / n);
        Eigen::MatrixXd vk = v;
        for (int i = 1; i < e.k_n; ++i) vk = v * vk;
        Eigen::MatrixXd vm = vk;
        if (e.m_n > e.k_n) vm = v * vm;  // m_n is k_n or k_n + 1

        Eigen::MatrixXd delta = vm * vk - u_full;
        e.op_err = operator_norm(delta);
        e.trace_err = nuclear_norm(delta);

        double step = t / n;
        Eigen::MatrixXd uk = semigroup_matrix(spec, e.k_n * step);
        Eigen::MatrixXd um = semigroup_matrix(spec, e.m_n * step);
        double um_trace = nuclear_norm(um);
        e.term1 = nuclear_norm(vm) * operator_norm(vk - uk);
        e.term2 = operator_norm(vm - um) * nuclear_norm(uk);
        e.ginibre_ratio = nuclear_norm(vm) / um_trace;
        out.push_back(std::move(e));
    }
    return out;
}

WFactorResult w_factor(const ApproximantFamily& fam, const DtNSpectrum& spec, double t, int K) {
    if (spec.grid != fam.grid())
        throw Error(ErrorKind::config, "w_factor: spectrum from a different grid");
    if (t < 0.0) throw Error(ErrorKind::config, "w_factor: t must be >= 0");
    if (K < 1 || K > spec.size())
        throw Error(ErrorKind::config, "w_factor: K outside the spectrum");

    WFactorResult out;
    out.k_used = K;
    while (out.k_used > 0 && t * spec.eigenvalues[out.k_used - 1] > 30.0) --out.k_used;

    Eigen::VectorXd d = Eigen::VectorXd::Ones(spec.size());
    for (int i = 0; i < out.k_used; ++i) d[i] = std::exp(t * spec.eigenvalues[i]);
    out.matrix = fam.matrix(t) * (spec.eigenvectors * d.asDiagonal() *
                                  spec.eigenvectors.transpose());
    out.norm = operator_norm(out.matrix);
    return out;
}

double telescopic_check(const ApproximantFamily& fam, const DtNSpectrum& spec, double t, int n) {
    if (n < 2) throw Error(ErrorKind::config, "telescopic_check: n must be >= 2");
    if (!(t > 0.0)) throw Error(ErrorKind::config, "telescopic_check: t must be > 0");
    if (spec.grid != fam.grid())
        throw Error(ErrorKind::config, "telescopic_check: spectrum from a different grid");

    const Eigen::MatrixXd v = fam.matrix(t / n);
    const Eigen::MatrixXd u = semigroup_matrix(spec, t / n);
    const int m = static_cast<int>(v.rows());

    std::vector<Eigen::MatrixXd> vpow(static_cast<std::size_t>(n)),
        upow(static_cast<std::size_t>(n));
    vpow[0] = Eigen::MatrixXd::Identity(m, m);
    upow[0] = Eigen::MatrixXd::Identity(m, m);
    for (int i = 1; i < n; ++i) {
        vpow[static_cast<std::size_t>(i)] = v * vpow[static_cast<std::size_t>(i - 1)];
        upow[static_cast<std::size_t>(i)] = u * upow[static_cast<std::size_t>(i - 1)];
    }
    Eigen::MatrixXd lhs = v * vpow[static_cast<std::size_t>(n - 1)] -
                          u * upow[static_cast<std::size_t>(n - 1)];
    Eigen::MatrixXd diff = v - u;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < n; ++j)
        rhs += vpow[static_cast<std::size_t>(n - 1 - j)] * diff * upow[static_cast<std::size_t>(j)];
    return (lhs - rhs).norm();
}

}  // namespace dtn
