#include "dtn/transport.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <variant>

#include "dtn/error.hpp"

namespace dtn {
namespace {

// coth through tanh: tanh saturates at 1 for large arguments, no overflow.
double coth(double x) { return 1.0 / std::tanh(x); }

double annulus_eigenvalue(int k, double R, double R0) {
    const double g = std::log(R0 / R);
    if (k == 0) return 1.0 / (R * g);
    return (k / R) * coth(k * g);
}

double shell_eigenvalue(int l, double R, double R0) {
    const double q = std::pow(R / R0, 2 * l + 1);  // underflows to 0 harmlessly
    return ((l + 1) + l * q) / (R * (1.0 - q));
}

DtNMatrix diagonal_dtn(GridPtr grid, const Eigen::VectorXd& diag, std::string tag) {
    DtNMatrix op;
    op.grid = std::move(grid);
    op.entries = Eigen::MatrixXd::Zero(diag.size(), diag.size());
    op.entries.diagonal() = diag;
    op.asymmetry = 0.0;
    op.gamma_tag = std::move(tag);
    return op;
}

}  // namespace

void TransportParams::validate() const {
    if (!(D > 0.0) || !(C0 > 0.0) || !(W > 0.0))
        throw Error(ErrorKind::config, "transport parameters D, C0, W must be positive");
}

DtNMatrix annulus_dtn(GridPtr grid) {
    const auto* ann = std::get_if<Annulus>(&grid->domain);
    if (!ann) throw Error(ErrorKind::invalid_domain, "annulus_dtn needs an annulus grid");
    const double R = ann->inner_radius, R0 = ann->outer_radius;

    Eigen::VectorXd diag(grid->basis_size());
    for (int j = 0; j < diag.size(); ++j)
        diag[j] = annulus_eigenvalue(grid->degrees[j], R, R0);
    return diagonal_dtn(std::move(grid), diag, "annulus");
}

DtNMatrix shell_dtn(GridPtr grid, double outer_radius) {
    const auto* sph = std::get_if<Sphere>(&grid->domain);
    if (!sph) throw Error(ErrorKind::invalid_domain, "shell_dtn needs a sphere grid");
    const double R = sph->radius;
    if (!(outer_radius > R))
        throw Error(ErrorKind::config, "shell outer radius must exceed the sphere radius");

    Eigen::VectorXd diag(grid->basis_size());
    for (int j = 0; j < diag.size(); ++j)
        diag[j] = shell_eigenvalue(grid->degrees[j], R, outer_radius);
    return diagonal_dtn(std::move(grid), diag, "shell");
}

BoundaryFunction membrane_solve(const DtNMatrix& lambda, double mu) {
    if (!(mu >= 0.0)) throw Error(ErrorKind::config, "membrane_solve needs mu >= 0");
    const auto& g = *lambda.grid;
    const BoundaryFunction one = BoundaryFunction::constant(lambda.grid, 1.0);

    const int m = g.basis_size();
    Eigen::MatrixXd A = lambda.entries;
    A *= mu;
    A += Eigen::MatrixXd::Identity(m, m);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    if (ldlt.info() != Eigen::Success)
        throw Error(ErrorKind::numerical, "membrane resolvent factorization failed");
    Eigen::VectorXd u = ldlt.solve(one.coeffs);
    return BoundaryFunction::from_coeffs(lambda.grid, u);
}

BoundaryFunction local_flux(const DtNMatrix& lambda, double mu, double D, double C0) {
    if (!(D > 0.0) || !(C0 > 0.0))
        throw Error(ErrorKind::config, "local_flux needs positive D and C0");
    const BoundaryFunction u = membrane_solve(lambda, mu);
    Eigen::VectorXd phi = D * C0 * (lambda.entries * u.coeffs);
    return BoundaryFunction::from_coeffs(lambda.grid, phi);
}

double total_flux(const DtNMatrix& lambda, double mu, double D, double C0) {
    const BoundaryFunction phi = local_flux(lambda, mu, D, C0);
    const BoundaryFunction one = BoundaryFunction::constant(lambda.grid, 1.0);
    return inner_product(phi, one);
}

}  // namespace dtn
