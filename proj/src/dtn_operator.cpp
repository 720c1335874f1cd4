#include "dtn/dtn_operator.hpp"

#include <cmath>
#include <numbers>
#include <variant>

#include "dtn/error.hpp"
#include "dtn/parallel.hpp"

namespace dtn {

namespace {
constexpr double kPi = std::numbers::pi;
}

BoundaryFunction DtNMatrix::apply(const BoundaryFunction& f) const {
    if (f.grid != grid)
        throw Error(ErrorKind::config, "DtNMatrix::apply: function lives on a different grid");
    return BoundaryFunction::from_coeffs(grid, entries * f.coeffs);
}

double DtNMatrix::quadratic_form(const BoundaryFunction& f) const {
    if (f.grid != grid)
        throw Error(ErrorKind::config,
                    "DtNMatrix::quadratic_form: function lives on a different grid");
    return f.coeffs.dot(entries * f.coeffs);
}

DtNMatrix assemble_dtn(const LiftedBasis& basis) {
    const BoundaryGrid& g = *basis.grid();
    const int m = g.basis_size();
    const int n = static_cast<int>(g.n_nodes());

    // conormal of every lifted basis function at every node, along the
    // domain-outward normal (flip on the annulus, whose stored normals point
    // away from the origin while the domain lies outside the inner circle)
    const double sign = std::holds_alternative<Annulus>(g.domain) ? -1.0 : 1.0;
    Eigen::MatrixXd conormals(n, m);
    parallel_for(m, [&](int k) {
        const HarmonicField& v = basis.field(k);
        for (int j = 0; j < n; ++j)
            conormals(j, k) = sign * v.conormal(basis.gamma(), static_cast<std::size_t>(j));
    });

    Eigen::MatrixXd raw = g.basis.transpose() * g.weights.asDiagonal() * conormals;
    const double norm = raw.norm();
    const double skew = 0.5 * (raw - raw.transpose()).norm();
    if (skew > 1e-2 * std::max(1.0, norm))
        throw Error(ErrorKind::numerical,
                    "assemble_dtn: skew part " + std::to_string(skew) + " exceeds 1e-2 * " +
                        std::to_string(norm) + "; solve is under-resolved");

    DtNMatrix out;
    out.grid = basis.grid();
    out.entries = 0.5 * (raw + raw.transpose());
    out.asymmetry = 2.0 * skew;  // ||A - A^T||_F
    out.gamma_tag = basis.gamma().tag;
    return out;
}

DtNMatrix assemble_dtn(GridPtr grid, const ConductivityField& gamma, const LiftOptions& opts) {
    return assemble_dtn(LiftedBasis(std::move(grid), gamma, opts));
}

BoundaryFunction DtNSpectrum::eigenfunction(int k) const {
    if (k < 0 || k >= size())
        throw Error(ErrorKind::config, "eigenfunction index out of range");
    return BoundaryFunction::from_coeffs(grid, eigenvectors.col(k));
}

DtNSpectrum spectrum(const DtNMatrix& op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.entries);
    if (es.info() != Eigen::Success)
        throw Error(ErrorKind::numerical, "spectrum: eigensolver did not converge");
    DtNSpectrum out;
    out.grid = op.grid;
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = es.eigenvectors();
    return out;
}

WeylFit weyl_fit(const DtNSpectrum& spec, int k_lo, int k_hi) {
    if (k_lo < 1 || k_hi > spec.size() || k_hi - k_lo + 1 < 8)
        throw Error(ErrorKind::config, "weyl_fit: need at least 8 indices inside the spectrum");

    const int n = k_hi - k_lo + 1;
    Eigen::VectorXd lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
        double lam = spec.eigenvalues[k_lo - 1 + i];
        if (!(lam > 0.0))
            throw Error(ErrorKind::config,
                        "weyl_fit: eigenvalue " + std::to_string(k_lo + i) + " is not positive");
        lx[i] = std::log(static_cast<double>(k_lo + i));
        ly[i] = std::log(lam);
    }

    double mx = lx.mean(), my = ly.mean();
    Eigen::VectorXd cx = lx.array() - mx, cy = ly.array() - my;
    double slope = cx.dot(cy) / cx.squaredNorm();
    double intercept = my - slope * mx;

    WeylFit fit;
    fit.exponent = slope;
    // lambda = (k/C)^slope  =>  intercept = -slope log C
    fit.c_estimate = std::exp(-intercept / slope);
    fit.residual = std::sqrt((cy - slope * cx).squaredNorm() / n);
    return fit;
}

std::vector<double> localization_profile(const DtNSpectrum& spec, const ConductivityField& gamma,
                                         int k, const std::vector<double>& radius_fractions) {
    const BoundaryGrid& g = *spec.grid;
    const bool circle = std::holds_alternative<Circle>(g.domain);
    const bool ball = std::holds_alternative<Sphere>(g.domain);
    if (!circle && !ball)
        throw Error(ErrorKind::unsupported,
                    "localization_profile: explicit lift needs a circle or sphere");
    if (!gamma.is_constant_scalar)
        throw Error(ErrorKind::unsupported,
                    "localization_profile: explicit lift needs constant scalar conductivity");

    HarmonicField v = lift(spec.eigenfunction(k), gamma);
    const double R = circle ? std::get<Circle>(g.domain).radius : std::get<Sphere>(g.domain).radius;

    // fixed angular sample: dense uniform circle, or the grid's own nodes on the sphere
    std::vector<Vec3> dirs;
    if (circle) {
        const int n_ang = 2048;
        dirs.reserve(n_ang);
        for (int j = 0; j < n_ang; ++j) {
            double th = 2.0 * kPi * j / n_ang;
            dirs.push_back({std::cos(th), std::sin(th), 0.0});
        }
    } else {
        dirs.reserve(g.n_nodes());
        for (const Vec3& x : g.nodes) dirs.push_back(x / R);
    }

    std::vector<double> profile;
    profile.reserve(radius_fractions.size());
    for (double s : radius_fractions) {
        if (!(s > 0.0) || s > 1.0)
            throw Error(ErrorKind::config, "localization_profile: radius fractions lie in (0, 1]");
        double peak = 0.0;
        for (const Vec3& d : dirs) peak = std::max(peak, std::fabs(v.value(s * R * d)));
        profile.push_back(peak);
    }
    return profile;
}

}  // namespace dtn
