#include "dtn/conductivity.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dtn/error.hpp"

namespace dtn {

namespace {
constexpr double kPi = std::numbers::pi;
}

ConductivityField identity_conductivity() {
    ConductivityField g;
    g.eval = [](const Vec3&) { return Eigen::Matrix3d::Identity().eval(); };
    g.tag = "identity";
    g.declared_c1 = g.declared_c2 = 1.0;
    return g;
}

ConductivityField scalar_conductivity(double a) {
    if (!(a > 0.0)) throw Error(ErrorKind::config, "scalar conductivity must be positive");
    ConductivityField g;
    g.eval = [a](const Vec3&) { return (a * Eigen::Matrix3d::Identity()).eval(); };
    std::ostringstream tag;
    tag << "scalar(" << a << ")";
    g.tag = tag.str();
    g.is_identity = (a == 1.0);
    g.is_constant_scalar = true;
    g.scalar_value = a;
    g.declared_c1 = g.declared_c2 = a;
    return g;
}

ConductivityField diagonal_conductivity(double g1, double g2, double g3) {
    if (!(g1 > 0.0 && g2 > 0.0 && g3 > 0.0))
        throw Error(ErrorKind::config, "diagonal conductivity entries must be positive");
    ConductivityField g;
    Eigen::Matrix3d d = Eigen::Vector3d(g1, g2, g3).asDiagonal();
    g.eval = [d](const Vec3&) { return d; };
    std::ostringstream tag;
    tag << "diag(" << g1 << "," << g2 << "," << g3 << ")";
    g.tag = tag.str();
    g.is_constant_scalar = (g1 == g2 && g2 == g3);
    g.is_identity = g.is_constant_scalar && g1 == 1.0;
    g.scalar_value = g1;
    g.declared_c1 = std::min({g1, g2, g3});
    g.declared_c2 = std::max({g1, g2, g3});
    return g;
}

ConductivityField radial_scalar_conductivity(double base, double eps) {
    ConductivityField g;
    g.eval = [base, eps](const Vec3& x) {
        return ((base + eps * x.squaredNorm()) * Eigen::Matrix3d::Identity()).eval();
    };
    std::ostringstream tag;
    tag << "radial(" << base << "+" << eps << "|x|^2)";
    g.tag = tag.str();
    g.is_identity = g.is_constant_scalar = (eps == 0.0 && base == 1.0);
    g.scalar_value = base;
    return g;
}

ConductivityField anisotropic_conductivity(double eps) {
    ConductivityField g;
    g.eval = [eps](const Vec3& x) {
        return (Eigen::Matrix3d::Identity() + eps * x * x.transpose()).eval();
    };
    std::ostringstream tag;
    tag << "aniso(" << eps << ")";
    g.tag = tag.str();
    g.is_identity = g.is_constant_scalar = (eps == 0.0);
    g.scalar_value = 1.0;
    return g;
}

ConductivityField scalar_field_conductivity(std::function<double(const Vec3&)> a,
                                            std::string tag) {
    ConductivityField g;
    g.eval = [a = std::move(a)](const Vec3& x) {
        return (a(x) * Eigen::Matrix3d::Identity()).eval();
    };
    g.tag = std::move(tag);
    g.is_identity = g.is_constant_scalar = false;
    return g;
}

std::pair<double, double> validate_ellipticity(const ConductivityField& gamma,
                                               const Domain& domain, int samples_per_dim) {
    double c1 = std::numeric_limits<double>::max(), c2 = 0.0;
    int dim = domain_dim(domain);

    auto probe = [&](const Vec3& x) {
        Eigen::Matrix3d m = gamma(x);
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + m.cwiseAbs().maxCoeff()))
            throw Error(ErrorKind::numerical, "conductivity is not symmetric at a sample point");
        if (dim == 2) {
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m.topLeftCorner<2, 2>());
            c1 = std::min(c1, es.eigenvalues().minCoeff());
            c2 = std::max(c2, es.eigenvalues().maxCoeff());
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m);
            c1 = std::min(c1, es.eigenvalues().minCoeff());
            c2 = std::max(c2, es.eigenvalues().maxCoeff());
        }
    };

    int n = samples_per_dim;
    if (dim == 2) {
        // polar sampling including the boundary ring (s = 1) and center
        double r_in = 0.0, r_out = 1.0;
        if (auto* a = std::get_if<Annulus>(&domain)) {
            r_in = a->inner_radius;
            r_out = a->outer_radius;
        }
        for (int i = 0; i <= n; ++i) {
            for (int j = 0; j < 2 * n; ++j) {
                double th = kPi * j / n;
                double s = static_cast<double>(i) / n;
                Vec3 x;
                if (std::get_if<Annulus>(&domain)) {
                    double r = r_in + s * (r_out - r_in);
                    x = {r * std::cos(th), r * std::sin(th), 0.0};
                } else {
                    x = s * boundary_point_2d(domain, th);
                }
                probe(x);
            }
        }
    } else {
        double R = std::get<Sphere>(domain).radius;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                for (int k = 0; k < 2 * n; ++k) {
                    double r = R * i / n, th = kPi * j / n, ph = kPi * k / n;
                    probe({r * std::sin(th) * std::cos(ph), r * std::sin(th) * std::sin(ph),
                           r * std::cos(th)});
                }
    }

    if (!(c1 > 0.0))
        throw Error(ErrorKind::numerical, "conductivity loses ellipticity (min eigenvalue <= 0)");
    return {c1, c2};
}

Vec3 apply_matrix_exponential(const Eigen::Matrix3d& gamma, double t, const Vec3& v, int dim) {
    if (dim == 2) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(gamma.topLeftCorner<2, 2>());
        Eigen::Vector2d w = es.eigenvectors().transpose() * v.head<2>();
        w = (-t * es.eigenvalues().array()).exp().matrix().asDiagonal() * w;
        Vec3 out;
        out.head<2>() = es.eigenvectors() * w;
        out.z() = std::exp(-t * gamma(2, 2)) * v.z();
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(gamma);
    Eigen::Vector3d w = es.eigenvectors().transpose() * v;
    w = (-t * es.eigenvalues().array()).exp().matrix().asDiagonal() * w;
    return es.eigenvectors() * w;
}

Vec3 pullback_point(const InteriorBall& ball, const Vec3& nu, double s, double t,
                    const Eigen::Matrix3d& gamma_at_omega, int dim) {
    if (!(s > 0.0 && s <= 1.0))
        throw Error(ErrorKind::config, "pullback parameter s must lie in (0, 1]");
    if (t < 0.0) throw Error(ErrorKind::config, "pullback time must be nonnegative");
    double sr = s * ball.radius;
    Vec3 leg = sr * nu;
    return ball.scaled_center(s) + apply_matrix_exponential(gamma_at_omega, t / sr, leg, dim);
}

}  // namespace dtn
