#pragma once

// Conductivity tensors gamma(x): symmetric positive definite fields on the
// domain closure. Stored padded to 3x3 with an identity tail so 2D and 3D
// domains share one representation; every consumer only touches the leading
// dim x dim block.

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "dtn/geometry.hpp"

namespace dtn {

struct ConductivityField {
    std::function<Eigen::Matrix3d(const Vec3&)> eval;
    std::string tag = "identity";

    // Fast-path flags the spectral solver and the approximant family key on.
    bool is_identity = true;
    bool is_constant_scalar = true;  // gamma == scalar_value * I everywhere
    double scalar_value = 1.0;

    std::optional<double> declared_c1, declared_c2;

    Eigen::Matrix3d operator()(const Vec3& x) const { return eval(x); }
};

ConductivityField identity_conductivity();
ConductivityField scalar_conductivity(double a);
ConductivityField diagonal_conductivity(double g1, double g2, double g3 = 1.0);
// scalar field a(x) = base + eps |x|^2 times the identity
ConductivityField radial_scalar_conductivity(double base, double eps);
// gamma(x) = I + eps x x^T; eigenvalues (1 + eps |x|^2, 1, 1), smooth and
// genuinely anisotropic away from the origin
ConductivityField anisotropic_conductivity(double eps);
// arbitrary scalar field a(x) I
ConductivityField scalar_field_conductivity(std::function<double(const Vec3&)> a, std::string tag);

// Sample the field over the domain closure, verify symmetry and uniform
// ellipticity, and return the observed (c1, c2) = (min, max eigenvalue).
// Throws ErrorKind::numerical on a violation.
std::pair<double, double> validate_ellipticity(const ConductivityField& gamma,
                                               const Domain& domain, int samples_per_dim = 32);

// exp(-t * gamma) v through an eigendecomposition of the leading dim x dim
// block. gamma must be symmetric; t may be any real.
Vec3 apply_matrix_exponential(const Eigen::Matrix3d& gamma, double t, const Vec3& v, int dim);

// The contraction point the approximant family evaluates harmonic extensions
// at: scaled ball center + exp(-(t / (s r)) gamma(omega)) applied to the
// normal leg s r nu. s in (0, 1], t >= 0.
Vec3 pullback_point(const InteriorBall& ball, const Vec3& nu, double s, double t,
                    const Eigen::Matrix3d& gamma_at_omega, int dim);

}  // namespace dtn
