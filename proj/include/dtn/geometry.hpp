#pragma once

// Model domains and their boundary discretizations.
//
// Every boundary grid carries an orthonormal basis of the resolved subspace of
// L2(boundary), sampled at the quadrature nodes, so that analysis/synthesis of
// boundary functions are plain matrix-vector products and the discrete Gram
// matrix is the identity to machine precision.

#include <Eigen/Dense>

#include <string>
#include <variant>
#include <vector>

namespace dtn {

using Vec3 = Eigen::Vector3d;

struct Circle {
    double radius = 1.0;
};

struct Sphere {
    double radius = 1.0;
};

// Boundary r = rho(theta) with rho a positive trigonometric polynomial,
//   rho(theta) = c[0] + sum_k ( c[2k-1] cos(k theta) + c[2k] sin(k theta) ).
// Storing coefficients rather than a callable keeps derivatives exact, which
// the normal/tangent fields and curvature-limited interior balls rely on.
struct StarShaped2D {
    std::vector<double> rho_coeffs;

    double rho(double theta) const;
    double drho(double theta) const;
    double ddrho(double theta) const;
};

// Concentric annulus R_inner < |x| < R_outer. Grids live on the inner circle,
// which is where the transport boundary condition sits; the outer circle is an
// implicit homogeneous Dirichlet wall.
struct Annulus {
    double inner_radius = 1.0;
    double outer_radius = 2.0;
};

using Domain = std::variant<Circle, Sphere, StarShaped2D, Annulus>;

int domain_dim(const Domain& d);          // ambient dimension: 2 or 3
std::string domain_tag(const Domain& d);  // short human-readable descriptor

struct BoundaryGrid {
    Domain domain;
    int dim = 2;
    int resolution = 0;  // N for 2D domains, L for the sphere

    std::vector<Vec3> nodes;     // z = 0 in 2D
    std::vector<Vec3> normals;   // unit outward
    std::vector<Vec3> tangents;  // unit, 2D only (empty on the sphere)
    Eigen::VectorXd weights;     // quadrature weights; sum = boundary measure

    std::vector<double> thetas;          // polar angle per node
    std::vector<double> phis;            // sphere only: azimuth per node
    int n_theta = 0, n_phi = 0;          // sphere grid shape, nodes row-major

    // basis(j, k) = b_k at node j. Columns are L2-orthonormal under `weights`.
    Eigen::MatrixXd basis;
    std::vector<int> degrees;  // per-column mode degree: |k| (2D) or l (sphere)
    int max_degree = 0;

    int basis_size() const { return static_cast<int>(basis.cols()); }
    std::size_t n_nodes() const { return nodes.size(); }
};

// resolution = number of nodes N (2D domains, N >= 4) or the harmonic cutoff L
// (sphere, (L+1) x (2L+1) Gauss-Legendre x equiangular grid, L >= 1).
// 2D bases resolve wavenumbers |k| <= floor((N-1)/2); the sphere basis holds
// all (L+1)^2 harmonics of degree <= L.
BoundaryGrid discretize_boundary(const Domain& domain, int resolution);

// Largest ball contained in the domain and tangent to the boundary at omega,
// plus the shrunken balls used by the interior-parameter family.
struct InteriorBall {
    Vec3 contact;  // omega
    Vec3 center;   // ball center
    double radius = 0.0;

    Vec3 scaled_center(double s) const { return s * center + (1.0 - s) * contact; }
    double scaled_radius(double s) const { return s * radius; }
};

// omega must lie on the boundary (checked to 1e-8 relative). Circle/sphere are
// analytic (the full domain is the tangent ball); star-shaped domains search by
// bisection on a ball-containment predicate. Annuli have no interior tangent
// ball on the inner circle and are rejected.
InteriorBall interior_ball(const Domain& domain, const Vec3& omega);

// ---- shared numerical helpers (exposed for tests) --------------------------

// Gauss-Legendre rule on [-1, 1], exact for polynomials of degree 2n-1.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Real orthonormal spherical harmonics on the unit sphere, all degrees l <= L,
// written to out[(L+1)^2] with layout index = l*(l+1) + m, m in [-l, l]
// (m > 0 ~ cos(m phi), m < 0 ~ sin(|m| phi)).
void real_spherical_harmonics(int L, double theta, double phi, double* out);

// Unit outward normal of a 2D domain at polar angle theta.
Vec3 boundary_normal_2d(const Domain& domain, double theta);

// Boundary point of a 2D domain at polar angle theta.
Vec3 boundary_point_2d(const Domain& domain, double theta);

// The 2D basis column formulas at an arbitrary angle (not just grid nodes):
// values of all b_k(theta) and, separately, their derivatives with respect to
// arclength. Both write grid.basis_size() entries.
void eval_basis_2d(const BoundaryGrid& grid, double theta, double* values);
void eval_basis_arclength_deriv_2d(const BoundaryGrid& grid, double theta, double* derivs);

}  // namespace dtn
