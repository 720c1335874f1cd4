#pragma once

// Harmonic extension of boundary data: solve div(gamma grad v) = 0 inside the
// domain with v = f on the boundary, and expose the field for interior
// evaluation, gradients, traces, and boundary conormal derivatives.
//
// Two solution paths:
//  * spectral: circle/sphere/annulus with constant scalar gamma, where every
//    basis mode has an explicit radial law (exact up to roundoff);
//  * finite differences: disks and star-shaped domains with general gamma,
//    through FdSolver plus C1 bicubic interpolation.

#include <Eigen/Dense>

#include <memory>
#include <vector>

#include "dtn/boundary_function.hpp"
#include "dtn/conductivity.hpp"
#include "dtn/fd_solver.hpp"

namespace dtn {

namespace detail {
struct FieldBuilder;
}

struct LiftOptions {
    bool force_fd = false;  // take the FD path even where a spectral law exists
    int fd_factor = 8;      // FD angular nodes per boundary node
    int fd_radial_divisor = 4;         // n_s = n_theta / divisor
    double normal_step_factor = 0.25;  // conormal sampling step, in radial cells
};

class HarmonicField {
  public:
    enum class Backend { spectral, annulus, fd };

    // Value at an interior (or boundary) point; points outside the closure are
    // rejected. FD-backed fields interpolate to second order.
    double value(const Vec3& x) const;

    // Gradient: analytic for spectral 2D/annulus backends, bicubic partials
    // plus the coordinate chain rule for FD, small central differences on the
    // sphere's angular part.
    Vec3 gradient(const Vec3& x) const;

    // Boundary values as a BoundaryFunction on the originating grid. Matches
    // the lifted data on the resolved subspace.
    BoundaryFunction trace() const;

    // nu . gamma grad v at boundary node `node` of the originating grid,
    // one-sided differencing into the domain for FD fields, exact mode sums
    // for spectral ones. gamma must be the field the lift was built with.
    double conormal(const ConductivityField& gamma, std::size_t node) const;

    Backend backend() const { return backend_; }
    double residual() const { return residual_; }
    const GridPtr& grid() const { return grid_; }

  private:
    friend struct detail::FieldBuilder;

    HarmonicField() = default;

    Backend backend_ = Backend::spectral;
    GridPtr grid_;
    Eigen::VectorXd coeffs_;  // boundary data in the grid basis
    double residual_ = 0.0;

    // spectral/annulus parameters
    double R_ = 1.0, R_out_ = 0.0;
    bool sphere_ = false;

    // FD parameters
    std::shared_ptr<const GridInterpolator> interp_;
    double hs_ = 0.0;
    double nd_factor_ = 0.25;

    double annulus_radial(int degree, double r, bool deriv) const;
};

// Solve the Dirichlet problem for f's boundary data. Routing: circle/sphere
// with constant scalar gamma go spectral (force_fd overrides for 2D), annuli
// require constant scalar gamma, anything else 2D goes to finite differences.
// Spheres with variable gamma are not supported.
HarmonicField lift(const BoundaryFunction& f, const ConductivityField& gamma,
                   const LiftOptions& opts = {});

// Lifts of all basis columns of one grid, sharing a single FD factorization.
// This is the workhorse behind operator assembly and the approximant family.
class LiftedBasis {
  public:
    LiftedBasis(GridPtr grid, ConductivityField gamma, LiftOptions opts = {});

    int size() const { return static_cast<int>(fields_.size()); }
    const HarmonicField& field(int k) const { return fields_[static_cast<std::size_t>(k)]; }
    bool spectral() const { return spectral_; }
    const GridPtr& grid() const { return grid_; }
    const ConductivityField& gamma() const { return gamma_; }
    const LiftOptions& options() const { return opts_; }

  private:
    GridPtr grid_;
    ConductivityField gamma_;
    LiftOptions opts_;
    bool spectral_ = false;
    std::vector<HarmonicField> fields_;
};

// Dirichlet energy integral grad v . gamma grad v over the domain, by midpoint
// quadrature in mapped coordinates (n_r x n_t cells; the sphere uses a
// Gauss-Legendre colatitude rule). Independent of how v was produced.
double dirichlet_energy(const HarmonicField& v, const ConductivityField& gamma, int n_r = 200,
                        int n_t = 400);

}  // namespace dtn
