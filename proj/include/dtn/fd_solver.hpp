#pragma once

// Conservative finite differences for div(gamma grad v) = 0 on disks and
// star-shaped 2D domains.
//
// The domain is mapped to the parameter rectangle (s, theta) in [0,1] x [0,2pi)
// by x(s, theta) = s rho(theta) (cos theta, sin theta). In these coordinates
// the equation becomes div_{(s,theta)} ( G grad_{(s,theta)} v ) = 0 with
// G = adj(J) gamma adj(J)^T / det(J), and a flux-form 9-point stencil with
// face-midpoint coefficients keeps the scheme conservative and second order.
// The polar center is a single unknown closed by flux balance over the first
// half-ring. One LU factorization serves any number of boundary data vectors.

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <memory>
#include <vector>

#include "dtn/conductivity.hpp"
#include "dtn/geometry.hpp"

namespace dtn {

class FdSolver {
  public:
    // n_theta angular nodes (uniform), n_s radial rings. gamma is sampled at
    // flux-face midpoints; the factorization happens here.
    FdSolver(const Domain& domain, const ConductivityField& gamma, int n_theta, int n_s);

    int n_theta() const { return n_theta_; }
    int n_s() const { return n_s_; }
    const std::vector<double>& thetas() const { return thetas_; }

    struct Solution {
        // v(i, j): ring i = 0 (center, replicated across j) .. n_s (boundary),
        // angle j. Row n_s holds the supplied data.
        Eigen::MatrixXd v;
        double residual = 0.0;  // ||A u - b||_inf / max(1, ||b||_inf)
    };

    // boundary_values[j] = f(theta_j), j = 0..n_theta-1.
    Solution solve(const Eigen::VectorXd& boundary_values) const;

  private:
    Domain domain_;
    int n_theta_, n_s_;
    double hs_, ht_;
    std::vector<double> thetas_;
    Eigen::SparseMatrix<double> A_;
    // columns of B_ scatter boundary data into the right-hand side
    Eigen::SparseMatrix<double> B_;
    std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

// C1 bicubic (Catmull-Rom) interpolation of an FdSolver solution over the
// parameter rectangle, periodic in theta, ghost-extrapolated at the radial
// edges. Exposes parameter-space partial derivatives for gradient recovery.
class GridInterpolator {
  public:
    GridInterpolator(Eigen::MatrixXd values, double hs, double ht);

    double value(double s, double theta) const;
    void partials(double s, double theta, double& dv_ds, double& dv_dt) const;

  private:
    Eigen::MatrixXd v_;  // (n_s + 1) x n_theta
    double hs_, ht_;
    int n_s_, n_theta_;

    double row_at(int i, int j) const;  // clamped/extrapolated fetch
};

}  // namespace dtn
