#pragma once

// The one-step approximating family V(t): lift the boundary data, pull every
// boundary node back along the matrix-exponential flow of gamma into a tangent
// interior ball, and read the lifted field there. Chernoff products (V(t/n))^n
// approximate the DtN semigroup; the family itself is not a semigroup for
// spatially varying gamma, which the diagnostics here quantify.

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <vector>

#include "dtn/dtn_operator.hpp"
#include "dtn/semigroup.hpp"

namespace dtn {

double operator_norm(const Eigen::MatrixXd& a);  // largest singular value
double nuclear_norm(const Eigen::MatrixXd& a);   // sum of singular values

class ApproximantFamily {
  public:
    // s in (0, 1] scales the tangent interior ball (s = 1: the largest one).
    // Interior-ball data and gamma values at the nodes are computed once here.
    ApproximantFamily(std::shared_ptr<const LiftedBasis> basis, double s = 1.0);
    ApproximantFamily(GridPtr grid, ConductivityField gamma, LiftOptions opts = {},
                      double s = 1.0);

    // V(t) in basis coordinates, cached per t. V(0) reproduces the identity
    // through the full lift-pullback-analyze loop (no special casing).
    const Eigen::MatrixXd& matrix(double t) const;

    BoundaryFunction v_step(const BoundaryFunction& f, double t) const;
    BoundaryFunction chernoff_product(const BoundaryFunction& f, double t, int n) const;
    Eigen::MatrixXd chernoff_matrix(double t, int n) const;

    const LiftedBasis& basis() const { return *basis_; }
    const GridPtr& grid() const { return basis_->grid(); }
    double scale() const { return s_; }

  private:
    std::shared_ptr<const LiftedBasis> basis_;
    double s_;
    std::vector<InteriorBall> balls_;
    std::vector<Eigen::Matrix3d> gamma_at_nodes_;
    mutable std::map<double, Eigen::MatrixXd> cache_;  // single-threaded use
};

struct ChernoffEntry {
    int n = 0;
    double op_err = 0.0;     // ||(V(t/n))^n - U(t)||, spectral norm
    double trace_err = 0.0;  // same difference, nuclear norm
    int k_n = 0, m_n = 0;    // n/2 split, k_n + m_n = n
    // trace-norm bound pieces: ||V^m||_1 ||V^k - U(kt/n)|| and
    // ||V^m - U(mt/n)|| ||U(kt/n)||_1; their sum dominates trace_err
    double term1 = 0.0, term2 = 0.0;
    double ginibre_ratio = 0.0;  // ||V^m||_1 / ||U(mt/n)||_1, reported only
};

// Chernoff convergence probe: materializes (V(t/n))^n against U(t) from the
// assembled spectrum for each n (all n >= 2) and reports both norms plus the
// telescoping bound split. spec must come from the same grid.
std::vector<ChernoffEntry> convergence_report(const ApproximantFamily& fam,
                                              const DtNSpectrum& spec, double t,
                                              const std::vector<int>& n_list);

struct WFactorResult {
    Eigen::MatrixXd matrix;  // W = V(t) e^{+t Lambda_K}, rank-K inverse flow
    double norm = 0.0;       // spectral norm of W
    int k_used = 0;          // truncation after the overflow cap t lambda <= 30
};

// Probe of the factorization V(t) = W(t) U(t): multiply V(t) by the inverse
// semigroup on the lowest K modes (identity on the rest) and report ||W||.
WFactorResult w_factor(const ApproximantFamily& fam, const DtNSpectrum& spec, double t, int K);

// Frobenius residual of the algebraic identity
// V^n - U^n = sum_{j=0}^{n-1} V^{n-1-j} (V - U) U^j  with V = V(t/n), U = U(t/n).
double telescopic_check(const ApproximantFamily& fam, const DtNSpectrum& spec, double t, int n);

}  // namespace dtn
