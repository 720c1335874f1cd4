#pragma once

// Discretized Dirichlet-to-Neumann operator: the matrix of f |-> nu . gamma grad v_f
// in the orthonormal boundary basis, plus its spectral diagnostics.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "dtn/boundary_function.hpp"
#include "dtn/harmonic_lift.hpp"

namespace dtn {

struct DtNMatrix {
    GridPtr grid;
    Eigen::MatrixXd entries;  // symmetric, basis_size x basis_size
    double asymmetry = 0.0;   // Frobenius norm of the skew part before symmetrization
    std::string gamma_tag;

    BoundaryFunction apply(const BoundaryFunction& f) const;
    double quadratic_form(const BoundaryFunction& f) const;  // (f, Lambda f)
};

// Column k carries the basis expansion of the conormal derivative of the k-th
// lifted basis function, integrated against the basis with the grid weights.
// The conormal is taken along the domain's outward normal (on the annulus this
// is minus the stored inner-circle normal). The result is symmetrized as
// (A + A^T)/2; a skew part above 1e-2 of the norm signals an under-resolved
// solve and raises a numerical error.
DtNMatrix assemble_dtn(const LiftedBasis& basis);
DtNMatrix assemble_dtn(GridPtr grid, const ConductivityField& gamma,
                       const LiftOptions& opts = {});

struct DtNSpectrum {
    GridPtr grid;
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // orthonormal columns, basis coordinates

    int size() const { return static_cast<int>(eigenvalues.size()); }
    BoundaryFunction eigenfunction(int k) const;
};

DtNSpectrum spectrum(const DtNMatrix& op);

struct WeylFit {
    double exponent = 0.0;    // least-squares slope of log lambda_k vs log k
    double c_estimate = 0.0;  // constant in lambda_k ~ (k/C)^exponent
    double residual = 0.0;    // RMS fit residual
};

// Fit over 1-based eigenvalue indices k_lo..k_hi (inclusive); requires at
// least 8 points and strictly positive eigenvalues on the range.
WeylFit weyl_fit(const DtNSpectrum& spec, int k_lo, int k_hi);

// Interior decay of the lifted eigenfunction phi_k: for each radius fraction
// s in (0, 1], the max of |v_{phi_k}| over a fixed dense angular sample at
// radius s*R. Circle/sphere with constant scalar gamma only (explicit lift).
std::vector<double> localization_profile(const DtNSpectrum& spec, const ConductivityField& gamma,
                                         int k, const std::vector<double>& radius_fractions);

}  // namespace dtn
