#pragma once

// The DtN semigroup U(t) = e^{-t Lambda} through spectral calculus on an
// assembled spectrum, trace-norm diagnostics with a Weyl-tail estimate, and
// the exact Lax form on disks and balls with identity conductivity.

#include <Eigen/Dense>

#include "dtn/dtn_operator.hpp"

namespace dtn {

// U(t) f = sum_k e^{-t lambda_k} (phi_k, f) phi_k. t = 0 returns f unchanged;
// negative t is rejected (semigroup, not group).
BoundaryFunction evolve(const DtNSpectrum& spec, double t, const BoundaryFunction& f);

// Dense U(t) in basis coordinates; exactly the identity at t = 0.
Eigen::MatrixXd semigroup_matrix(const DtNSpectrum& spec, double t);

struct TraceNorm {
    double value = 0.0;      // sum of e^{-t lambda_k} over the resolved spectrum
    int truncation = 0;      // number of eigenvalues in the sum
    double tail_bound = 0.0; // Weyl-fit estimate of the unresolved remainder;
                             // NaN when the spectrum is too small to fit
};

// Trace norm of U(t) for t > 0. The operator is self-adjoint PSD, so singular
// values coincide with e^{-t lambda_k}; the tail field estimates what the
// discretization cut off, by integrating the fitted eigenvalue growth law.
TraceNorm trace_norm(const DtNSpectrum& spec, double t);

// Exact semigroup action for gamma = I on a circle or sphere of radius R:
// (S(t) f)(omega) = v_f(e^{-t/R} omega), with v_f the harmonic lift of f.
// Agrees with evolve() mode by mode: e^{-t deg/R} multipliers.
BoundaryFunction lax_apply(const BoundaryFunction& f, double t);

}  // namespace dtn
