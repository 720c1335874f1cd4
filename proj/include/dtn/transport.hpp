#pragma once

// Steady Laplacian transport toward a semipermeable membrane: the annular DtN
// operator with a grounded outer source surface, the mixed boundary resolvent
// (I + mu Lambda) u = 1, and the local/total particle flux.

#include "dtn/dtn_operator.hpp"

namespace dtn {

struct TransportParams {
    double D = 1.0;   // diffusion coefficient
    double C0 = 1.0;  // source concentration
    double W = 1.0;   // membrane permeability rate

    double mu() const { return D / W; }
    void validate() const;  // all three strictly positive
};

// DtN operator of the annulus R < |x| < R0 on the inner circle, isotropic
// bulk, data on r = R, zero at r = R0; Lambda f = -du/dr at r = R. Diagonal
// in the Fourier basis with entries from the exact radial two-point solves:
// lambda_0 = 1/(R ln(R0/R)), lambda_k = (k/R) coth(k ln(R0/R)). PSD, and
// Lambda 1 != 0 (the grounded outer rim breaks the constant kernel).
DtNMatrix annulus_dtn(GridPtr grid);

// Spherical-shell variant on a sphere grid (radius R), grounded at R0 > R:
// radial laws r^l and r^{-(l+1)} give lambda_l = ((l+1) + l q)/(R (1-q)) with
// q = (R/R0)^{2l+1}.
DtNMatrix shell_dtn(GridPtr grid, double outer_radius);

// Membrane concentration: solve (I + mu Lambda) u = 1. u is in (0, 1] nodewise
// for mu >= 0.
BoundaryFunction membrane_solve(const DtNMatrix& lambda, double mu);

// Local flux phi = D C0 Lambda (I + mu Lambda)^{-1} 1, nonnegative.
BoundaryFunction local_flux(const DtNMatrix& lambda, double mu, double D, double C0);

// Total flux Phi = (phi, 1) by boundary quadrature; strictly decreasing in mu.
double total_flux(const DtNMatrix& lambda, double mu, double D, double C0);

}  // namespace dtn
