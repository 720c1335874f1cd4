#pragma once

// Functions on a discretized boundary, carried simultaneously as node values
// and as coefficients in the grid's orthonormal basis. The two views agree on
// the resolved subspace; from_values projects anything rougher onto it.

#include <Eigen/Dense>

#include <cstdint>
#include <memory>

#include "dtn/geometry.hpp"

namespace dtn {

using GridPtr = std::shared_ptr<const BoundaryGrid>;

inline GridPtr make_grid(BoundaryGrid g) {
    return std::make_shared<const BoundaryGrid>(std::move(g));
}

struct BoundaryFunction {
    GridPtr grid;
    Eigen::VectorXd values;  // per node
    Eigen::VectorXd coeffs;  // in the orthonormal basis

    static BoundaryFunction from_values(GridPtr grid, Eigen::VectorXd values);
    static BoundaryFunction from_coeffs(GridPtr grid, Eigen::VectorXd coeffs);
    // f(node) = fn(node position)
    static BoundaryFunction from_callable(GridPtr grid, const std::function<double(const Vec3&)>& fn);
    static BoundaryFunction constant(GridPtr grid, double value);
    // Gaussian coefficients damped by (1 + degree)^{-decay}, degrees above
    // max_degree zeroed. Deterministic in seed.
    static BoundaryFunction random_bandlimited(GridPtr grid, int max_degree, double decay,
                                               std::uint64_t seed);
};

double l2_norm(const BoundaryFunction& f);
double inner_product(const BoundaryFunction& f, const BoundaryFunction& g);
double sup_norm(const BoundaryFunction& f);
double mean_value(const BoundaryFunction& f);  // (f, 1) / |boundary|

}  // namespace dtn
