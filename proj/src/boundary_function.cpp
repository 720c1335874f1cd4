#include "dtn/boundary_function.hpp"

#include <random>

#include "dtn/error.hpp"
#include "dtn/kernels.hpp"

namespace dtn {

BoundaryFunction BoundaryFunction::from_values(GridPtr grid, Eigen::VectorXd values) {
    if (!grid) throw Error(ErrorKind::config, "boundary function needs a grid");
    if (values.size() != static_cast<Eigen::Index>(grid->n_nodes()))
        throw Error(ErrorKind::config, "value vector does not match the grid size");
    BoundaryFunction f;
    f.grid = std::move(grid);
    // analysis: c = B^T W v, one weighted dot per basis column
    const auto& B = f.grid->basis;
    f.coeffs.resize(B.cols());
    Eigen::VectorXd wv(values.size());
    kernels::hadamard(wv.data(), values.data(), f.grid->weights.data(),
                      static_cast<std::size_t>(values.size()));
    for (Eigen::Index k = 0; k < B.cols(); ++k)
        f.coeffs[k] = kernels::dot(B.col(k).data(), wv.data(), static_cast<std::size_t>(wv.size()));
    f.values = std::move(values);
    return f;
}

BoundaryFunction BoundaryFunction::from_coeffs(GridPtr grid, Eigen::VectorXd coeffs) {
    if (!grid) throw Error(ErrorKind::config, "boundary function needs a grid");
    if (coeffs.size() != grid->basis.cols())
        throw Error(ErrorKind::config, "coefficient vector does not match the basis size");
    BoundaryFunction f;
    f.grid = std::move(grid);
    f.values = f.grid->basis * coeffs;  // synthesis
    f.coeffs = std::move(coeffs);
    return f;
}

BoundaryFunction BoundaryFunction::from_callable(GridPtr grid,
                                                 const std::function<double(const Vec3&)>& fn) {
    Eigen::VectorXd v(grid->n_nodes());
    for (std::size_t j = 0; j < grid->n_nodes(); ++j) v[j] = fn(grid->nodes[j]);
    return from_values(std::move(grid), std::move(v));
}

BoundaryFunction BoundaryFunction::constant(GridPtr grid, double value) {
    Eigen::VectorXd v = Eigen::VectorXd::Constant(grid->n_nodes(), value);
    return from_values(std::move(grid), std::move(v));
}

BoundaryFunction BoundaryFunction::random_bandlimited(GridPtr grid, int max_degree, double decay,
                                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd c(grid->basis.cols());
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        int deg = grid->degrees[k];
        // draw unconditionally to keep the stream independent of max_degree
        double g = gauss(rng);
        c[k] = (deg <= max_degree) ? g * std::pow(1.0 + deg, -decay) : 0.0;
    }
    return from_coeffs(std::move(grid), std::move(c));
}

double l2_norm(const BoundaryFunction& f) {
    double s = kernels::wdot(f.values.data(), f.values.data(), f.grid->weights.data(),
                             static_cast<std::size_t>(f.values.size()));
    return std::sqrt(std::max(0.0, s));
}

double inner_product(const BoundaryFunction& f, const BoundaryFunction& g) {
    if (f.grid.get() != g.grid.get())
        throw Error(ErrorKind::config, "inner product requires functions on the same grid");
    return kernels::wdot(f.values.data(), g.values.data(), f.grid->weights.data(),
                         static_cast<std::size_t>(f.values.size()));
}

double sup_norm(const BoundaryFunction& f) {
    return kernels::max_abs(f.values.data(), static_cast<std::size_t>(f.values.size()));
}

double mean_value(const BoundaryFunction& f) {
    double area = kernels::sum(f.grid->weights.data(), static_cast<std::size_t>(f.grid->weights.size()));
    double s = kernels::dot(f.values.data(), f.grid->weights.data(),
                            static_cast<std::size_t>(f.values.size()));
    return s / area;
}

}  // namespace dtn
