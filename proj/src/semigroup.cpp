#include "dtn/semigroup.hpp"

#include <cmath>
#include <limits>
#include <variant>

#include "dtn/error.hpp"
#include "dtn/kernels.hpp"

namespace dtn {

namespace {

Eigen::VectorXd multipliers(const DtNSpectrum& spec, double t) {
    return (-t * spec.eigenvalues.array()).exp().matrix();
}

// integral over [n, infinity) of e^{-t (k/c)^p} dk, by composite Simpson over
// the range that matters (the integrand decays like e^{-u} in u = t (k/c)^p)
double tail_integral(double n, double t, double p, double c) {
    double u0 = t * std::pow(n / c, p);
    double k1 = c * std::pow((u0 + 46.0) / t, 1.0 / p);
    int m = 4096;  // even
    double h = (k1 - n) / m;
    auto g = [&](double k) { return std::exp(-t * std::pow(k / c, p)); };
    double acc = g(n) + g(k1);
    for (int i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * g(n + i * h);
    return acc * h / 3.0;
}

}  // namespace

BoundaryFunction evolve(const DtNSpectrum& spec, double t, const BoundaryFunction& f) {
    if (t < 0.0) throw Error(ErrorKind::config, "evolve: t must be >= 0");
    if (f.grid != spec.grid)
        throw Error(ErrorKind::config, "evolve: function lives on a different grid");
    if (t == 0.0) return f;

    Eigen::VectorXd modal = spec.eigenvectors.transpose() * f.coeffs;
    Eigen::VectorXd mult = multipliers(spec, t);
    Eigen::VectorXd damped(modal.size());
    kernels::hadamard(damped.data(), modal.data(), mult.data(),
                      static_cast<std::size_t>(modal.size()));
    return BoundaryFunction::from_coeffs(f.grid, spec.eigenvectors * damped);
}

Eigen::MatrixXd semigroup_matrix(const DtNSpectrum& spec, double t) {
    if (t < 0.0) throw Error(ErrorKind::config, "semigroup_matrix: t must be >= 0");
    const int m = spec.size();
    if (t == 0.0) return Eigen::MatrixXd::Identity(m, m);
    return spec.eigenvectors * multipliers(spec, t).asDiagonal() *
           spec.eigenvectors.transpose();
}

TraceNorm trace_norm(const DtNSpectrum& spec, double t) {
    if (!(t > 0.0)) throw Error(ErrorKind::config, "trace_norm: t must be > 0");
    if (spec.size() > 0 && spec.eigenvalues[0] < -1e-8)
        throw Error(ErrorKind::numerical,
                    "trace_norm: negative eigenvalue indicates a failed assembly");

    TraceNorm out;
    out.truncation = spec.size();
    out.value = multipliers(spec, t).sum();

    // fit the growth law on the upper half of the positive spectrum
    int n = spec.size();
    int first_pos = 0;
    while (first_pos < n && !(spec.eigenvalues[first_pos] > 0.0)) ++first_pos;
    int k_lo = std::max(first_pos + 1, n / 2 + 1);  // 1-based
    if (n - k_lo + 1 >= 8) {
        WeylFit fit = weyl_fit(spec, k_lo, n);
        double p = std::min(std::max(fit.exponent, 0.05), 5.0);
        out.tail_bound = tail_integral(static_cast<double>(n), t, p, fit.c_estimate);
    } else {
        out.tail_bound = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

BoundaryFunction lax_apply(const BoundaryFunction& f, double t) {
    if (t < 0.0) throw Error(ErrorKind::config, "lax_apply: t must be >= 0");
    const BoundaryGrid& g = *f.grid;
    double R = 0.0;
    if (auto* c = std::get_if<Circle>(&g.domain))
        R = c->radius;
    else if (auto* s = std::get_if<Sphere>(&g.domain))
        R = s->radius;
    else
        throw Error(ErrorKind::unsupported, "lax_apply: exact form needs a circle or sphere");
    if (t == 0.0) return f;

    HarmonicField v = lift(f, identity_conductivity());
    const double shrink = std::exp(-t / R);
    Eigen::VectorXd values(static_cast<Eigen::Index>(g.n_nodes()));
    for (std::size_t j = 0; j < g.n_nodes(); ++j)
        values[static_cast<Eigen::Index>(j)] = v.value(shrink * g.nodes[j]);
    return BoundaryFunction::from_values(f.grid, values);
}

}  // namespace dtn
