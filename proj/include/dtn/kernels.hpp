#pragma once

// Small dense kernels for the hot loops: quadrature reductions, spectral
// multiplier application, norm scans. Every kernel has a scalar reference
// implementation and (where the host supports it) a SIMD variant; the backend
// is picked once at startup from CPUID and can be forced with DTN_KERNELS.
//
// This is deliberately not a linear-algebra library. Factorizations,
// eigensolves and matrix products go through Eigen; these kernels only cover
// the flat double-array loops the rest of the code hits per quadrature node.

#include <cstddef>

namespace dtn::kernels {

enum class Backend { scalar, avx2, neon };

// Active backend after dispatch. Honors DTN_KERNELS=scalar|avx2|neon on first
// use; an unavailable request falls back to scalar (never crashes).
Backend active_backend();
const char* backend_name();

// Reductions.
double dot(const double* a, const double* b, std::size_t n);
// Weighted dot: sum_i a[i] * b[i] * w[i]. The L2(boundary) inner product.
double wdot(const double* a, const double* b, const double* w, std::size_t n);
double sum(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);

// Elementwise.
void hadamard(double* out, const double* a, const double* b, std::size_t n);
void axpy(double* y, double alpha, const double* x, std::size_t n);
void scale(double* y, double alpha, std::size_t n);

// Test/bench hook: run a named kernel through a specific backend regardless of
// the dispatched one. Throws std::invalid_argument for a backend not compiled
// into this binary.
struct VTable {
    double (*dot)(const double*, const double*, std::size_t);
    double (*wdot)(const double*, const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    double (*max_abs)(const double*, std::size_t);
    void (*hadamard)(double*, const double*, const double*, std::size_t);
    void (*axpy)(double*, double, const double*, std::size_t);
    void (*scale)(double*, double, std::size_t);
};
const VTable& table(Backend b);
bool backend_compiled(Backend b);

}  // namespace dtn::kernels
