#include "dtn/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <string>

namespace dtn::kernels {

// ---- scalar reference implementations --------------------------------------
// These are the semantics; the SIMD variants must match them to roundoff.

namespace scalar_impl {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double wdot(const double* a, const double* b, const double* w, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i] * w[i];
    return acc;
}

double sum(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double max_abs(const double* a, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
    return m;
}

void hadamard(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy(double* y, double alpha, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double* y, double alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= alpha;
}

}  // namespace scalar_impl

static const VTable kScalarTable = {
    scalar_impl::dot, scalar_impl::wdot, scalar_impl::sum, scalar_impl::max_abs,
    scalar_impl::hadamard, scalar_impl::axpy, scalar_impl::scale,
};

// Provided by kernels_avx2.cpp (null on non-x86 builds or when the compiler
// lacks -mavx2).
extern const VTable* avx2_table();

#if defined(__aarch64__)
// NEON is baseline on aarch64, so the variant lives in this TU; no dispatch
// risk compiling it unconditionally there.
namespace neon_impl {
#include <arm_neon.h>

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
    double r = vaddvq_f64(acc);
    for (; i < n; ++i) r += a[i] * b[i];
    return r;
}

double wdot(const double* a, const double* b, const double* w, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t ab = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vfmaq_f64(acc, ab, vld1q_f64(w + i));
    }
    double r = vaddvq_f64(acc);
    for (; i < n; ++i) r += a[i] * b[i] * w[i];
    return r;
}

double sum(const double* a, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(a + i));
    double r = vaddvq_f64(acc);
    for (; i < n; ++i) r += a[i];
    return r;
}

double max_abs(const double* a, std::size_t n) {
    float64x2_t m = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(a + i)));
    double r = vmaxvq_f64(m);
    for (; i < n; ++i) r = std::max(r, std::fabs(a[i]));
    return r;
}

void hadamard(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy(double* y, double alpha, const double* x, std::size_t n) {
    float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double* y, double alpha, std::size_t n) {
    float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmulq_f64(va, vld1q_f64(y + i)));
    for (; i < n; ++i) y[i] *= alpha;
}

}  // namespace neon_impl

static const VTable kNeonTable = {
    neon_impl::dot, neon_impl::wdot, neon_impl::sum, neon_impl::max_abs,
    neon_impl::hadamard, neon_impl::axpy, neon_impl::scale,
};
#endif  // __aarch64__

// ---- dispatch ---------------------------------------------------------------

namespace {

struct Dispatch {
    Backend backend = Backend::scalar;
    const VTable* vt = &kScalarTable;
};

Dispatch pick_backend() {
    Dispatch d;
#if defined(__aarch64__)
    d.backend = Backend::neon;
    d.vt = &kNeonTable;
#else
    if (const VTable* t = avx2_table()) {
#if defined(__GNUC__) || defined(__clang__)
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
            d.backend = Backend::avx2;
            d.vt = t;
        }
#endif
    }
#endif
    if (const char* req = std::getenv("DTN_KERNELS")) {
        std::string s(req);
        if (s == "scalar") {
            d.backend = Backend::scalar;
            d.vt = &kScalarTable;
        } else if (s == "avx2" && d.backend == Backend::avx2) {
            // already selected; keep
        } else if (s == "neon" && d.backend == Backend::neon) {
            // already selected; keep
        } else if (s == "avx2" || s == "neon") {
            // requested ISA unavailable on this host: fall back, do not crash
            d.backend = Backend::scalar;
            d.vt = &kScalarTable;
        }
        // unrecognized values are ignored
    }
    return d;
}

const Dispatch& dispatch() {
    static Dispatch d = pick_backend();
    return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

const char* backend_name() {
    switch (dispatch().backend) {
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
        default: return "scalar";
    }
}

bool backend_compiled(Backend b) {
    switch (b) {
        case Backend::scalar: return true;
        case Backend::avx2: return avx2_table() != nullptr;
        case Backend::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const VTable& table(Backend b) {
    switch (b) {
        case Backend::scalar: return kScalarTable;
        case Backend::avx2:
            if (const VTable* t = avx2_table()) return *t;
            throw std::invalid_argument("avx2 kernels not compiled into this binary");
        case Backend::neon:
#if defined(__aarch64__)
            return kNeonTable;
#else
            throw std::invalid_argument("neon kernels not compiled into this binary");
#endif
    }
    throw std::invalid_argument("unknown kernel backend");
}

double dot(const double* a, const double* b, std::size_t n) { return dispatch().vt->dot(a, b, n); }
double wdot(const double* a, const double* b, const double* w, std::size_t n) {
    return dispatch().vt->wdot(a, b, w, n);
}
double sum(const double* a, std::size_t n) { return dispatch().vt->sum(a, n); }
double max_abs(const double* a, std::size_t n) { return dispatch().vt->max_abs(a, n); }
void hadamard(double* out, const double* a, const double* b, std::size_t n) {
    dispatch().vt->hadamard(out, a, b, n);
}
void axpy(double* y, double alpha, const double* x, std::size_t n) {
    dispatch().vt->axpy(y, alpha, x, n);
}
void scale(double* y, double alpha, std::size_t n) { dispatch().vt->scale(y, alpha, n); }

}  // namespace dtn::kernels
