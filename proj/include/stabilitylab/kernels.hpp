#pragma once
#include <cstddef>
#include <cstdint>

// Data-parallel inner-loop kernels. Every kernel exists in a scalar
// reference form and (on x86-64) an AVX2 form; the active set is chosen
// once at startup. Reductions are defined as 4-lane blocked sums with a
// fixed combine order and no FP contraction, which makes the two
// implementations bit-identical: equivalence tests assert exact equality,
// and dispatch can never change experiment output bytes.

namespace stab::kern {

struct MinResult {
    double value;
    std::size_t index; // smallest index attaining the minimum
};

struct KernelTable {
    const char* name;
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    // (x, y) <- (c*x - s*y, s*x + c*y), the Jacobi plane rotation
    void (*rot)(double*, double*, double, double, std::size_t);
    // out[i] = sum_k (plane_k[i] - q_k)^2 over `dims` coordinate planes
    void (*sqdist_planar)(const double* const*, std::size_t, std::size_t,
                          const double*, double*);
    MinResult (*min_index)(const double*, std::size_t);
};

// Scalar reference table (always available).
const KernelTable& scalar_table();

// Table selected at startup: AVX2 when the CPU supports it and the binary
// carries the AVX2 translation unit, scalar otherwise. The environment
// variable STABILITYLAB_KERNELS=scalar|avx2 forces a path (an unsupported
// request falls back to scalar).
const KernelTable& active_table();

inline double dot(const double* a, const double* b, std::size_t n) {
    return active_table().dot(a, b, n);
}
inline double sum(const double* a, std::size_t n) {
    return active_table().sum(a, n);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
    active_table().axpy(a, x, y, n);
}
inline void rot(double* x, double* y, double c, double s, std::size_t n) {
    active_table().rot(x, y, c, s, n);
}
inline void sqdist_planar(const double* const* planes, std::size_t dims,
                          std::size_t n, const double* q, double* out) {
    active_table().sqdist_planar(planes, dims, n, q, out);
}
inline MinResult min_index(const double* a, std::size_t n) {
    return active_table().min_index(a, n);
}

#if defined(STAB_HAVE_AVX2_TU)
const KernelTable& avx2_table();
bool cpu_has_avx2();
#endif

} // namespace stab::kern
