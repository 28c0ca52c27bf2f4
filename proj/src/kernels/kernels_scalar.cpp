#include "stabilitylab/kernels.hpp"

#include <limits>

// Scalar reference kernels. Reductions run four interleaved accumulator
// lanes, lane l taking elements with index = l (mod 4) in the main block
// and the tail folding into lanes 0..tail-1, combined as
// (acc0+acc1) + (acc2+acc3). The AVX2 variants perform the same IEEE
// operations in the same order, so results match bit for bit.

namespace stab::kern {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t main = n - (n % 4);
    for (std::size_t i = 0; i < main; i += 4) {
        acc[0] += a[i + 0] * b[i + 0];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    for (std::size_t i = main; i < n; ++i) acc[i - main] += a[i] * b[i];
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double sum_scalar(const double* a, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t main = n - (n % 4);
    for (std::size_t i = 0; i < main; i += 4) {
        acc[0] += a[i + 0];
        acc[1] += a[i + 1];
        acc[2] += a[i + 2];
        acc[3] += a[i + 3];
    }
    for (std::size_t i = main; i < n; ++i) acc[i - main] += a[i];
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void rot_scalar(double* x, double* y, double c, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

void sqdist_planar_scalar(const double* const* planes, std::size_t dims,
                          std::size_t n, const double* q, double* out) {
    if (dims == 0) return;
    {
        const double* p = planes[0];
        const double qk = q[0];
        for (std::size_t i = 0; i < n; ++i) {
            const double t = p[i] - qk;
            out[i] = t * t;
        }
    }
    for (std::size_t k = 1; k < dims; ++k) {
        const double* p = planes[k];
        const double qk = q[k];
        for (std::size_t i = 0; i < n; ++i) {
            const double t = p[i] - qk;
            out[i] = out[i] + t * t;
        }
    }
}

MinResult min_index_scalar(const double* a, std::size_t n) {
    if (n == 0) return {std::numeric_limits<double>::infinity(), 0};
    double lane[4];
    const std::size_t main = n - (n % 4);
    lane[0] = lane[1] = lane[2] = lane[3] = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < main; i += 4) {
        if (a[i + 0] < lane[0]) lane[0] = a[i + 0];
        if (a[i + 1] < lane[1]) lane[1] = a[i + 1];
        if (a[i + 2] < lane[2]) lane[2] = a[i + 2];
        if (a[i + 3] < lane[3]) lane[3] = a[i + 3];
    }
    for (std::size_t i = main; i < n; ++i)
        if (a[i] < lane[i - main]) lane[i - main] = a[i];
    double best = lane[0];
    for (int l = 1; l < 4; ++l)
        if (lane[l] < best) best = lane[l];
    // second pass pins the smallest attaining index (exact comparison is
    // safe: `best` is one of the array values, untouched by arithmetic)
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] == best) return {best, i};
    return {best, 0}; // unreachable for finite inputs
}

} // namespace

const KernelTable& scalar_table() {
    static const KernelTable t = {
        "scalar",         dot_scalar, sum_scalar, axpy_scalar,
        rot_scalar,       sqdist_planar_scalar, min_index_scalar,
    };
    return t;
}

} // namespace stab::kern
