#include "stabilitylab/kernels.hpp"

#include <immintrin.h>
#include <limits>

// AVX2 kernels. One 4-double vector register plays the role of the four
// scalar accumulator lanes; tails reuse the scalar lane rule, so every
// result is bit-identical to the scalar reference. No FMA: the scalar
// path has separate multiply and add, so this one does too.

namespace stab::kern {
namespace {

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d vacc = _mm256_setzero_pd();
    const std::size_t main = n - (n % 4);
    for (std::size_t i = 0; i < main; i += 4) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        vacc = _mm256_add_pd(vacc, _mm256_mul_pd(va, vb));
    }
    alignas(32) double acc[4];
    _mm256_store_pd(acc, vacc);
    for (std::size_t i = main; i < n; ++i) acc[i - main] += a[i] * b[i];
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double sum_avx2(const double* a, std::size_t n) {
    __m256d vacc = _mm256_setzero_pd();
    const std::size_t main = n - (n % 4);
    for (std::size_t i = 0; i < main; i += 4)
        vacc = _mm256_add_pd(vacc, _mm256_loadu_pd(a + i));
    alignas(32) double acc[4];
    _mm256_store_pd(acc, vacc);
    for (std::size_t i = main; i < n; ++i) acc[i - main] += a[i];
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const std::size_t main = n - (n % 4);
    for (std::size_t i = 0; i < main; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
    }
    for (std::size_t i = main; i < n; ++i) y[i] = y[i] + a * x[i];
}

void rot_avx2(double* x, double* y, double c, double s, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vs = _mm256_set1_pd(s);
    const std::size_t main = n - (n % 4);
    for (std::size_t i = 0; i < main; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(x + i, _mm256_sub_pd(_mm256_mul_pd(vc, vx), _mm256_mul_pd(vs, vy)));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_mul_pd(vs, vx), _mm256_mul_pd(vc, vy)));
    }
    for (std::size_t i = main; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

void sqdist_planar_avx2(const double* const* planes, std::size_t dims,
                        std::size_t n, const double* q, double* out) {
    if (dims == 0) return;
    const std::size_t main = n - (n % 4);
    {
        const double* p = planes[0];
        const __m256d vq = _mm256_set1_pd(q[0]);
        for (std::size_t i = 0; i < main; i += 4) {
            const __m256d t = _mm256_sub_pd(_mm256_loadu_pd(p + i), vq);
            _mm256_storeu_pd(out + i, _mm256_mul_pd(t, t));
        }
        for (std::size_t i = main; i < n; ++i) {
            const double t = p[i] - q[0];
            out[i] = t * t;
        }
    }
    for (std::size_t k = 1; k < dims; ++k) {
        const double* p = planes[k];
        const __m256d vq = _mm256_set1_pd(q[k]);
        for (std::size_t i = 0; i < main; i += 4) {
            const __m256d t = _mm256_sub_pd(_mm256_loadu_pd(p + i), vq);
            const __m256d vo = _mm256_loadu_pd(out + i);
            _mm256_storeu_pd(out + i, _mm256_add_pd(vo, _mm256_mul_pd(t, t)));
        }
        for (std::size_t i = main; i < n; ++i) {
            const double t = p[i] - q[k];
            out[i] = out[i] + t * t;
        }
    }
}

MinResult min_index_avx2(const double* a, std::size_t n) {
    if (n == 0) return {std::numeric_limits<double>::infinity(), 0};
    __m256d vmin = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    const std::size_t main = n - (n % 4);
    for (std::size_t i = 0; i < main; i += 4)
        vmin = _mm256_min_pd(vmin, _mm256_loadu_pd(a + i));
    alignas(32) double lane[4];
    _mm256_store_pd(lane, vmin);
    for (std::size_t i = main; i < n; ++i)
        if (a[i] < lane[i - main]) lane[i - main] = a[i];
    double best = lane[0];
    for (int l = 1; l < 4; ++l)
        if (lane[l] < best) best = lane[l];
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] == best) return {best, i};
    return {best, 0};
}

} // namespace

const KernelTable& avx2_table() {
    static const KernelTable t = {
        "avx2",         dot_avx2, sum_avx2, axpy_avx2,
        rot_avx2,       sqdist_planar_avx2, min_index_avx2,
    };
    return t;
}

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

} // namespace stab::kern
