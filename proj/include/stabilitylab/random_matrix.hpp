#pragma once
#include <cstddef>
#include <cstdint>
#include <vector>

#include "stabilitylab/rng.hpp"

// Wigner smallest eigenpair and Wishart largest singular pair through a
// cyclic Jacobi eigensolver, plus the interlacing and gap-estimate
// inequality checks.

namespace stab::rmt {

struct SymmetricMatrix {
    std::size_t n = 0;
    std::vector<double> a; // row-major n x n, symmetric

    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double fro_norm() const;
    // top-left k x k principal minor
    SymmetricMatrix principal_minor(std::size_t k) const;
};

struct RectMatrix {
    std::size_t m = 0, n = 0;
    std::vector<double> a; // row-major m x n
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

enum class EntryLaw { Gaussian, Uniform }; // zero-mean laws with a density

SymmetricMatrix sample_wigner(std::size_t n, EntryLaw law, Rng& rng);
RectMatrix sample_wishart_factor(std::size_t m, std::size_t n, EntryLaw law,
                                 Rng& rng);

// Y = M^T M via rank-1 row accumulation.
SymmetricMatrix gram(const RectMatrix& m);

struct EigenDecomposition {
    std::vector<double> values;          // ascending
    std::vector<std::vector<double>> vectors; // vectors[k] pairs with values[k]
};

inline constexpr std::size_t kEigenCap = 512;

// Cyclic Jacobi; converges when the off-diagonal Frobenius norm drops
// below 1e-10 ||A||_F, throws NoConvergence after the sweep cap. Each
// eigenpair is residual-certified to 1e-8 ||A||_F.
EigenDecomposition symmetric_eigen(const SymmetricMatrix& input);

// Gauge: the first coordinate larger than 1e-12 in absolute value is made
// positive. Idempotent.
void gauge(std::vector<double>& v);

enum class ExtremeKind { WignerMin, WishartMax };

struct ExtremePair {
    double value;
    std::vector<double> vector; // gauged unit vector
    bool degenerate;            // extreme gap below 1e-10 (flagged, not fatal)
    double gap;
};

ExtremePair extreme_eigenpair(const SymmetricMatrix& a, ExtremeKind kind);
ExtremePair extreme_eigenpair(const RectMatrix& m); // WishartMax via M^T M

// ||v1 - v2||_2 on gauged representatives
double vector_metric(const std::vector<double>& v1,
                     const std::vector<double>& v2);

struct InterlacingReport {
    bool interlacing_ok;   // mu^-_{n-k+1} <= lambda_k <= mu^+_k for all k
    double min_margin;     // smallest slack over all interlacing inequalities
    bool gap_ok;           // gap estimate holds for eps in {0.1, 0.5}
    double min_gap_margin; // smallest slack over the gap inequalities
};

// n <= 64: eigenvalues of every principal minor against the full spectrum,
// plus the last-row gap estimate at eps in {0.1, 0.5}.
InterlacingReport interlacing_check(const SymmetricMatrix& a);

// lambda_n - mu_{n-1} - (2 sqrt(eps(1-eps)) |a^T x| - eps mu_{n-1} + eps a_nn)
double gap_estimate_margin(const SymmetricMatrix& a, double eps);

} // namespace stab::rmt
