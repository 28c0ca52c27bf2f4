#include "stabilitylab/random_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stabilitylab/errors.hpp"
#include "stabilitylab/kernels.hpp"

namespace stab::rmt {
namespace {

double sample_entry(EntryLaw law, Rng& rng) {
    // zero-mean, unit-variance draws
    return law == EntryLaw::Gaussian ? rng.gaussian()
                                     : rng.uniform(-std::sqrt(3.0), std::sqrt(3.0));
}

double off_diagonal_norm(const SymmetricMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = i + 1; j < a.n; ++j) s += a.at(i, j) * a.at(i, j);
    return std::sqrt(2.0 * s);
}

} // namespace

double SymmetricMatrix::fro_norm() const {
    return std::sqrt(kern::dot(a.data(), a.data(), a.size()));
}

SymmetricMatrix SymmetricMatrix::principal_minor(std::size_t k) const {
    SymmetricMatrix b;
    b.n = k;
    b.a.resize(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) b.a[i * k + j] = at(i, j);
    return b;
}

SymmetricMatrix sample_wigner(std::size_t n, EntryLaw law, Rng& rng) {
    SymmetricMatrix m;
    m.n = n;
    m.a.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double x = sample_entry(law, rng);
            m.at(i, j) = x;
            m.at(j, i) = x;
        }
    return m;
}

RectMatrix sample_wishart_factor(std::size_t m, std::size_t n, EntryLaw law,
                                 Rng& rng) {
    RectMatrix r;
    r.m = m;
    r.n = n;
    r.a.resize(m * n);
    for (double& x : r.a) x = sample_entry(law, rng);
    return r;
}

SymmetricMatrix gram(const RectMatrix& m) {
    SymmetricMatrix y;
    y.n = m.n;
    y.a.assign(m.n * m.n, 0.0);
    for (std::size_t r = 0; r < m.m; ++r) {
        const double* row = m.a.data() + r * m.n;
        for (std::size_t i = 0; i < m.n; ++i)
            kern::axpy(row[i], row, y.a.data() + i * m.n, m.n);
    }
    return y;
}

EigenDecomposition symmetric_eigen(const SymmetricMatrix& input) {
    const std::size_t n = input.n;
    if (n > kEigenCap) throw SizeExceeded("symmetric_eigen capped at n = 512");
    SymmetricMatrix a = input;
    const double fro = a.fro_norm();
    std::vector<double> vt(n * n, 0.0); // rows are eigenvector candidates
    for (std::size_t i = 0; i < n; ++i) vt[i * n + i] = 1.0;

    const double target = 1e-10 * fro;
    const int max_sweeps = 60;
    bool converged = fro == 0.0;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a.at(p, q);
                if (apq == 0.0) continue;
                const double app = a.at(p, p);
                const double aqq = a.at(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) /
                    (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // rotate rows p and q, then restore the four crossing
                // entries in closed form and mirror rows into columns
                kern::rot(a.a.data() + p * n, a.a.data() + q * n, c, s, n);
                a.at(p, p) = app - t * apq;
                a.at(q, q) = aqq + t * apq;
                a.at(p, q) = 0.0;
                a.at(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    a.at(k, p) = a.at(p, k);
                    a.at(k, q) = a.at(q, k);
                }
                kern::rot(vt.data() + p * n, vt.data() + q * n, c, s, n);
            }
        }
        converged = off_diagonal_norm(a) < target;
    }
    if (!converged) throw NoConvergence("Jacobi sweeps exhausted");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&a](std::size_t i, std::size_t j) {
        return a.at(i, i) < a.at(j, j);
    });
    EigenDecomposition out;
    out.values.resize(n);
    out.vectors.assign(n, std::vector<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a.at(order[k], order[k]);
        std::copy_n(vt.begin() + static_cast<std::ptrdiff_t>(order[k] * n), n,
                    out.vectors[k].begin());
    }

    // residual certificate
    const double tol = 1e-8 * (fro > 0.0 ? fro : 1.0);
    std::vector<double> av(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i)
            av[i] = kern::dot(input.a.data() + i * n, out.vectors[k].data(), n) -
                    out.values[k] * out.vectors[k][i];
        if (std::sqrt(kern::dot(av.data(), av.data(), n)) > tol)
            throw NoConvergence("eigenpair residual above certificate");
    }
    return out;
}

void gauge(std::vector<double>& v) {
    for (const double x : v) {
        if (std::fabs(x) > 1e-12) {
            if (x < 0.0)
                for (double& y : v) y = -y;
            return;
        }
    }
}

ExtremePair extreme_eigenpair(const SymmetricMatrix& a, ExtremeKind kind) {
    const EigenDecomposition ed = symmetric_eigen(a);
    const std::size_t n = a.n;
    ExtremePair out;
    if (kind == ExtremeKind::WignerMin) {
        out.value = ed.values[0];
        out.vector = ed.vectors[0];
        out.gap = n > 1 ? ed.values[1] - ed.values[0] : 0.0;
    } else {
        out.value = ed.values[n - 1];
        out.vector = ed.vectors[n - 1];
        out.gap = n > 1 ? ed.values[n - 1] - ed.values[n - 2] : 0.0;
    }
    out.degenerate = n > 1 && out.gap < 1e-10;
    gauge(out.vector);
    return out;
}

ExtremePair extreme_eigenpair(const RectMatrix& m) {
    return extreme_eigenpair(gram(m), ExtremeKind::WishartMax);
}

double vector_metric(const std::vector<double>& v1,
                     const std::vector<double>& v2) {
    double s = 0.0;
    for (std::size_t i = 0; i < v1.size(); ++i) {
        const double t = v1[i] - v2[i];
        s += t * t;
    }
    return std::sqrt(s);
}

double gap_estimate_margin(const SymmetricMatrix& a, double eps) {
    const std::size_t n = a.n;
    const EigenDecomposition full = symmetric_eigen(a);
    const EigenDecomposition minor = symmetric_eigen(a.principal_minor(n - 1));
    const double lambda_n = full.values[n - 1];
    const double mu = minor.values[n - 2]; // largest eigenvalue of B_{n-1}
    const std::vector<double>& x = minor.vectors[n - 2];
    double ax = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) ax += a.at(n - 1, i) * x[i];
    const double rhs = 2.0 * std::sqrt(eps * (1.0 - eps)) * std::fabs(ax) -
                       eps * mu + eps * a.at(n - 1, n - 1);
    return (lambda_n - mu) - rhs;
}

InterlacingReport interlacing_check(const SymmetricMatrix& a) {
    const std::size_t n = a.n;
    if (n > 64) throw SizeExceeded("interlacing_check capped at n = 64");
    const EigenDecomposition full = symmetric_eigen(a);
    std::vector<double> mu_max(n + 1), mu_min(n + 1);
    for (std::size_t k = 1; k <= n; ++k) {
        const EigenDecomposition ek = symmetric_eigen(a.principal_minor(k));
        mu_min[k] = ek.values.front();
        mu_max[k] = ek.values.back();
    }
    InterlacingReport rep;
    rep.interlacing_ok = true;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= n; ++k) {
        const double lam = full.values[k - 1];
        const double lower_margin = lam - mu_min[n - k + 1];
        const double upper_margin = mu_max[k] - lam;
        rep.min_margin = std::min({rep.min_margin, lower_margin, upper_margin});
    }
    const double slack = 1e-9 * (1.0 + a.fro_norm());
    rep.interlacing_ok = rep.min_margin >= -slack;
    rep.gap_ok = true;
    rep.min_gap_margin = std::numeric_limits<double>::infinity();
    for (const double eps : {0.1, 0.5}) {
        const double m = gap_estimate_margin(a, eps);
        rep.min_gap_margin = std::min(rep.min_gap_margin, m);
    }
    rep.gap_ok = rep.min_gap_margin >= -slack;
    return rep;
}

} // namespace stab::rmt
