#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "stabilitylab/errors.hpp"
#include "stabilitylab/kernels.hpp"
#include "stabilitylab/random_matrix.hpp"
#include "stabilitylab/stats.hpp"

using namespace stab;
using namespace stab::rmt;

namespace {

SymmetricMatrix from_rows(std::size_t n, std::vector<double> a) {
    SymmetricMatrix m;
    m.n = n;
    m.a = std::move(a);
    return m;
}

} // namespace

TEST_CASE("diagonal matrix sorts its entries") {
    const auto m = from_rows(3, {3, 0, 0, 0, 1, 0, 0, 0, 2});
    const auto ed = symmetric_eigen(m);
    CHECK(ed.values[0] == doctest::Approx(1.0));
    CHECK(ed.values[1] == doctest::Approx(2.0));
    CHECK(ed.values[2] == doctest::Approx(3.0));
}

TEST_CASE("analytic 2x2: [[0,1],[1,0]]") {
    const auto m = from_rows(2, {0, 1, 1, 0});
    const auto ed = symmetric_eigen(m);
    CHECK(ed.values[0] == doctest::Approx(-1.0));
    CHECK(ed.values[1] == doctest::Approx(1.0));

    const auto pair = extreme_eigenpair(m, ExtremeKind::WignerMin);
    CHECK(pair.value == doctest::Approx(-1.0));
    CHECK(pair.vector[0] == doctest::Approx(0.70711).epsilon(1e-4));
    CHECK(pair.vector[1] == doctest::Approx(-0.70711).epsilon(1e-4));
    CHECK_FALSE(pair.degenerate);
}

TEST_CASE("wishart fixture: diag(1,2)") {
    RectMatrix m;
    m.m = 2;
    m.n = 2;
    m.a = {1, 0, 0, 2};
    const auto pair = extreme_eigenpair(m);
    CHECK(pair.value == doctest::Approx(4.0));
    CHECK(std::fabs(pair.vector[0]) < 1e-9);
    CHECK(pair.vector[1] == doctest::Approx(1.0)); // gauge makes it positive
}

TEST_CASE("random matrices: residuals and orthonormality") {
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng(hash64(10, trial));
        const auto m = sample_wigner(6, EntryLaw::Gaussian, rng);
        const auto ed = symmetric_eigen(m);
        for (std::size_t k = 0; k < 6; ++k) {
            std::vector<double> r(6);
            for (std::size_t i = 0; i < 6; ++i)
                r[i] = kern::dot(m.a.data() + i * 6, ed.vectors[k].data(), 6) -
                       ed.values[k] * ed.vectors[k][i];
            CHECK(std::sqrt(kern::dot(r.data(), r.data(), 6)) <=
                  1e-8 * m.fro_norm());
            for (std::size_t l = 0; l <= k; ++l) {
                const double ip =
                    kern::dot(ed.vectors[k].data(), ed.vectors[l].data(), 6);
                CHECK(std::fabs(ip - (k == l ? 1.0 : 0.0)) < 1e-10);
            }
        }
    }
}

TEST_CASE("gram equals a direct M^T M") {
    Rng rng(11);
    const auto m = sample_wishart_factor(7, 5, EntryLaw::Uniform, rng);
    const auto y = gram(m);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            double want = 0.0;
            for (std::size_t r = 0; r < 7; ++r) want += m.at(r, i) * m.at(r, j);
            CHECK(y.at(i, j) == doctest::Approx(want).epsilon(1e-12));
        }
}

TEST_CASE("gauge rules") {
    std::vector<double> v = {-0.6, 0.8};
    gauge(v);
    CHECK(v[0] == 0.6);
    auto w = v;
    gauge(w);
    CHECK(w == v); // idempotent

    std::vector<double> tiny = {1e-15, -0.3, 0.95};
    gauge(tiny);
    CHECK(tiny[1] == 0.3); // first coordinate above threshold is made positive

    std::vector<double> a = {0.3, -0.4};
    std::vector<double> b = {-0.3, 0.4};
    gauge(a);
    gauge(b);
    CHECK(vector_metric(a, b) == 0.0); // sign flip collapses after gauge
}

TEST_CASE("vector_metric fixtures") {
    const std::vector<double> e1 = {1, 0};
    const std::vector<double> e2 = {0, 1};
    CHECK(vector_metric(e1, e1) == 0.0);
    CHECK(vector_metric(e1, e2) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("samplers: symmetry, zero mean, determinism") {
    Rng r1(20), r2(20);
    const auto a = sample_wigner(20, EntryLaw::Gaussian, r1);
    const auto b = sample_wigner(20, EntryLaw::Gaussian, r2);
    CHECK(a.a == b.a);
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < 20; ++j) CHECK(a.at(i, j) == a.at(j, i));

    Rng rg(21);
    const auto big = sample_wigner(60, EntryLaw::Uniform, rg);
    std::vector<double> upper;
    for (std::size_t i = 0; i < 60; ++i)
        for (std::size_t j = i; j < 60; ++j) upper.push_back(big.at(i, j));
    const auto s = stats::summarize(upper);
    CHECK(std::fabs(s.mean) <= 3.0 * s.stderr_mean);
}

TEST_CASE("interlacing: 2x2 fixture, random tables, eps -> 0 limit") {
    const auto m2 = from_rows(2, {0.4, 1.1, 1.1, -0.2});
    const auto rep2 = interlacing_check(m2);
    CHECK(rep2.interlacing_ok); // lambda_1 <= a_11 <= lambda_2

    for (int trial = 0; trial < 30; ++trial) {
        Rng rng(hash64(30, trial));
        const auto m = sample_wigner(6, EntryLaw::Gaussian, rng);
        const auto rep = interlacing_check(m);
        CHECK(rep.interlacing_ok);
        CHECK(rep.gap_ok);
        // eps = 0 degenerates to lambda_n >= mu_{n-1}
        CHECK(gap_estimate_margin(m, 0.0) >= -1e-10);
    }
}

TEST_CASE("degenerate gap is flagged, not fatal") {
    const auto id3 = from_rows(3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    const auto pair = extreme_eigenpair(id3, ExtremeKind::WignerMin);
    CHECK(pair.degenerate);
    CHECK(pair.value == doctest::Approx(1.0));
}

TEST_CASE("eigen cap raises") {
    SymmetricMatrix big;
    big.n = 513;
    big.a.assign(513 * 513, 0.0);
    CHECK_THROWS_AS(symmetric_eigen(big), SizeExceeded);
}

TEST_CASE("Wigner edge scaling at a modest size") {
    // median over a few replications already sits near -2 sqrt(n)
    std::vector<double> scaled;
    for (int rep = 0; rep < 5; ++rep) {
        Rng rng(hash64(40, rep));
        const auto m = sample_wigner(100, EntryLaw::Gaussian, rng);
        scaled.push_back(extreme_eigenpair(m, ExtremeKind::WignerMin).value / 10.0);
    }
    const auto s = stats::summarize(scaled);
    CHECK(s.q50 > -2.4);
    CHECK(s.q50 < -1.6);
}
