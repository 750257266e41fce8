#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cohere/coherence.hpp"
#include "cohere/errors.hpp"
#include "cohere/randmat.hpp"
#include "oracle.hpp"

using namespace cohere;

namespace {

DataMatrix from_columns(std::int64_t n, const std::vector<std::vector<double>>& cols) {
    DataMatrix X;
    X.n = n;
    X.p = static_cast<std::int64_t>(cols.size());
    X.values.resize(static_cast<std::size_t>(X.n * X.p));
    for (std::int64_t j = 0; j < X.p; ++j)
        for (std::int64_t i = 0; i < n; ++i)
            X.at(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return X;
}

}  // namespace

TEST_SUITE("coherence") {

TEST_CASE("standardize centers and normalizes") {
    const DataMatrix X = from_columns(3, {{1.0, 2.0, 3.0}});
    const StandardizeResult r = standardize_columns(X, MeanMode::Unknown());
    const double inv = 1.0 / std::sqrt(2.0);
    CHECK(r.columns[0] == doctest::Approx(-inv).epsilon(1e-15));
    CHECK(r.columns[1] == doctest::Approx(0.0).scale(1.0));
    CHECK(r.columns[2] == doctest::Approx(inv).epsilon(1e-15));
    CHECK(r.stats.center[0] == doctest::Approx(2.0));
}

TEST_CASE("constant column is a degenerate-column error") {
    const DataMatrix X = from_columns(3, {{5.0, 5.0, 5.0}});
    CHECK_THROWS_WITH_AS(standardize_columns(X, MeanMode::Unknown()),
                         doctest::Contains("degenerate column 1"), DataError);
}

TEST_CASE("known-mean standardize skips centering by sample mean") {
    const DataMatrix X = from_columns(2, {{1.0, -1.0}});
    const StandardizeResult r = standardize_columns(X, MeanMode::Known({0.0}));
    const double inv = 1.0 / std::sqrt(2.0);
    CHECK(r.columns[0] == doctest::Approx(inv).epsilon(1e-15));
    CHECK(r.columns[1] == doctest::Approx(-inv).epsilon(1e-15));
    CHECK(r.stats.h[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("orthogonal columns give coherence zero") {
    const DataMatrix X = from_columns(2, {{1.0, 0.0}, {0.0, 1.0}});
    const CoherenceResult r = coherence(X, 1, MeanMode::Known({0.0}));
    CHECK(r.kind == StatKind::L_tilde);
    CHECK(r.value == 0.0);
    CHECK(r.i == 1);
    CHECK(r.j == 2);
}

TEST_CASE("pearson coherence of a 3x2 example") {
    const DataMatrix X = from_columns(3, {{1.0, 2.0, 3.0}, {1.0, 3.0, 2.0}});
    const CoherenceResult r = coherence(X, 1, MeanMode::Unknown());
    CHECK(r.kind == StatKind::L);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.i == 1);
    CHECK(r.j == 2);
}

TEST_CASE("no admissible pair is an error") {
    const DataMatrix X = oracle::random_gaussian(4, 5, 1);
    CHECK_THROWS_WITH_AS(coherence(X, 5, MeanMode::Unknown()),
                         doctest::Contains("no admissible pair"), DataError);
}

TEST_CASE("blocked kernel equals the brute-force oracle") {
    std::mt19937_64 gen(2024);
    for (int rep = 0; rep < 12; ++rep) {
        const std::int64_t n = 2 + static_cast<std::int64_t>(gen() % 19);
        const std::int64_t p = 5 + static_cast<std::int64_t>(gen() % 26);
        const std::int64_t tau = 1 + static_cast<std::int64_t>(gen() % 3);
        if (p < tau + 1) continue;
        const DataMatrix X = oracle::random_gaussian(n, p, gen());
        for (bool known : {false, true}) {
            const MeanMode mode = known ? MeanMode::Known({0.0}) : MeanMode::Unknown();
            KernelOptions opts;
            opts.block_edge = 1 + static_cast<std::int64_t>(gen() % 8);
            const CoherenceResult r = coherence(X, tau, mode, opts);
            const oracle::BruteResult b = oracle::max_abs_corr(X, tau, known, {0.0});
            CHECK(r.value == doctest::Approx(b.value).epsilon(1e-12));
            if (b.isolated()) {  // near-exact ties may rank differently across kernels
                CHECK(r.i == b.i);
                CHECK(r.j == b.j);
            }
            CHECK(std::fabs(r.value - statistic_at_pair(X, mode, r.kind, r.i, r.j)) <= 1e-12);
        }
    }
}

TEST_CASE("coherence is monotone nonincreasing in tau") {
    const DataMatrix X = oracle::random_gaussian(12, 18, 99);
    double prev = 2.0;
    for (std::int64_t tau = 1; tau <= 8; ++tau) {
        const double v = coherence(X, tau, MeanMode::Unknown()).value;
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
}

TEST_CASE("column-wise affine maps leave pearson coherence invariant") {
    const DataMatrix X = oracle::random_gaussian(15, 10, 7);
    DataMatrix Y = X;
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> scale(0.2, 5.0), shift(-10.0, 10.0);
    for (std::int64_t j = 0; j < Y.p; ++j) {
        const double s = scale(gen), m = shift(gen);
        for (std::int64_t i = 0; i < Y.n; ++i) Y.at(i, j) = s * Y.at(i, j) + m;
    }
    const CoherenceResult a = coherence(X, 1, MeanMode::Unknown());
    const CoherenceResult b = coherence(Y, 1, MeanMode::Unknown());
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
    CHECK(a.i == b.i);
    CHECK(a.j == b.j);
}

TEST_CASE("column permutation preserves the max at tau = 1") {
    const DataMatrix X = oracle::random_gaussian(10, 12, 17);
    std::vector<std::int64_t> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 gen(3);
    std::shuffle(perm.begin(), perm.end(), gen);
    DataMatrix Y = X;
    for (std::int64_t j = 0; j < 12; ++j)
        std::copy(X.col(perm[static_cast<std::size_t>(j)]),
                  X.col(perm[static_cast<std::size_t>(j)]) + X.n, Y.col(j));
    const CoherenceResult a = coherence(X, 1, MeanMode::Unknown());
    const CoherenceResult b = coherence(Y, 1, MeanMode::Unknown());
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
    const oracle::BruteResult bb = oracle::max_abs_corr(Y, 1, false);
    CHECK(b.i == bb.i);  // tie rule re-applied after the permutation
    CHECK(b.j == bb.j);
}

TEST_CASE("result is invariant to block edge and thread count, bit for bit") {
    const DataMatrix X = oracle::random_gaussian(40, 150, 55);
    KernelOptions base;
    base.threads = 1;
    base.block_edge = 256;
    const CoherenceResult ref = coherence(X, 2, MeanMode::Unknown(), base);
    for (std::int64_t edge : {3LL, 17LL, 64LL, 1000LL}) {
        for (int threads : {1, 4, 8}) {
            KernelOptions o;
            o.threads = threads;
            o.block_edge = edge;
            const CoherenceResult r = coherence(X, 2, MeanMode::Unknown(), o);
            CHECK(r.value == ref.value);  // exact equality required
            CHECK(r.i == ref.i);
            CHECK(r.j == ref.j);
        }
    }
}

TEST_CASE("raw gram statistics") {
    const DataMatrix orth = from_columns(2, {{1.0, 1.0}, {1.0, -1.0}});
    CHECK(gram_offdiag_max(orth, 1, MeanMode::Unknown()).value == 0.0);

    const DataMatrix X = from_columns(2, {{1.0, 2.0}, {2.0, 1.0}});
    const CoherenceResult w = gram_offdiag_max(X, 1, MeanMode::Unknown());
    CHECK(w.kind == StatKind::W);
    CHECK(w.value == doctest::Approx(4.0).epsilon(1e-15));

    const CoherenceResult j = gram_offdiag_max(X, 1, MeanMode::Known({0.0}, {1.0}));
    CHECK(j.kind == StatKind::J);
    CHECK(j.value == w.value);

    const DataMatrix Y = oracle::random_gaussian(9, 11, 23);
    const CoherenceResult u = gram_offdiag_max(Y, 3, MeanMode::Known({0.25}, {2.0}));
    CHECK(u.kind == StatKind::U);
    const oracle::BruteResult b = oracle::max_abs_gram(Y, 3, {0.25}, {2.0});
    CHECK(u.value == doctest::Approx(b.value).epsilon(1e-12));
    CHECK(u.i == b.i);
    CHECK(u.j == b.j);
    CHECK(gram_offdiag_max(Y, 2, MeanMode::Unknown()).kind == StatKind::V);
}

TEST_CASE("gram J/U without sigma is a parameter error") {
    const DataMatrix X = oracle::random_gaussian(5, 4, 2);
    CHECK_THROWS_AS(gram_offdiag_max(X, 1, MeanMode::Known({0.0})), ParameterError);
}

TEST_CASE("normalized values stay in [0,1]; collinear pair reaches 1") {
    const DataMatrix X = oracle::random_gaussian(8, 20, 77);
    CHECK(coherence(X, 1, MeanMode::Unknown()).value <= 1.0);
    DataMatrix Y = X;
    for (std::int64_t i = 0; i < Y.n; ++i) Y.at(i, 19) = -3.0 * Y.at(i, 0);
    const CoherenceResult r = coherence(Y, 1, MeanMode::Unknown());
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.i == 1);
    CHECK(r.j == 20);
}

TEST_CASE("lemma diagnostics vanish for centered unit-h columns") {
    // +-1 columns with exact zero mean: h_i = 1 and xbar_i = 0 in floating point
    const DataMatrix X = from_columns(4, {{1.0, -1.0, 1.0, -1.0},
                                          {1.0, 1.0, -1.0, -1.0},
                                          {1.0, -1.0, -1.0, 1.0}});
    const GramDiagnostics d = lemma_bound_diagnostics(X);
    CHECK(d.b1 == 0.0);
    CHECK(d.b4 == 0.0);
    CHECK(d.lemma_bound == 0.0);
    CHECK(d.actual_dev == 0.0);
}

TEST_CASE("lemma inequality holds on random data and under column scaling") {
    const DataMatrix X = oracle::random_gaussian(50, 20, 404);
    const GramDiagnostics d = lemma_bound_diagnostics(X);
    CHECK(d.actual_dev <= d.lemma_bound);
    CHECK(d.b3 > 0.0);

    DataMatrix Y = X;
    for (std::int64_t i = 0; i < Y.n; ++i) Y.at(i, 3) *= 10.0;
    const GramDiagnostics ds = lemma_bound_diagnostics(Y);
    CHECK(ds.actual_dev <= ds.lemma_bound);
    CHECK(ds.W > d.W);  // the raw gram max grows with the scaled column
}

TEST_CASE("actual deviation matches a naive |n rho - gram| sweep") {
    const DataMatrix X = oracle::random_gaussian(15, 8, 31);
    const GramDiagnostics d = lemma_bound_diagnostics(X);
    double naive = 0.0;
    for (std::int64_t i = 0; i < X.p; ++i) {
        for (std::int64_t j = i + 1; j < X.p; ++j) {
            double mi = 0.0, mj = 0.0;
            for (std::int64_t k = 0; k < X.n; ++k) {
                mi += X.at(k, i);
                mj += X.at(k, j);
            }
            mi /= static_cast<double>(X.n);
            mj /= static_cast<double>(X.n);
            double dot_c = 0.0, ni = 0.0, nj = 0.0, dot_raw = 0.0;
            for (std::int64_t k = 0; k < X.n; ++k) {
                dot_c += (X.at(k, i) - mi) * (X.at(k, j) - mj);
                ni += (X.at(k, i) - mi) * (X.at(k, i) - mi);
                nj += (X.at(k, j) - mj) * (X.at(k, j) - mj);
                dot_raw += X.at(k, i) * X.at(k, j);
            }
            const double rho = dot_c / std::sqrt(ni * nj);
            naive = std::max(naive, std::fabs(static_cast<double>(X.n) * rho - dot_raw));
        }
    }
    CHECK(d.actual_dev == doctest::Approx(naive).epsilon(1e-9));
}

}  // TEST_SUITE
