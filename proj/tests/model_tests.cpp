// Detector model tests: conditional statistics, decision rule, conditional
// error probability and the Chernoff bounds, cross-checked against raw
// formula transcriptions.

#include <catch2/catch.hpp>

#include <cmath>

#include "partinfo/model.hpp"
#include "partinfo/sampling.hpp"

#include "oracle.hpp"
#include "test_support.hpp"

using namespace partinfo;
using test_support::close_abs;
using test_support::close_rel;
using test_support::random_instance;

namespace {

ProblemInstance worked_instance() {
    return ProblemInstance(SymMatrix::diagonal({2.0, 1.0}), SymMatrix::identity(2),
                           Matrix{{1.0, 0.0}});
}

}  // namespace

// ============================================================================
// ProblemInstance validation
// ============================================================================

TEST_CASE("ProblemInstance validates shapes, rank and definiteness") {
    const SymMatrix sx = SymMatrix::diagonal({2.0, 1.0});
    const SymMatrix se = SymMatrix::identity(2);
    CHECK_THROWS_AS(ProblemInstance(sx, se, Matrix{{1.0, 0.0}, {0.0, 1.0}}), argument_error);  // m == n
    CHECK_THROWS_AS(ProblemInstance(sx, SymMatrix::identity(3), Matrix{{1.0, 0.0}}), argument_error);
    CHECK_THROWS_AS(ProblemInstance(SymMatrix(Matrix{{1.0, 3.0}, {3.0, 1.0}}), se, Matrix{{1.0, 0.0}}),
                    not_positive_definite_error);

    // Two proportional rows: rank 1 < m = 2.
    const SymMatrix sx3 = SymMatrix::identity(3);
    const SymMatrix se3 = SymMatrix::identity(3);
    CHECK_THROWS_AS(ProblemInstance(sx3, se3, Matrix{{1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}}), rank_error);
}

// ============================================================================
// conditional_stats
// ============================================================================

TEST_CASE("conditional_stats closed form on the worked instance") {
    const ConditionalStats stats = conditional_stats(worked_instance());
    REQUIRE(stats.gain.rows() == 2);
    REQUIRE(stats.gain.cols() == 1);
    CHECK(close_abs(stats.gain(0, 0), 1.0, 1e-12));
    CHECK(close_abs(stats.gain(1, 0), 0.0, 1e-12));
    CHECK(close_abs(stats.cov(0, 0), 1.0, 1e-12));
    CHECK(close_abs(stats.cov(1, 1), 2.0, 1e-12));
    CHECK(close_abs(stats.cov(0, 1), 0.0, 1e-12));
}

TEST_CASE("conditional_stats with orthonormal rows and identity signal covariance") {
    RngStream rng(31, 0);
    const std::size_t n = 6, m = 3;
    const Matrix t = random_orthonormal_columns(n, m, rng).transposed();
    const SymMatrix sigma_e = random_psd(n, 0.3, 1.5, rng);
    const ProblemInstance inst(SymMatrix::identity(n), sigma_e, t);

    const ConditionalStats stats = conditional_stats(inst);
    const Matrix expected = Matrix::identity(n) + sigma_e.mat() - t.transposed() * t;
    CHECK(test_support::max_abs_diff(stats.cov.mat(), expected) <= 1e-10);
}

TEST_CASE("conditional_stats gain maps zero to zero") {
    RngStream rng(32, 0);
    const ProblemInstance inst = random_instance(5, 2, rng);
    const ConditionalStats stats = conditional_stats(inst);
    const Vec mu = stats.mean_given(Vec(2, 0.0));
    for (double v : mu) CHECK(v == 0.0);
}

TEST_CASE("conditional_stats matches raw formula transcription") {
    RngStream rng(33, 0);
    for (int rep = 0; rep < 25; ++rep) {
        const auto dims = test_support::random_dims(9, rng);
        const ProblemInstance inst = random_instance(dims.n, dims.m, rng);
        const ConditionalStats stats = conditional_stats(inst);

        const oracle::Mat sigma_x = oracle::from(inst.signal_cov().mat());
        const oracle::Mat sigma_e = oracle::from(inst.noise_cov().mat());
        const oracle::Mat t = oracle::from(inst.transform());
        const Matrix gain_ref = oracle::to_matrix(oracle::gain(sigma_x, t));
        const Matrix cov_ref = oracle::to_matrix(oracle::conditional_cov(sigma_x, sigma_e, t));

        CHECK(test_support::max_abs_diff(stats.gain, gain_ref) <= 1e-8);
        CHECK(test_support::max_abs_diff(stats.cov.mat(), cov_ref) <= 1e-8);
    }
}

TEST_CASE("conditional covariance stays positive definite across random instances") {
    RngStream rng(34, 0);
    for (int rep = 0; rep < 1000; ++rep) {
        const auto dims = test_support::random_dims(8, rng);
        const ProblemInstance inst = random_instance(dims.n, dims.m, rng);
        const ConditionalStats stats = conditional_stats(inst);
        const EigenPair eig = eig_sym(stats.cov, EigenOrder::ascending);
        CHECK(eig.values.front() > 0.0);
    }
}

TEST_CASE("whitener squares to the inverse conditional covariance") {
    RngStream rng(35, 0);
    const ProblemInstance inst = random_instance(6, 2, rng);
    const ConditionalStats stats = conditional_stats(inst);
    const Matrix should_be_identity = stats.whitener.transposed() * stats.whitener * stats.cov.mat();
    CHECK(test_support::max_abs_diff(should_be_identity, Matrix::identity(6)) <= 1e-9);
}

// ============================================================================
// map_decide
// ============================================================================

TEST_CASE("map_decide returns 0 when y equals the first conditional mean") {
    RngStream rng(36, 0);
    const ProblemInstance inst = random_instance(5, 2, rng);
    const ConditionalStats stats = conditional_stats(inst);
    const Vec z0 = rng.normal_vector(2);
    const Vec z1 = rng.normal_vector(2);
    CHECK(map_decide(stats, z0, z1, stats.mean_given(z0)) == 0);
}

TEST_CASE("map_decide ties break to hypothesis 0") {
    RngStream rng(37, 0);
    const ProblemInstance inst = random_instance(4, 2, rng);
    const ConditionalStats stats = conditional_stats(inst);
    const Vec z = rng.normal_vector(2);
    for (int rep = 0; rep < 100; ++rep) {
        const Vec y = rng.normal_vector(4);
        CHECK(map_decide(stats, z, z, y) == 0);
    }
}

TEST_CASE("map_decide picks the brute-force whitened argmin") {
    RngStream rng(38, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const auto dims = test_support::random_dims(7, rng);
        const ProblemInstance inst = random_instance(dims.n, dims.m, rng);
        const ConditionalStats stats = conditional_stats(inst);
        const Vec z0 = rng.normal_vector(dims.m);
        const Vec z1 = rng.normal_vector(dims.m);
        const Vec y = rng.normal_vector(dims.n);

        const oracle::Mat cov = oracle::from(stats.cov.mat());
        const double d0 = oracle::mahalanobis2(cov, y - stats.mean_given(z0));
        const double d1 = oracle::mahalanobis2(cov, y - stats.mean_given(z1));
        const int expected = (d0 - d1 <= 1e-12) ? 0 : 1;
        CHECK(map_decide(stats, z0, z1, y) == expected);
    }
}

TEST_CASE("map_decide on a constructed pair of whitened distances 3 and 2") {
    RngStream rng(39, 0);
    const ProblemInstance inst = random_instance(5, 2, rng);
    const ConditionalStats stats = conditional_stats(inst);
    const Cholesky cond_chol = Cholesky::factor(stats.cov);

    // Scale the partial-information pair so the whitened distance between the
    // conditional means is exactly 3 (inside [1, 5], so a point with
    // distances 3 and 2 to the two means exists).
    Vec z0 = rng.normal_vector(2);
    Vec z1 = rng.normal_vector(2);
    const double sep = whitened_separation(stats, z0, z1);
    REQUIRE(sep > 0.0);
    const double target_gap = 3.0;
    for (auto* z : {&z0, &z1})
        for (double& v : *z) v *= target_gap / sep;

    // Whitened-space construction: distances r0 = 3, r1 = 2 from the images
    // of the two means.
    const Vec a0 = stats.whitener * stats.mean_given(z0);
    const Vec a1 = stats.whitener * stats.mean_given(z1);
    const Vec diff = a1 - a0;
    const double d = norm(diff);
    REQUIRE(close_abs(d, 3.0, 1e-9));
    const double r0 = 3.0, r1 = 2.0;
    const double along = (d * d + r0 * r0 - r1 * r1) / (2.0 * d);
    const double across = std::sqrt(r0 * r0 - along * along);

    Vec unit = (1.0 / d) * diff;
    Vec ortho = rng.normal_vector(5);
    const double proj = dot(ortho, unit);
    ortho = ortho - proj * unit;
    const double ortho_norm = norm(ortho);
    REQUIRE(ortho_norm > 1e-12);
    ortho = (1.0 / ortho_norm) * ortho;

    Vec point = a0;
    for (std::size_t i = 0; i < point.size(); ++i) point[i] += along * unit[i] + across * ortho[i];

    // Map back out of the whitened space: y = L * point for cov = L Lᵀ.
    const Vec y = cond_chol.lower() * point;

    const oracle::Mat cov = oracle::from(stats.cov.mat());
    CHECK(close_abs(std::sqrt(oracle::mahalanobis2(cov, y - stats.mean_given(z0))), 3.0, 1e-8));
    CHECK(close_abs(std::sqrt(oracle::mahalanobis2(cov, y - stats.mean_given(z1))), 2.0, 1e-8));
    CHECK(map_decide(stats, z0, z1, y) == 1);
}

TEST_CASE("map_decide is invariant under invertible recombination of the transform") {
    RngStream rng(40, 0);
    for (int rep = 0; rep < 5; ++rep) {
        const std::size_t n = 6, m = 2;
        const SymMatrix sigma_x = random_psd(n, 0.1, 2.0, rng);
        const SymMatrix sigma_e = random_psd(n, 0.1, 2.0, rng);
        const Matrix t = random_full_rank_t(n, m, rng);

        // Random invertible 2x2 combination A.
        Matrix a(2, 2);
        do {
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) a(i, j) = rng.normal();
        } while (std::abs(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) < 0.1);

        const ProblemInstance inst(sigma_x, sigma_e, t);
        const ProblemInstance recombined(sigma_x, sigma_e, a * t);
        const ConditionalStats stats = conditional_stats(inst);
        const ConditionalStats stats2 = conditional_stats(recombined);

        for (int trial = 0; trial < 40; ++trial) {
            const Vec x0 = rng.normal_vector(n);
            const Vec x1 = rng.normal_vector(n);
            const Vec y = rng.normal_vector(n);
            const Vec z0 = t * x0, z1 = t * x1;
            const Vec w0 = (a * t) * x0, w1 = (a * t) * x1;
            CHECK(map_decide(stats, z0, z1, y) == map_decide(stats2, w0, w1, y));
        }
    }
}

// ============================================================================
// conditional_error_prob / chernoff_conditional
// ============================================================================

TEST_CASE("conditional_error_prob equal partial information is a coin toss") {
    RngStream rng(41, 0);
    const ProblemInstance inst = random_instance(4, 2, rng);
    const ConditionalStats stats = conditional_stats(inst);
    const Vec z = rng.normal_vector(2);
    CHECK(conditional_error_prob(stats, z, z) == 0.5);
    CHECK(chernoff_conditional(stats, z, z) == 0.5);
}

TEST_CASE("conditional_error_prob worked scalar case") {
    const ConditionalStats stats = conditional_stats(worked_instance());
    // z0 = 2, z1 = -2: whitened separation 4, so the error is Q(2).
    const double p = conditional_error_prob(stats, Vec{2.0}, Vec{-2.0});
    CHECK(close_abs(p, 0.022750131948179195, 1e-12));
    CHECK(close_abs(p, q_function(2.0), 1e-15));

    const double bound = chernoff_conditional(stats, Vec{2.0}, Vec{-2.0});
    CHECK(close_abs(bound, 0.5 * std::exp(-2.0), 1e-15));
    CHECK(bound >= p);
}

TEST_CASE("conditional_error_prob is symmetric and bounded") {
    RngStream rng(42, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const auto dims = test_support::random_dims(7, rng);
        const ProblemInstance inst = random_instance(dims.n, dims.m, rng);
        const ConditionalStats stats = conditional_stats(inst);
        const Vec z0 = rng.normal_vector(dims.m);
        const Vec z1 = rng.normal_vector(dims.m);
        const double p01 = conditional_error_prob(stats, z0, z1);
        const double p10 = conditional_error_prob(stats, z1, z0);
        CHECK(close_abs(p01, p10, 1e-14));
        CHECK(p01 > 0.0);
        CHECK(p01 <= 0.5);

        const double chern = chernoff_conditional(stats, z0, z1);
        CHECK(p01 <= chern);
        CHECK(chern <= 0.5);
    }
}

TEST_CASE("chernoff_conditional strictly decreases when the gap doubles") {
    RngStream rng(43, 0);
    const ProblemInstance inst = random_instance(5, 2, rng);
    const ConditionalStats stats = conditional_stats(inst);
    const Vec z0 = rng.normal_vector(2);
    const Vec z1 = rng.normal_vector(2);
    const Vec z0_far = z0 + (z0 - z1);  // doubles z0 - z1 around z1... keep z1
    CHECK(chernoff_conditional(stats, z0_far, z1) < chernoff_conditional(stats, z0, z1));
}

// ============================================================================
// expected_chernoff_bound
// ============================================================================

TEST_CASE("expected_chernoff_bound on the optimally reduced worked instance") {
    const ProblemInstance inst(SymMatrix::diagonal({2.0, 1.0}), SymMatrix::identity(2),
                               Matrix{{1.0 / std::sqrt(2.0), 0.0}});
    const BoundReport report = expected_chernoff_bound(inst);
    CHECK(close_abs(report.j_value, 2.0, 1e-12));
    CHECK(close_abs(report.expected_chernoff, 0.5 / std::sqrt(2.0), 1e-12));
}

TEST_CASE("expected_chernoff_bound matches the raw determinant route") {
    RngStream rng(44, 0);
    for (int rep = 0; rep < 30; ++rep) {
        const auto dims = test_support::random_dims(9, rng);
        const ProblemInstance inst = random_instance(dims.n, dims.m, rng);
        const BoundReport report = expected_chernoff_bound(inst);
        const double j_ref = oracle::j_value(oracle::from(inst.signal_cov().mat()),
                                             oracle::from(inst.noise_cov().mat()),
                                             oracle::from(inst.transform()));
        CHECK(close_rel(report.j_value, j_ref, 1e-8));
        CHECK(report.j_value >= 1.0 - 1e-9);
        CHECK(report.expected_chernoff > 0.0);
        CHECK(report.expected_chernoff <= 0.5);
    }
}

TEST_CASE("expected_chernoff_bound is invariant under left recombination") {
    RngStream rng(45, 0);
    const std::size_t n = 7, m = 3;
    const SymMatrix sigma_x = random_psd(n, 0.1, 2.0, rng);
    const SymMatrix sigma_e = random_psd(n, 0.1, 2.0, rng);
    const Matrix t = random_full_rank_t(n, m, rng);
    const double j_base = expected_chernoff_bound(ProblemInstance(sigma_x, sigma_e, t)).j_value;

    for (int rep = 0; rep < 20; ++rep) {
        Matrix a(m, m);
        double det;
        do {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) a(i, j) = rng.normal();
            det = oracle::det(oracle::from(a));
        } while (std::abs(det) < 0.05);
        const double j = expected_chernoff_bound(ProblemInstance(sigma_x, sigma_e, a * t)).j_value;
        CHECK(close_rel(j, j_base, 1e-8));
    }
}

TEST_CASE("expected bound dominates the average closed-form conditional error") {
    RngStream rng(46, 0);
    for (int rep = 0; rep < 3; ++rep) {
        const auto dims = test_support::random_dims(7, rng);
        const ProblemInstance inst = random_instance(dims.n, dims.m, rng);
        const ConditionalStats stats = conditional_stats(inst);
        const BoundReport bound = expected_chernoff_bound(inst);
        const Cholesky sx = Cholesky::factor(inst.signal_cov());

        // Average of the exact conditional error over sampled codeword pairs:
        // a direct estimate of the unconditional error the bound caps.
        const int pairs = 10000;
        const Vec zero(dims.n, 0.0);
        double sum = 0.0, sum2 = 0.0;
        for (int k = 0; k < pairs; ++k) {
            const Vec x0 = sample_gaussian(zero, sx, rng);
            const Vec x1 = sample_gaussian(zero, sx, rng);
            const double p = conditional_error_prob(stats, inst.transform() * x0, inst.transform() * x1);
            sum += p;
            sum2 += p * p;
        }
        const double mean = sum / pairs;
        const double std_err = std::sqrt((sum2 / pairs - mean * mean) / pairs);
        CHECK(mean <= bound.expected_chernoff + 3.0 * std_err);
    }
}

TEST_CASE("equal partial information degrades detection to a coin toss") {
    RngStream rng(47, 0);
    const ProblemInstance inst = random_instance(5, 2, rng);
    const ConditionalStats stats = conditional_stats(inst);
    const Cholesky cond_chol = Cholesky::factor(stats.cov);
    const Vec z = rng.normal_vector(2);
    const Vec mean = stats.mean_given(z);

    // With z0 = z1 the rule always answers 0, so errors occur exactly when
    // the transmitted bit was 1.
    const int trials = 20000;
    int errors = 0;
    for (int k = 0; k < trials; ++k) {
        const int bit = rng.bernoulli(0.5) ? 1 : 0;
        const Vec y = sample_gaussian(mean, cond_chol, rng);
        const int decided = map_decide(stats, z, z, y);
        CHECK(decided == 0);
        if (decided != bit) ++errors;
    }
    const double p_hat = static_cast<double>(errors) / trials;
    CHECK(std::abs(p_hat - 0.5) <= 3.0 * 0.5 / std::sqrt(static_cast<double>(trials)));
}

// ============================================================================
// sample_trial
// ============================================================================

TEST_CASE("sample_trial is deterministic for a fixed stream") {
    RngStream r1(50, 0), r2(50, 0);
    const ProblemInstance inst = worked_instance();
    const Trial a = sample_trial(inst, r1);
    const Trial b = sample_trial(inst, r2);
    CHECK(a.bit == b.bit);
    CHECK(a.book.x0 == b.book.x0);
    CHECK(a.book.x1 == b.book.x1);
    CHECK(a.y == b.y);
}

TEST_CASE("sample_trial derives the partial information from the codewords") {
    RngStream rng(51, 0);
    const ProblemInstance inst = random_instance(6, 2, rng);
    for (int rep = 0; rep < 50; ++rep) {
        const Trial trial = sample_trial(inst, rng);
        CHECK(trial.book.z0 == inst.transform() * trial.book.x0);
        CHECK(trial.book.z1 == inst.transform() * trial.book.x1);
    }
}

TEST_CASE("sample_trial bit is a fair coin") {
    RngStream rng(52, 0);
    const ProblemInstance inst = worked_instance();
    const Cholesky sx = Cholesky::factor(inst.signal_cov());
    const Cholesky se = Cholesky::factor(inst.noise_cov());
    const int n = 100000;
    int ones = 0;
    for (int i = 0; i < n; ++i) ones += sample_trial(inst, sx, se, rng).bit;
    const double freq = static_cast<double>(ones) / n;
    CHECK(std::abs(freq - 0.5) <= 3.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("sample_trial codeword sample covariance approaches the signal covariance") {
    RngStream rng(53, 0);
    const SymMatrix sigma_x(Matrix{{1.5, 0.4}, {0.4, 0.8}});
    const ProblemInstance inst(sigma_x, SymMatrix::identity(2), Matrix{{1.0, 0.0}});
    const Cholesky sx = Cholesky::factor(inst.signal_cov());
    const Cholesky se = Cholesky::factor(inst.noise_cov());
    const int n = 100000;
    Matrix acc(2, 2);
    for (int i = 0; i < n; ++i) {
        const Trial trial = sample_trial(inst, sx, se, rng);
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) acc(a, b) += trial.book.x0[a] * trial.book.x0[b];
    }
    acc *= 1.0 / n;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            CHECK(std::abs(acc(a, b) - sigma_x(a, b)) <= 0.05 * std::max(1.0, std::abs(sigma_x(a, b))));
}
