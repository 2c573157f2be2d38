#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "ssep/coherence.hpp"
#include "ssep/rng.hpp"

using namespace ssep;

namespace {

double brute_force_coherence(const Matrix& m) {
    const Matrix g = testing::loop_gram(m, m);
    double best = 0.0;
    double wmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < m.cols(); ++j) wmin = std::min(wmin, m.col(j).norm());
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j)
            if (i != j) best = std::max(best, std::abs(g(i, j)));
    return best / (wmin * wmin);
}

}  // namespace

TEST_CASE("coherence of orthonormal columns is zero") {
    REQUIRE(coherence(Matrix::Identity(3, 3)) == 0.0);
}

TEST_CASE("coherence matches a hand Gram computation") {
    Matrix m(2, 2);
    m << 1.0, 1.0, 0.0, 1.0;
    // columns (1,0) and (1,1): inner product 1, omega_min = 1
    REQUIRE(coherence(m) == Catch::Approx(1.0).epsilon(1e-14));
    REQUIRE(coherence(m) == Catch::Approx(brute_force_coherence(m)).epsilon(1e-14));
}

TEST_CASE("coherence is scale invariant") {
    Rng rng(31);
    const Matrix m = gaussian_matrix(rng, 5, 4, true);
    REQUIRE(coherence(Matrix(5.0 * m)) == Catch::Approx(coherence(m)).epsilon(1e-10));
}

TEST_CASE("coherence preconditions") {
    REQUIRE_THROWS_AS(coherence(Matrix::Identity(3, 1)), TooFewColumns);
    Matrix z = Matrix::Identity(3, 3);
    z.col(2).setZero();
    REQUIRE_THROWS_AS(coherence(z), ZeroColumn);
}

TEST_CASE("coherence vanishes exactly for pairwise orthogonal columns and only then") {
    Matrix orth(4, 2);
    orth << 2.0, 0.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0;
    REQUIRE(coherence(orth) == 0.0);
    Matrix tilted = orth;
    tilted(0, 1) = 0.1;
    REQUIRE(coherence(tilted) > 0.0);
}

TEST_CASE("mutual coherence includes the diagonal") {
    REQUIRE(mutual_coherence(Matrix::Identity(2, 2), Matrix::Identity(2, 2)) ==
            Catch::Approx(1.0));
}

TEST_CASE("mutual coherence against the entrywise Gram oracle") {
    Matrix n(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    n << s, s, s, -s;
    const double lib = mutual_coherence(Matrix::Identity(2, 2), n);
    REQUIRE(lib == Catch::Approx(0.7071067811865475).epsilon(1e-12));
    const Matrix g = testing::loop_gram(Matrix::Identity(2, 2), n);
    REQUIRE(lib == Catch::Approx(g.cwiseAbs().maxCoeff()).epsilon(1e-12));
}

TEST_CASE("mutual coherence is symmetric") {
    Rng rng(32);
    const Matrix m = gaussian_matrix(rng, 6, 3, true);
    const Matrix n = gaussian_matrix(rng, 6, 5, true);
    REQUIRE(mutual_coherence(m, n) == Catch::Approx(mutual_coherence(n, m)).epsilon(1e-12));
    REQUIRE(mutual_coherence(m, n) >= 0.0);
}

TEST_CASE("raw off-diagonal maximum") {
    REQUIRE(raw_max_offdiag(Matrix::Identity(3, 3)) == 0.0);
    Matrix m(2, 2);
    m << 2.0, 2.0, 0.0, 2.0;
    REQUIRE(raw_max_offdiag(m) == Catch::Approx(4.0));

    Rng rng(33);
    const Matrix r = gaussian_matrix(rng, 5, 4, true);
    const auto w = column_norm_extremes(r);
    REQUIRE(raw_max_offdiag(r) ==
            Catch::Approx(coherence(r) * w.omega_min * w.omega_min).epsilon(1e-12));
}

TEST_CASE("profile of identity dictionaries") {
    const Matrix i2 = Matrix::Identity(2, 2);
    const auto p = profile(i2, i2, i2, i2);
    REQUIRE(p.mu_hat_1 == 0.0);
    REQUIRE(p.mu_hat_2 == 0.0);
    REQUIRE(p.mu_hat_m == Catch::Approx(1.0));
    REQUIRE(p.mu_hat_max == Catch::Approx(1.0));
    REQUIRE(p.omega_min == Catch::Approx(1.0));
    REQUIRE(p.omega_max == Catch::Approx(1.0));
}

TEST_CASE("synthesis embedding: identity analysis operator gives B = A D") {
    Rng rng(34);
    const Matrix a = gaussian_matrix(rng, 6, 4, false);
    const Matrix d1 = gaussian_matrix(rng, 4, 8, false);
    const Matrix d2 = gaussian_matrix(rng, 4, 8, false);
    const Matrix eye8 = Matrix::Identity(8, 8);
    const auto p = profile(a * d1, eye8, a * d2, eye8);
    REQUIRE(p.mu_hat_1 == Catch::Approx(coherence(Matrix(a * d1))).margin(1e-12));
    REQUIRE(p.mu_hat_2 == Catch::Approx(coherence(Matrix(a * d2))).margin(1e-12));
    REQUIRE(p.mu_hat_m ==
            Catch::Approx(mutual_coherence(Matrix(a * d1), Matrix(a * d2))).margin(1e-12));
}

TEST_CASE("stacked off-diagonal maximum by brute force") {
    Rng rng(35);
    const Matrix b1 = gaussian_matrix(rng, 8, 4, true);
    const Matrix b2 = gaussian_matrix(rng, 8, 4, true);
    const auto p = profile_from_effective(b1, b2);

    Matrix stacked(8, 8);
    stacked << b1, b2;
    const Matrix g = testing::loop_gram(stacked, stacked);
    double best = 0.0;
    for (Eigen::Index i = 0; i < 8; ++i)
        for (Eigen::Index j = 0; j < 8; ++j)
            if (i != j) best = std::max(best, std::abs(g(i, j)));
    REQUIRE(p.mu == Catch::Approx(best).epsilon(1e-12));
    REQUIRE(p.mu >= std::max(p.mu_1, p.mu_2));
    REQUIRE(p.mu >= p.mu_m);
    REQUIRE(p.mu_hat_max == std::max({p.mu_hat_1, p.mu_hat_2, p.mu_hat_m}));
}

TEST_CASE("profile swap symmetry") {
    Rng rng(36);
    const Matrix a1 = gaussian_matrix(rng, 6, 4, false);
    const Matrix a2 = gaussian_matrix(rng, 6, 4, false);
    const Matrix psi1 = random_orthonormal(rng, 6, 4, false);
    const Matrix psi2 = random_orthonormal(rng, 6, 4, false);
    const auto p = profile(a1, psi1, a2, psi2);
    const auto q = profile(a2, psi2, a1, psi1);
    REQUIRE(p.mu_hat_1 == q.mu_hat_2);
    REQUIRE(p.mu_hat_2 == q.mu_hat_1);
    REQUIRE(p.mu_hat_m == q.mu_hat_m);
    REQUIRE(p.mu == q.mu);
    REQUIRE(p.omega_min == q.omega_min);
    REQUIRE(p.omega_max == q.omega_max);
}
