#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "ssep/problems.hpp"
#include "ssep/rng.hpp"

using namespace ssep;

TEST_CASE("analysis assembly stacks [A A] and block-diagonal Psi") {
    const Matrix i4 = Matrix::Identity(4, 4);
    const auto p = from_analysis(i4, i4, i4);
    REQUIRE(p.flavor == Flavor::Analysis);
    REQUIRE(p.stacked_a.rows() == 4);
    REQUIRE(p.stacked_a.cols() == 8);
    REQUIRE((p.stacked_a.leftCols(4) - i4).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((p.stacked_a.rightCols(4) - i4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("analysis assembly rejects mismatched operator widths") {
    Rng rng(51);
    const Matrix a = gaussian_matrix(rng, 3, 4, false);
    const Matrix psi_bad = gaussian_matrix(rng, 6, 5, false);
    const Matrix psi_ok = random_orthonormal(rng, 6, 4, false);
    REQUIRE_THROWS_AS(from_analysis(a, psi_bad, psi_ok), DimensionMismatch);
}

TEST_CASE("stacked Psi has exactly zero off-blocks") {
    Rng rng(52);
    const Matrix a = gaussian_matrix(rng, 4, 4, false);
    const Matrix psi1 = random_orthonormal(rng, 6, 4, false);
    const Matrix psi2 = random_orthonormal(rng, 6, 4, false);
    const auto p = from_analysis(a, psi1, psi2);
    REQUIRE(p.stacked_psi.rows() == 12);
    REQUIRE(p.stacked_psi.cols() == 8);
    REQUIRE(p.stacked_psi.topRightCorner(6, 4).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(p.stacked_psi.bottomLeftCorner(6, 4).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((p.stacked_psi.topLeftCorner(6, 4) - psi1).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((p.stacked_psi.bottomRightCorner(6, 4) - psi2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rank-deficient analysis operator is rejected") {
    const Matrix a = Matrix::Identity(4, 4);
    Matrix psi = Matrix::Zero(6, 4);
    psi.col(0).setOnes();
    psi.col(1).setOnes();
    psi(0, 2) = 1.0;
    psi(1, 3) = 1.0;
    REQUIRE_THROWS_AS(from_analysis(a, psi, Matrix::Identity(4, 4)), RankDeficient);
}

TEST_CASE("synthesis objective is the plain l1 norm of the coefficients") {
    Rng rng(53);
    const auto p = from_synthesis(Matrix::Identity(4, 4), gaussian_matrix(rng, 4, 8, false),
                                  gaussian_matrix(rng, 4, 8, false));
    Vector s(8);
    for (int i = 0; i < 8; ++i) s(i) = rng.complex_normal();
    REQUIRE((p.psi1 * s - s).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(p.d1 == 8);
    REQUIRE(p.d2 == 8);
}

TEST_CASE("synthesis effective dictionaries equal A D") {
    Rng rng(54);
    const Matrix a = gaussian_matrix(rng, 4, 4, false);
    const Matrix d1 = gaussian_matrix(rng, 4, 8, false);
    const Matrix d2 = gaussian_matrix(rng, 4, 8, false);
    const auto p = from_synthesis(a, d1, d2);
    const auto prof = profile(p);
    REQUIRE(prof.mu_hat_1 == Catch::Approx(coherence(Matrix(a * d1))).margin(1e-12));
    REQUIRE(prof.mu_hat_2 == Catch::Approx(coherence(Matrix(a * d2))).margin(1e-12));
}

TEST_CASE("synthesis requires redundancy and full rank") {
    Rng rng(55);
    const Matrix a = Matrix::Identity(4, 4);
    REQUIRE_THROWS_AS(
        from_synthesis(a, gaussian_matrix(rng, 4, 4, false), gaussian_matrix(rng, 4, 8, false)),
        DimensionMismatch);
    Matrix flat = Matrix::Zero(4, 8);
    flat.row(0).setOnes();
    REQUIRE_THROWS_AS(from_synthesis(a, flat, gaussian_matrix(rng, 4, 8, false)), RankDeficient);
}

TEST_CASE("degenerate hybrid with identity ingredients matches analysis") {
    const Matrix a = Matrix::Identity(4, 4);
    // A redundant identity-extension dictionary; with psi2 = I the hybrid and
    // analysis assemblies share A2 = A and psi blocks of matching shape.
    const auto hybrid = from_hybrid(a, Matrix::Identity(4, 4).leftCols(4), Matrix::Identity(4, 4));
    const auto analysis = from_analysis(a, Matrix::Identity(4, 4), Matrix::Identity(4, 4));
    REQUIRE((hybrid.stacked_a - analysis.stacked_a).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((hybrid.stacked_psi - analysis.stacked_psi).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hybrid dimension bookkeeping") {
    Rng rng(56);
    const Matrix a = gaussian_matrix(rng, 6, 8, false);
    const Matrix d1 = gaussian_matrix(rng, 8, 12, false);
    const Matrix psi2 = random_orthonormal(rng, 10, 8, false);
    const auto p = from_hybrid(a, d1, psi2);
    REQUIRE(p.flavor == Flavor::Hybrid);
    REQUIRE(p.stacked_a.rows() == 6);
    REQUIRE(p.stacked_a.cols() == 20);
    REQUIRE(p.stacked_psi.rows() == 22);
    REQUIRE(p.stacked_psi.cols() == 20);
}

TEST_CASE("hybrid profile equals the direct coherence computation") {
    Rng rng(57);
    const Matrix a = gaussian_matrix(rng, 6, 6, false);
    const Matrix d1 = gaussian_matrix(rng, 6, 9, false);
    const Matrix psi2 = random_orthonormal(rng, 8, 6, false);
    const auto p = from_hybrid(a, d1, psi2);
    const auto prof = profile(p);
    const Matrix b1 = a * d1;
    const Matrix b2 = a * pseudoinverse(psi2);
    REQUIRE(prof.mu_hat_1 == Catch::Approx(coherence(b1)).margin(1e-12));
    REQUIRE(prof.mu_hat_2 == Catch::Approx(coherence(b2)).margin(1e-12));
    REQUIRE(prof.mu_hat_m == Catch::Approx(mutual_coherence(b1, b2)).margin(1e-12));
}

TEST_CASE("split_solution splits and re-concatenates") {
    Rng rng(58);
    const Matrix a = Matrix::Identity(2, 2);
    const Matrix psi = Matrix::Identity(2, 2);
    const auto p = from_analysis(a, psi, psi);
    Vector x(4);
    x << 1.0, 2.0, 3.0, 4.0;
    const auto s = split_solution(p, x);
    REQUIRE(s.x1(0) == Complex(1.0, 0.0));
    REQUIRE(s.x1(1) == Complex(2.0, 0.0));
    REQUIRE(s.x2(0) == Complex(3.0, 0.0));
    REQUIRE(s.x2(1) == Complex(4.0, 0.0));
    Vector roundtrip(4);
    roundtrip << s.x1, s.x2;
    REQUIRE((roundtrip - x).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE_THROWS_AS(split_solution(p, Vector::Zero(5)), DimensionMismatch);
}

TEST_CASE("split_solution maps synthesis coefficients through the dictionary") {
    Rng rng(59);
    const Matrix d1 = gaussian_matrix(rng, 4, 6, false);
    const Matrix d2 = gaussian_matrix(rng, 4, 6, false);
    const auto p = from_synthesis(Matrix::Identity(4, 4), d1, d2);
    Vector s(12);
    for (int i = 0; i < 12; ++i) s(i) = rng.complex_normal();
    const auto sol = split_solution(p, s);
    REQUIRE((sol.signal1 - d1 * s.head(6)).cwiseAbs().maxCoeff() < 1e-14);
    REQUIRE((sol.signal2 - d2 * s.tail(6)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("pseudoinverse of the stacked Psi is block-diagonal in the block pseudoinverses") {
    Rng rng(60);
    const Matrix a = gaussian_matrix(rng, 4, 4, false);
    const Matrix psi1 = gaussian_matrix(rng, 6, 4, false);
    const Matrix psi2 = gaussian_matrix(rng, 7, 4, false);
    const auto p = from_analysis(a, psi1, psi2);
    const Matrix pinv_stacked = pseudoinverse(p.stacked_psi);
    const Matrix pinv1 = pseudoinverse(psi1);
    const Matrix pinv2 = pseudoinverse(psi2);
    REQUIRE((pinv_stacked.topLeftCorner(4, 6) - pinv1).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE((pinv_stacked.bottomRightCorner(4, 7) - pinv2).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE(pinv_stacked.topRightCorner(4, 7).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE((pinv_stacked * p.stacked_psi - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <
            1e-10);
    REQUIRE(sigma_min_stacked_psi(p) ==
            Catch::Approx(smallest_singular_value(p.stacked_psi)).epsilon(1e-10));
}

TEST_CASE("block profile matches quantities read off the stacked Gram") {
    Rng rng(61);
    const Matrix a = gaussian_matrix(rng, 5, 5, true);
    const Matrix psi1 = random_orthonormal(rng, 7, 5, true);
    const Matrix psi2 = random_orthonormal(rng, 6, 5, true);
    const auto p = from_analysis(a, psi1, psi2);
    const auto prof = profile(p);
    const Matrix b1 = a * pseudoinverse(psi1);
    const Matrix b2 = a * pseudoinverse(psi2);
    Matrix stacked(5, b1.cols() + b2.cols());
    stacked << b1, b2;
    const Matrix g = testing::loop_gram(stacked, stacked);
    double mu = 0.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j)
            if (i != j) mu = std::max(mu, std::abs(g(i, j)));
    REQUIRE(prof.mu == Catch::Approx(mu).margin(1e-12));
}
