#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "ssep/operators.hpp"
#include "ssep/rng.hpp"

using namespace ssep;

TEST_CASE("1-D DCT matches the definition and is orthonormal") {
    const int n = 8;
    const RealMatrix t = dct_matrix(n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            const double c = (k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n));
            REQUIRE(t(k, j) ==
                    Catch::Approx(c * std::cos(std::numbers::pi * k * (2 * j + 1) / (2.0 * n)))
                        .margin(1e-15));
        }
    REQUIRE((t * t.transpose() - RealMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("finite difference operator on a constant image") {
    const int h = 4, w = 3;
    const double tau = 1e-3;
    const Matrix d = finite_difference_operator(h, w, tau);
    REQUIRE(d.rows() == 3 * h * w);
    REQUIRE(d.cols() == h * w);
    const Vector ones = Vector::Ones(h * w);
    const Vector out = d * ones;
    REQUIRE(out.head(2 * h * w).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE(out.cwiseAbs().sum() == Catch::Approx(tau * ones.cwiseAbs().sum()).epsilon(1e-12));
}

TEST_CASE("finite difference operator on the 2x2 checkerboard") {
    const Matrix d = finite_difference_operator(2, 2, 1e-3);
    Vector x(4);  // column-major pixels: (0,0),(1,0),(0,1),(1,1)
    x << 1.0, -1.0, -1.0, 1.0;
    const Vector out = d * x;
    for (int i = 0; i < 8; ++i) REQUIRE(std::abs(out(i)) == Catch::Approx(2.0).margin(1e-15));
}

TEST_CASE("regularization keeps the difference operator full column rank") {
    const double tau = 1e-3;
    const Matrix d = finite_difference_operator(4, 4, tau);
    REQUIRE(smallest_singular_value(d) >= tau - 1e-15);
}

TEST_CASE("2-D DCT operator is orthonormal and concentrates a constant image") {
    const int h = 4, w = 4;
    const Matrix d = dct2_operator(h, w);
    REQUIRE((gram(d, d) - Matrix::Identity(h * w, h * w)).cwiseAbs().maxCoeff() < 1e-10);
    const Vector coef = d * Vector::Ones(h * w);
    REQUIRE(std::abs(coef(0)) == Catch::Approx(4.0).epsilon(1e-12));  // DC = sqrt(hw) * mean
    REQUIRE(coef.tail(h * w - 1).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("a pure grid cosine maps to one dominant coefficient") {
    const int h = 8, w = 8;
    const Matrix d = dct2_operator(h, w);
    Vector x(h * w);
    for (int c = 0; c < w; ++c)
        for (int r = 0; r < h; ++r)
            x(c * h + r) = std::cos(std::numbers::pi * 3 * (2 * r + 1) / (2.0 * h)) *
                           std::cos(std::numbers::pi * 5 * (2 * c + 1) / (2.0 * w));
    const Vector coef = d * x;
    const int peak = 5 * h + 3;
    const double peak_mag = std::abs(coef(peak));
    for (int i = 0; i < h * w; ++i) {
        if (i == peak) continue;
        REQUIRE(peak_mag > 100.0 * std::abs(coef(i)));
    }
}

TEST_CASE("matrix-free operators agree with the dense constructions") {
    const int h = 5, w = 7;
    Rng rng(81);
    Vector x(h * w);
    for (int i = 0; i < h * w; ++i) x(i) = rng.complex_normal();
    Vector z(3 * h * w);
    for (int i = 0; i < 3 * h * w; ++i) z(i) = rng.complex_normal();

    const Matrix fd_dense = finite_difference_operator(h, w, 2e-3);
    const LinearOperator fd = finite_difference_op(h, w, 2e-3);
    REQUIRE((fd.apply(x) - fd_dense * x).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((fd.apply_adjoint(z) - fd_dense.adjoint() * z).cwiseAbs().maxCoeff() < 1e-12);

    const Matrix dct_dense = dct2_operator(h, w);
    const LinearOperator dct = dct2_op(h, w);
    Vector zc(h * w);
    for (int i = 0; i < h * w; ++i) zc(i) = rng.complex_normal();
    REQUIRE((dct.apply(x) - dct_dense * x).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((dct.apply_adjoint(zc) - dct_dense.adjoint() * zc).cwiseAbs().maxCoeff() < 1e-12);

    const LinearOperator sum = sum_two_components_op(h * w);
    Vector xx(2 * h * w);
    xx << x, x;
    REQUIRE((sum.apply(xx) - 2.0 * x).cwiseAbs().maxCoeff() < 1e-14);
    REQUIRE((sum.apply_adjoint(zc).head(h * w) - zc).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adjoint consistency of the matrix-free operators") {
    const int h = 4, w = 6;
    Rng rng(82);
    for (const auto& op : {finite_difference_op(h, w, 1e-3), dct2_op(h, w)}) {
        Vector x(op.cols), z(op.rows);
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.complex_normal();
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.complex_normal();
        const Complex lhs = z.dot(op.apply(x));       // <z, Op x>
        const Complex rhs = op.apply_adjoint(z).dot(x);  // <Op^H z, x> = <z, Op x>
        REQUIRE(std::abs(lhs - rhs) < 1e-10);
    }
}
