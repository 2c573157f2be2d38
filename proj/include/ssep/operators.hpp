#pragma once

#include <cmath>
#include <memory>
#include <numbers>

#include "ssep/linear_operator.hpp"
#include "ssep/matrix.hpp"

namespace ssep {

// Images are h x w grids vectorized column-major: pixel (r, c) sits at
// index c*h + r, matching the matrix container layout.

/// Orthonormal DCT-II matrix of size n.
inline RealMatrix dct_matrix(int n) {
    if (n < 1) throw Error("dct_matrix: n must be positive");
    RealMatrix t(n, n);
    const double c0 = std::sqrt(1.0 / n);
    const double ck = std::sqrt(2.0 / n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            t(k, j) = (k == 0 ? c0 : ck) *
                      std::cos(std::numbers::pi * k * (2.0 * j + 1.0) / (2.0 * n));
    return t;
}

/// Regularized periodic finite-difference analysis operator: horizontal
/// differences, vertical differences, then tau * identity, stacked to
/// 3*h*w rows. The tau block makes the operator full column rank.
inline Matrix finite_difference_operator(int h, int w, double tau = 1e-3) {
    if (h < 2 || w < 2) throw Error("finite_difference_operator: need h, w >= 2");
    if (tau <= 0.0) throw Error("finite_difference_operator: tau must be positive");
    const int hw = h * w;
    Matrix d = Matrix::Zero(3 * hw, hw);
    for (int c = 0; c < w; ++c)
        for (int r = 0; r < h; ++r) {
            const int p = c * h + r;
            const int right = ((c + 1) % w) * h + r;
            const int down = c * h + (r + 1) % h;
            d(p, right) += 1.0;
            d(p, p) -= 1.0;
            d(hw + p, down) += 1.0;
            d(hw + p, p) -= 1.0;
            d(2 * hw + p, p) = tau;
        }
    return d;
}

/// Orthonormal 2-D DCT-II analysis operator (h*w x h*w), the Kronecker
/// product of the 1-D transforms under column-major vectorization.
inline Matrix dct2_operator(int h, int w) {
    if (h < 2 || w < 2) throw Error("dct2_operator: need h, w >= 2");
    const RealMatrix th = dct_matrix(h);
    const RealMatrix tw = dct_matrix(w);
    const int hw = h * w;
    Matrix d(hw, hw);
    for (int cw = 0; cw < w; ++cw)
        for (int ch = 0; ch < h; ++ch)
            for (int jw = 0; jw < w; ++jw)
                for (int jh = 0; jh < h; ++jh)
                    d(cw * h + ch, jw * h + jh) = tw(cw, jw) * th(ch, jh);
    return d;
}

/// Matrix-free version of finite_difference_operator for image-scale solves.
inline LinearOperator finite_difference_op(int h, int w, double tau = 1e-3) {
    if (h < 2 || w < 2) throw Error("finite_difference_op: need h, w >= 2");
    const int hw = h * w;
    LinearOperator op;
    op.rows = 3 * hw;
    op.cols = hw;
    op.apply = [h, w, hw, tau](const Vector& x) -> Vector {
        Vector out(3 * hw);
        for (int c = 0; c < w; ++c)
            for (int r = 0; r < h; ++r) {
                const int p = c * h + r;
                out(p) = x(((c + 1) % w) * h + r) - x(p);
                out(hw + p) = x(c * h + (r + 1) % h) - x(p);
                out(2 * hw + p) = tau * x(p);
            }
        return out;
    };
    op.apply_adjoint = [h, w, hw, tau](const Vector& z) -> Vector {
        Vector out = Vector::Zero(hw);
        for (int c = 0; c < w; ++c)
            for (int r = 0; r < h; ++r) {
                const int p = c * h + r;
                out(((c + 1) % w) * h + r) += z(p);
                out(p) -= z(p);
                out(c * h + (r + 1) % h) += z(hw + p);
                out(p) -= z(hw + p);
                out(p) += tau * z(2 * hw + p);
            }
        return out;
    };
    return op;
}

/// Matrix-free 2-D DCT-II via separable 1-D transforms.
inline LinearOperator dct2_op(int h, int w) {
    if (h < 2 || w < 2) throw Error("dct2_op: need h, w >= 2");
    auto th = std::make_shared<const Matrix>(dct_matrix(h).cast<Complex>());
    auto tw = std::make_shared<const Matrix>(dct_matrix(w).cast<Complex>());
    LinearOperator op;
    op.rows = static_cast<Eigen::Index>(h) * w;
    op.cols = op.rows;
    op.apply = [th, tw, h, w](const Vector& x) -> Vector {
        Eigen::Map<const Matrix> xm(x.data(), h, w);
        const Matrix ym = *th * xm * tw->transpose();
        return Eigen::Map<const Vector>(ym.data(), ym.size());
    };
    op.apply_adjoint = [th, tw, h, w](const Vector& z) -> Vector {
        Eigen::Map<const Matrix> zm(z.data(), h, w);
        const Matrix xm = th->transpose() * zm * *tw;
        return Eigen::Map<const Vector>(xm.data(), xm.size());
    };
    return op;
}

/// The measurement map of the image demo: A = [I I] acting on two stacked
/// components of dimension d.
inline LinearOperator sum_two_components_op(Eigen::Index d) {
    LinearOperator op;
    op.rows = d;
    op.cols = 2 * d;
    op.apply = [d](const Vector& x) -> Vector { return x.head(d) + x.tail(d); };
    op.apply_adjoint = [d](const Vector& z) -> Vector {
        Vector out(2 * d);
        out.head(d) = z;
        out.tail(d) = z;
        return out;
    };
    return op;
}

}  // namespace ssep
