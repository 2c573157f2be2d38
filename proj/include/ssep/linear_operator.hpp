#pragma once

#include <functional>
#include <memory>

#include "ssep/matrix.hpp"

namespace ssep {

// Matrix-free linear map used by the first-order solver. apply maps a
// cols-vector to a rows-vector; apply_adjoint the reverse.
struct LinearOperator {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    std::function<Vector(const Vector&)> apply;
    std::function<Vector(const Vector&)> apply_adjoint;
};

inline LinearOperator dense_operator(Matrix m) {
    auto held = std::make_shared<const Matrix>(std::move(m));
    LinearOperator op;
    op.rows = held->rows();
    op.cols = held->cols();
    op.apply = [held](const Vector& x) -> Vector { return *held * x; };
    op.apply_adjoint = [held](const Vector& z) -> Vector { return held->adjoint() * z; };
    return op;
}

/// Block-diagonal composition: [p1 0; 0 p2].
inline LinearOperator block_diag_operator(LinearOperator p1, LinearOperator p2) {
    auto a = std::make_shared<LinearOperator>(std::move(p1));
    auto b = std::make_shared<LinearOperator>(std::move(p2));
    LinearOperator op;
    op.rows = a->rows + b->rows;
    op.cols = a->cols + b->cols;
    op.apply = [a, b](const Vector& x) -> Vector {
        Vector out(a->rows + b->rows);
        out.head(a->rows) = a->apply(x.head(a->cols));
        out.tail(b->rows) = b->apply(x.tail(b->cols));
        return out;
    };
    op.apply_adjoint = [a, b](const Vector& z) -> Vector {
        Vector out(a->cols + b->cols);
        out.head(a->cols) = a->apply_adjoint(z.head(a->rows));
        out.tail(b->cols) = b->apply_adjoint(z.tail(b->rows));
        return out;
    };
    return op;
}

/// Horizontal concatenation [p1 p2] acting on stacked inputs.
inline LinearOperator hcat_operator(LinearOperator p1, LinearOperator p2) {
    auto a = std::make_shared<LinearOperator>(std::move(p1));
    auto b = std::make_shared<LinearOperator>(std::move(p2));
    if (a->rows != b->rows) throw DimensionMismatch("hcat_operator: row counts differ");
    LinearOperator op;
    op.rows = a->rows;
    op.cols = a->cols + b->cols;
    op.apply = [a, b](const Vector& x) -> Vector {
        return a->apply(x.head(a->cols)) + b->apply(x.tail(b->cols));
    };
    op.apply_adjoint = [a, b](const Vector& z) -> Vector {
        Vector out(a->cols + b->cols);
        out.head(a->cols) = a->apply_adjoint(z);
        out.tail(b->cols) = b->apply_adjoint(z);
        return out;
    };
    return op;
}

inline LinearOperator identity_operator(Eigen::Index n) {
    LinearOperator op;
    op.rows = n;
    op.cols = n;
    op.apply = [](const Vector& x) -> Vector { return x; };
    op.apply_adjoint = [](const Vector& z) -> Vector { return z; };
    return op;
}

}  // namespace ssep
