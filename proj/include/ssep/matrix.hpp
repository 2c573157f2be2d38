#pragma once

#include <complex>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ssep/errors.hpp"

namespace ssep {

using Complex = std::complex<double>;

// Dense complex matrices/vectors are the universal carrier for measurement
// matrices, analysis operators, dictionaries and Gram matrices. Storage is
// column-major, matching the binary file format.
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

struct ColumnNormSummary {
    double omega_min = 0.0;
    double omega_max = 0.0;
};

inline void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw Error(std::string(what) + ": matrix has non-finite entries");
}

inline void require_nonempty(const Matrix& m, const char* what) {
    if (m.rows() == 0 || m.cols() == 0) throw Error(std::string(what) + ": matrix is empty");
}

/// Moore-Penrose left inverse of a full-column-rank matrix, computed via SVD.
/// rank_tol is relative to the largest singular value; columns are considered
/// rank deficient when sigma_min <= rank_tol * sigma_max.
inline Matrix pseudoinverse(const Matrix& m, double rank_tol = 1e-10) {
    require_nonempty(m, "pseudoinverse");
    require_finite(m, "pseudoinverse");
    if (rank_tol <= 0.0) throw Error("pseudoinverse: rank_tol must be positive");
    if (m.cols() > m.rows())
        throw RankDeficient("pseudoinverse: more columns than rows, cannot have full column rank");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smin > rank_tol * smax) || smax == 0.0)
        throw RankDeficient("pseudoinverse: smallest singular value " + std::to_string(smin) +
                            " below tolerance " + std::to_string(rank_tol * smax));
    return svd.matrixV() * sv.cwiseInverse().asDiagonal() *
           svd.matrixU().adjoint();
}

/// Smallest singular value of a nonempty matrix.
inline double smallest_singular_value(const Matrix& m) {
    require_nonempty(m, "smallest_singular_value");
    require_finite(m, "smallest_singular_value");
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    return sv(sv.size() - 1);
}

/// Min and max Euclidean column norms. Every column must be nonzero.
inline ColumnNormSummary column_norm_extremes(const Matrix& m) {
    require_nonempty(m, "column_norm_extremes");
    require_finite(m, "column_norm_extremes");
    ColumnNormSummary s{std::numeric_limits<double>::infinity(), 0.0};
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double nj = m.col(j).norm();
        if (nj == 0.0) throw ZeroColumn(static_cast<int>(j));
        s.omega_min = std::min(s.omega_min, nj);
        s.omega_max = std::max(s.omega_max, nj);
    }
    return s;
}

/// Joint column-norm extremes over two matrices.
inline ColumnNormSummary column_norm_extremes_pair(const Matrix& m, const Matrix& n) {
    const ColumnNormSummary a = column_norm_extremes(m);
    const ColumnNormSummary b = column_norm_extremes(n);
    return {std::min(a.omega_min, b.omega_min), std::max(a.omega_max, b.omega_max)};
}

/// Gram product M^H N.
inline Matrix gram(const Matrix& m, const Matrix& n) {
    require_nonempty(m, "gram");
    require_nonempty(n, "gram");
    if (m.rows() != n.rows())
        throw DimensionMismatch("gram: row counts differ (" + std::to_string(m.rows()) + " vs " +
                                std::to_string(n.rows()) + ")");
    require_finite(m, "gram");
    require_finite(n, "gram");
    return m.adjoint() * n;
}

}  // namespace ssep
