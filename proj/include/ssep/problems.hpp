#pragma once

#include <string>
#include <utility>

#include "ssep/coherence.hpp"
#include "ssep/matrix.hpp"

namespace ssep {

enum class Flavor { Analysis, Synthesis, Hybrid };

inline const char* to_string(Flavor f) {
    switch (f) {
        case Flavor::Analysis: return "analysis";
        case Flavor::Synthesis: return "synthesis";
        case Flavor::Hybrid: return "hybrid";
    }
    return "?";
}

// Assembled two-component separation instance. The unknown stacked vector has
// d1 + d2 entries; for synthesis-type components these are dictionary
// coefficients and the corresponding dictionary is kept for mapping back to
// signal space.
struct SeparationProblem {
    Matrix a1, a2;      // effective measurement blocks (m x d1, m x d2)
    Matrix psi1, psi2;  // analysis operators (full column rank)
    Flavor flavor = Flavor::Analysis;
    Matrix stacked_a;    // [a1 a2]
    Matrix stacked_psi;  // block-diagonal of psi1, psi2
    int d1 = 0;
    int d2 = 0;
    Matrix dict1, dict2;  // synthesis dictionaries; empty when the component is analysis-type
};

namespace detail {

inline void check_full_column_rank(const Matrix& m, const char* what, double rank_tol = 1e-10) {
    if (m.cols() > m.rows())
        throw RankDeficient(std::string(what) + ": more columns than rows");
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > rank_tol * sv(0)) || sv(0) == 0.0)
        throw RankDeficient(std::string(what) + ": not full column rank");
}

inline Matrix block_diagonal(const Matrix& p1, const Matrix& p2) {
    Matrix out = Matrix::Zero(p1.rows() + p2.rows(), p1.cols() + p2.cols());
    out.topLeftCorner(p1.rows(), p1.cols()) = p1;
    out.bottomRightCorner(p2.rows(), p2.cols()) = p2;
    return out;
}

inline void finish_stacking(SeparationProblem& p) {
    p.d1 = static_cast<int>(p.a1.cols());
    p.d2 = static_cast<int>(p.a2.cols());
    p.stacked_a = Matrix(p.a1.rows(), p.a1.cols() + p.a2.cols());
    p.stacked_a << p.a1, p.a2;
    p.stacked_psi = block_diagonal(p.psi1, p.psi2);
}

}  // namespace detail

/// Analysis instance: both components measured through the same A, each with
/// its own analysis operator.
inline SeparationProblem from_analysis(const Matrix& a, const Matrix& psi1, const Matrix& psi2) {
    require_nonempty(a, "from_analysis");
    require_finite(a, "from_analysis");
    const auto d = a.cols();
    if (psi1.cols() != d || psi2.cols() != d)
        throw DimensionMismatch("from_analysis: analysis operators must have " +
                                std::to_string(d) + " columns");
    detail::check_full_column_rank(psi1, "from_analysis: psi1");
    detail::check_full_column_rank(psi2, "from_analysis: psi2");
    SeparationProblem p;
    p.a1 = a;
    p.a2 = a;
    p.psi1 = psi1;
    p.psi2 = psi2;
    p.flavor = Flavor::Analysis;
    detail::finish_stacking(p);
    return p;
}

/// Synthesis instance with redundant dictionaries D1, D2 (d x n, d < n, full
/// rank). The analysis operator of each coefficient block is the identity on
/// coefficient space, which realizes the plain l1 objective on coefficients
/// and keeps the effective dictionaries equal to A D_l.
inline SeparationProblem from_synthesis(const Matrix& a, const Matrix& dict1,
                                        const Matrix& dict2) {
    require_nonempty(a, "from_synthesis");
    require_finite(a, "from_synthesis");
    const auto d = a.cols();
    if (dict1.rows() != d || dict2.rows() != d)
        throw DimensionMismatch("from_synthesis: dictionaries must have " + std::to_string(d) +
                                " rows");
    if (dict1.cols() <= d || dict2.cols() <= d)
        throw DimensionMismatch("from_synthesis: dictionaries must be redundant (d < n)");
    // Full rank d for a wide dictionary == its transpose has full column rank.
    detail::check_full_column_rank(dict1.adjoint(), "from_synthesis: dict1");
    detail::check_full_column_rank(dict2.adjoint(), "from_synthesis: dict2");
    SeparationProblem p;
    p.a1 = a * dict1;
    p.a2 = a * dict2;
    p.psi1 = Matrix::Identity(dict1.cols(), dict1.cols());
    p.psi2 = Matrix::Identity(dict2.cols(), dict2.cols());
    p.flavor = Flavor::Synthesis;
    p.dict1 = dict1;
    p.dict2 = dict2;
    detail::finish_stacking(p);
    return p;
}

/// Hybrid instance: component 1 synthesis-sparse in D1, component 2
/// analysis-sparse under Psi2.
inline SeparationProblem from_hybrid(const Matrix& a, const Matrix& dict1, const Matrix& psi2) {
    require_nonempty(a, "from_hybrid");
    require_finite(a, "from_hybrid");
    const auto d = a.cols();
    if (dict1.rows() != d)
        throw DimensionMismatch("from_hybrid: dictionary must have " + std::to_string(d) +
                                " rows");
    if (psi2.cols() != d)
        throw DimensionMismatch("from_hybrid: analysis operator must have " + std::to_string(d) +
                                " columns");
    detail::check_full_column_rank(dict1.adjoint(), "from_hybrid: dict1");
    detail::check_full_column_rank(psi2, "from_hybrid: psi2");
    SeparationProblem p;
    p.a1 = a * dict1;
    p.a2 = a;
    p.psi1 = Matrix::Identity(dict1.cols(), dict1.cols());
    p.psi2 = psi2;
    p.flavor = Flavor::Hybrid;
    p.dict1 = dict1;
    detail::finish_stacking(p);
    return p;
}

struct SplitSolution {
    Vector x1, x2;            // stacked-unknown blocks (coefficients where applicable)
    Vector signal1, signal2;  // signal-domain components
};

/// Split a stacked solution into its component blocks, mapping coefficient
/// blocks through their dictionaries for synthesis/hybrid flavors.
inline SplitSolution split_solution(const SeparationProblem& p, const Vector& x_stacked) {
    if (x_stacked.size() != p.d1 + p.d2)
        throw DimensionMismatch("split_solution: expected length " + std::to_string(p.d1 + p.d2) +
                                ", got " + std::to_string(x_stacked.size()));
    SplitSolution s;
    s.x1 = x_stacked.head(p.d1);
    s.x2 = x_stacked.tail(p.d2);
    s.signal1 = p.dict1.size() > 0 ? Vector(p.dict1 * s.x1) : s.x1;
    s.signal2 = p.dict2.size() > 0 ? Vector(p.dict2 * s.x2) : s.x2;
    return s;
}

/// Coherence profile of the assembled instance.
inline CoherenceProfile profile(const SeparationProblem& p) {
    return profile(p.a1, p.psi1, p.a2, p.psi2);
}

/// Smallest singular value of the stacked block-diagonal analysis operator,
/// computed blockwise.
inline double sigma_min_stacked_psi(const SeparationProblem& p) {
    return std::min(smallest_singular_value(p.psi1), smallest_singular_value(p.psi2));
}

}  // namespace ssep
