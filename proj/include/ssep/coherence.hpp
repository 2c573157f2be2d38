#pragma once

#include <algorithm>

#include "ssep/matrix.hpp"

namespace ssep {

// Coherence figures for a pair of effective dictionaries B1 = A1 Psi1^+ and
// B2 = A2 Psi2^+. Hat values are normalized by the squared minimum column
// norm; bare values are raw Gram magnitudes. mu is the raw off-diagonal
// maximum of the stacked dictionary [B1 B2], and omega_min/omega_max are the
// joint column-norm extremes of the pair.
struct CoherenceProfile {
    double mu_hat_1 = 0.0;
    double mu_hat_2 = 0.0;
    double mu_hat_m = 0.0;
    double mu_hat_max = 0.0;
    double mu_1 = 0.0;
    double mu_2 = 0.0;
    double mu_m = 0.0;
    double mu = 0.0;
    double omega_min = 0.0;
    double omega_max = 0.0;
};

/// Largest off-diagonal Gram magnitude, unnormalized.
inline double raw_max_offdiag(const Matrix& m) {
    if (m.cols() < 2) throw TooFewColumns("raw_max_offdiag: need at least 2 columns");
    column_norm_extremes(m);  // enforces nonzero columns
    const Matrix g = gram(m, m);
    double best = 0.0;
    for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            if (i != j) best = std::max(best, std::abs(g(i, j)));
    return best;
}

/// Dictionary coherence: max off-diagonal Gram magnitude over omega_min^2.
inline double coherence(const Matrix& m) {
    if (m.cols() < 2) throw TooFewColumns("coherence: need at least 2 columns");
    const ColumnNormSummary w = column_norm_extremes(m);
    return raw_max_offdiag(m) / (w.omega_min * w.omega_min);
}

/// Largest cross-Gram magnitude |[M^H N]_{i,j}| over all entries, unnormalized.
inline double max_cross_magnitude(const Matrix& m, const Matrix& n) {
    const Matrix g = gram(m, n);
    return g.cwiseAbs().maxCoeff();
}

/// Mutual coherence of two dictionaries: the cross-Gram maximum (diagonal
/// included) over the joint squared minimum column norm.
inline double mutual_coherence(const Matrix& m, const Matrix& n) {
    const ColumnNormSummary w = column_norm_extremes_pair(m, n);
    return max_cross_magnitude(m, n) / (w.omega_min * w.omega_min);
}

/// Profile computed directly from the effective dictionaries.
/// The stacked off-diagonal maximum equals max{mu_1, mu_2, mu_m} because all
/// cross-block entries of [B1 B2]^H [B1 B2] are off-diagonal.
inline CoherenceProfile profile_from_effective(const Matrix& b1, const Matrix& b2) {
    CoherenceProfile p;
    p.mu_hat_1 = coherence(b1);
    p.mu_hat_2 = coherence(b2);
    p.mu_hat_m = mutual_coherence(b1, b2);
    p.mu_hat_max = std::max({p.mu_hat_1, p.mu_hat_2, p.mu_hat_m});
    p.mu_1 = raw_max_offdiag(b1);
    p.mu_2 = raw_max_offdiag(b2);
    p.mu_m = max_cross_magnitude(b1, b2);
    p.mu = std::max({p.mu_1, p.mu_2, p.mu_m});
    const ColumnNormSummary w = column_norm_extremes_pair(b1, b2);
    p.omega_min = w.omega_min;
    p.omega_max = w.omega_max;
    return p;
}

/// Full coherence profile of the separation instance (A1, Psi1, A2, Psi2).
inline CoherenceProfile profile(const Matrix& a1, const Matrix& psi1, const Matrix& a2,
                                const Matrix& psi2) {
    const Matrix b1 = a1 * pseudoinverse(psi1);
    const Matrix b2 = a2 * pseudoinverse(psi2);
    if (b1.rows() != b2.rows())
        throw DimensionMismatch("profile: effective dictionaries have differing row counts");
    return profile_from_effective(b1, b2);
}

}  // namespace ssep
