#pragma once

#include <cmath>
#include <limits>

#include "ssep/coherence.hpp"

namespace ssep {

struct GersgorinBounds {
    double theta_min = 0.0;
    double theta_max = 0.0;
};

struct ErrorConstants {
    double c0 = 0.0;
    double c1 = 0.0;
};

// Which closed form produced the certificate constants. Split is the
// two-dictionary route through g_hat; SingleStacked falls back to the
// single-dictionary constants evaluated on the stacked effective dictionary
// when g_hat(k) is nonpositive; None means no finite constants apply.
enum class ConstantsRoute { None, Split, SingleStacked };

struct RecoveryCertificate {
    double threshold_split = 0.0;
    double threshold_single = 0.0;
    int k1 = 0;
    int k2 = 0;
    bool satisfied = false;
    double c0 = std::numeric_limits<double>::quiet_NaN();
    double c1 = std::numeric_limits<double>::quiet_NaN();
    double predicted_bound = std::numeric_limits<double>::quiet_NaN();
    double sigma_min_psi = 0.0;
    ConstantsRoute route = ConstantsRoute::None;
};

/// Sparsity threshold for the single-dictionary recovery condition,
/// (1/2)(1 + 1/mu_hat). Zero coherence returns +infinity: an orthonormal
/// effective dictionary imposes no sparsity limit through this bound.
inline double threshold_single(double mu_hat) {
    if (mu_hat < 0.0) throw NegativeCoherence("threshold_single: negative coherence");
    if (mu_hat == 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 * (1.0 + 1.0 / mu_hat);
}

/// Sparsity threshold for the two-dictionary split condition. Relabels the
/// pair internally so that mu_hat_1 <= mu_hat_2.
inline double threshold_split(const CoherenceProfile& p) {
    if (p.mu_hat_1 < 0.0 || p.mu_hat_2 < 0.0 || p.mu_hat_m < 0.0)
        throw NegativeCoherence("threshold_split: negative coherence");
    const double mu2 = std::max(p.mu_hat_1, p.mu_hat_2);
    const double mu_max = std::max({p.mu_hat_1, p.mu_hat_2, p.mu_hat_m});
    if (mu_max == 0.0) return std::numeric_limits<double>::infinity();
    const double term1 =
        2.0 * (1.0 + mu2) / (mu2 + 2.0 * mu_max + std::sqrt(mu2 * mu2 + p.mu_hat_m * p.mu_hat_m));
    const double term2 = (1.0 + mu_max) / (2.0 * mu_max);
    return std::max(term1, term2);
}

/// Eigenvalue sandwich for k-column Gram submatrices by diagonal dominance:
/// theta_min = omega_min^2 - mu (k-1), theta_max = omega_max^2 + mu (k-1).
inline GersgorinBounds gersgorin_bounds(double omega_min, double omega_max, double mu, int k) {
    if (k < 1) throw Error("gersgorin_bounds: k must be >= 1");
    const double spread = mu * static_cast<double>(k - 1);
    return {omega_min * omega_min - spread, omega_max * omega_max + spread};
}

/// Cross-term growth f(k1, k2) = max{mu_1 (k1-1), mu_2 (k2-1)} + mu_m sqrt(k1 k2).
inline double f_cross(int k1, int k2, double mu_1, double mu_2, double mu_m) {
    const double a = mu_1 * static_cast<double>(k1 - 1);
    const double b = mu_2 * static_cast<double>(k2 - 1);
    return std::max(a, b) + mu_m * std::sqrt(static_cast<double>(k1) * static_cast<double>(k2));
}

struct GHat {
    double value = 0.0;
    double k2_star = 0.0;  // continuous minimizer of the split, for diagnostics
};

/// Worst-case split lower bound
///   g_hat(k) = omega_min^2 - (1/2)(mu_2 (k-2) + k sqrt(mu_2^2 + mu_m^2)) - mu k,
/// the closed-form minimum of g over k1 + k2 = k once the pair is relabeled so
/// that mu_1 <= mu_2 (which places the continuous minimizer in the branch the
/// larger coherence governs).
inline GHat g_hat(int k, double omega_min, double mu_1, double mu_2, double mu_m, double mu) {
    if (k < 1) throw Error("g_hat: k must be >= 1");
    const double m2 = std::max(mu_1, mu_2);
    const double hyp = std::sqrt(m2 * m2 + mu_m * mu_m);
    GHat g;
    g.value = omega_min * omega_min -
              0.5 * (m2 * static_cast<double>(k - 2) + static_cast<double>(k) * hyp) -
              mu * static_cast<double>(k);
    const double ratio = hyp > 0.0 ? m2 / hyp : 1.0;
    g.k2_star = 0.5 * static_cast<double>(k) * (1.0 + ratio);
    return g;
}

/// Error constants of the single-dictionary bound. Requires the strict
/// recovery condition 1 - mu_hat (2k - 1) > 0.
inline ErrorConstants error_constants_single(double sigma_min_psi, double omega_min,
                                             double omega_max, double mu_hat, int k) {
    if (sigma_min_psi <= 0.0 || omega_min <= 0.0 || omega_max <= 0.0)
        throw Error("error_constants_single: scales must be positive");
    if (mu_hat < 0.0) throw NegativeCoherence("error_constants_single: negative coherence");
    if (k < 1) throw Error("error_constants_single: k must be >= 1");
    const double denom = 1.0 - mu_hat * static_cast<double>(2 * k - 1);
    if (denom <= 0.0)
        throw ThresholdViolated("error_constants_single: 1 - mu_hat (2k - 1) <= 0");
    const double ratio2 = (omega_max * omega_max) / (omega_min * omega_min);
    ErrorConstants c;
    c.c0 = 2.0 * std::sqrt(3.0) / (sigma_min_psi * omega_min) *
           std::sqrt(ratio2 * (1.0 + mu_hat * static_cast<double>(k - 1))) / denom;
    c.c1 = (2.0 * mu_hat * std::sqrt(3.0 * static_cast<double>(k)) / denom +
            1.0 / std::sqrt(static_cast<double>(k))) /
           sigma_min_psi;
    return c;
}

/// Error constants of the split bound; c0 carries the sqrt(theta_max) factor
/// from the tube term.
inline ErrorConstants error_constants_split(double sigma_min_psi, double theta_max, double mu,
                                            int k, double g_hat_k) {
    if (sigma_min_psi <= 0.0 || theta_max <= 0.0)
        throw Error("error_constants_split: scales must be positive");
    if (k < 1) throw Error("error_constants_split: k must be >= 1");
    if (g_hat_k <= 0.0) throw GHatNonpositive("error_constants_split: g_hat(k) <= 0");
    ErrorConstants c;
    c.c0 = 2.0 * std::sqrt(3.0) * std::sqrt(theta_max) / (sigma_min_psi * g_hat_k);
    c.c1 = (2.0 * mu * std::sqrt(3.0 * static_cast<double>(k)) / g_hat_k +
            1.0 / std::sqrt(static_cast<double>(k))) /
           sigma_min_psi;
    return c;
}

/// Pure-arithmetic recovery certificate for sparsity levels (k1, k2): checks
/// the split threshold, derives error constants when possible, and predicts
/// the recovery error bound c0 eps + c1 (sigma_k1 + sigma_k2). Never solves.
inline RecoveryCertificate certify(const CoherenceProfile& p, double sigma_min_psi, int k1,
                                   int k2, double epsilon, double sigma_k1, double sigma_k2) {
    if (k1 < 0 || k2 < 0) throw Error("certify: sparsity levels must be nonnegative");
    if (epsilon < 0.0 || sigma_k1 < 0.0 || sigma_k2 < 0.0)
        throw Error("certify: epsilon and sigma terms must be nonnegative");
    if (sigma_min_psi <= 0.0) throw Error("certify: sigma_min_psi must be positive");

    RecoveryCertificate cert;
    cert.k1 = k1;
    cert.k2 = k2;
    cert.sigma_min_psi = sigma_min_psi;
    cert.threshold_split = threshold_split(p);
    const double mu_hat_stacked = p.mu / (p.omega_min * p.omega_min);
    cert.threshold_single = threshold_single(mu_hat_stacked);
    const int k = k1 + k2;
    cert.satisfied = static_cast<double>(k) < cert.threshold_split;
    if (!cert.satisfied || k == 0) return cert;

    const GHat g = g_hat(k, p.omega_min, p.mu_1, p.mu_2, p.mu_m, p.mu);
    if (g.value > 0.0) {
        const double theta_max =
            p.omega_max * p.omega_max + f_cross(k1, k2, p.mu_1, p.mu_2, p.mu_m);
        const ErrorConstants c = error_constants_split(sigma_min_psi, theta_max, p.mu, k, g.value);
        cert.c0 = c.c0;
        cert.c1 = c.c1;
        cert.route = ConstantsRoute::Split;
    } else if (1.0 - mu_hat_stacked * static_cast<double>(2 * k - 1) > 0.0) {
        const ErrorConstants c =
            error_constants_single(sigma_min_psi, p.omega_min, p.omega_max, mu_hat_stacked, k);
        cert.c0 = c.c0;
        cert.c1 = c.c1;
        cert.route = ConstantsRoute::SingleStacked;
    } else {
        // Threshold satisfied through the hat-normalized max term, yet neither
        // constant chain applies with the raw Gram quantities; report the
        // certificate without a finite bound.
        cert.predicted_bound = std::numeric_limits<double>::infinity();
        return cert;
    }
    cert.predicted_bound = cert.c0 * epsilon + cert.c1 * (sigma_k1 + sigma_k2);
    return cert;
}

}  // namespace ssep
