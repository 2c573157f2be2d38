#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "ssep/linear_operator.hpp"
#include "ssep/problems.hpp"
#include "ssep/sparsity.hpp"

namespace ssep {

struct SolveOptions {
    int max_iterations = 50000;
    double objective_tol = 1e-9;     // relative stagnation of the objective at checkpoints
    double feasibility_tol = 1e-7;   // allowed overshoot of the residual constraint
    double step_scale = 0.99;        // fraction of 1/||K|| used for the step product
    double primal_dual_ratio = 1.0;  // tau/sigma balance
    double relaxation = 1.5;         // over-relaxation factor, valid in (0, 2)
    int power_iterations = 50;       // operator-norm estimation budget
    int check_interval = 25;         // iterations between convergence checks
    int stagnation_window = 50;      // iterations the best objective must stagnate
    std::uint64_t seed = 0;          // reserved for randomized starts; default is the zero start
};

struct SolveResult {
    Vector x_star;
    double objective = 0.0;      // ||Psi x*||_1
    double residual_norm = 0.0;  // ||y - A x*||_2
    int iterations_used = 0;
    bool converged = false;
    std::vector<double> best_objective_trace;  // running best feasible objective per checkpoint
};

struct LemmaDiagnostics {
    Vector h;
    double tube_slack = std::numeric_limits<double>::quiet_NaN();
    double cone_slack = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline double l1_norm(const Vector& v) { return v.cwiseAbs().sum(); }

// Complex soft threshold: shrink magnitudes by t, preserve phases.
inline Vector soft_threshold(const Vector& v, double t) {
    Vector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        out(i) = a <= t ? Complex(0.0, 0.0) : v(i) * ((a - t) / a);
    }
    return out;
}

// Projection onto the closed ball of radius eps around center.
inline Vector ball_project(const Vector& v, const Vector& center, double eps) {
    const Vector diff = v - center;
    const double nrm = diff.norm();
    if (nrm <= eps) return v;
    if (nrm == 0.0) return center;
    return center + diff * (eps / nrm);
}

// Prox of the conjugate of the eps-ball indicator around y (support function):
// shrink the norm of (w - sigma y) by sigma * eps.
inline Vector ball_dual_prox(const Vector& w, const Vector& y, double sigma, double eps) {
    Vector p = w - sigma * y;
    const double nrm = p.norm();
    if (nrm <= sigma * eps || nrm == 0.0) return Vector::Zero(w.size());
    return p * (1.0 - sigma * eps / nrm);
}

// Prox of the conjugate of the l1 norm: clip magnitudes to 1.
inline void linf_clip(Vector& w) {
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double a = std::abs(w(i));
        if (a > 1.0) w(i) /= a;
    }
}

// Largest eigenvalue of x -> A^H A x + Psi^H Psi x by power iteration, i.e.
// the squared operator norm of the stacked map [A; Psi].
inline double stacked_norm_squared(const LinearOperator& a, const LinearOperator& psi,
                                   int iterations) {
    Vector v(a.cols);
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = Complex(std::cos(0.7 * static_cast<double>(i) + 0.3),
                       std::sin(1.3 * static_cast<double>(i) + 0.1));
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Vector w = a.apply_adjoint(a.apply(v)) + psi.apply_adjoint(psi.apply(v));
        lambda = w.norm();
        if (lambda == 0.0) return 0.0;
        v = w / lambda;
    }
    return lambda;
}

}  // namespace detail

/// Solve  minimize ||Psi x||_1  subject to  ||y - A x||_2 <= eps  by
/// primal-dual splitting with dual variables for both the l1 term and the
/// ball constraint. Deterministic for fixed inputs and options; returns the
/// best feasible iterate observed.
inline SolveResult solve_p_star(const LinearOperator& a, const LinearOperator& psi,
                                const Vector& y, double eps, const SolveOptions& opts = {}) {
    if (a.cols != psi.cols) throw DimensionMismatch("solve_p_star: A and Psi column counts differ");
    if (y.size() != a.rows) throw DimensionMismatch("solve_p_star: y length vs rows of A");
    if (eps < 0.0) throw Error("solve_p_star: eps must be nonnegative");
    if (opts.max_iterations < 1 || opts.objective_tol <= 0.0 || opts.feasibility_tol <= 0.0)
        throw Error("solve_p_star: invalid options");
    if (opts.relaxation <= 0.0 || opts.relaxation >= 2.0)
        throw Error("solve_p_star: relaxation must lie in (0, 2)");

    const double norm_sq = detail::stacked_norm_squared(a, psi, opts.power_iterations);
    const double opnorm = std::sqrt(norm_sq) * 1.02 + 1e-30;
    const double tau = opts.step_scale * opts.primal_dual_ratio / opnorm;
    const double sigma = opts.step_scale / (opts.primal_dual_ratio * opnorm);
    const double rho = opts.relaxation;

    Vector x = Vector::Zero(a.cols);
    Vector z_ball = Vector::Zero(a.rows);
    Vector z_l1 = Vector::Zero(psi.rows);

    const double inf = std::numeric_limits<double>::infinity();
    double best_obj = inf;
    double best_res = inf;
    Vector x_best;
    struct Checkpoint {
        int iter;
        double obj;
        double best;
    };
    std::vector<Checkpoint> window;  // recent checkpoints spanning the stagnation window
    std::vector<double> trace;
    bool converged = false;
    int iter = 0;

    while (iter < opts.max_iterations) {
        ++iter;
        // Relaxed primal-dual step (Condat's ordering, no smooth term).
        const Vector x_half = x - tau * (a.apply_adjoint(z_ball) + psi.apply_adjoint(z_l1));
        const Vector x_ext = 2.0 * x_half - x;
        const Vector z_ball_half =
            detail::ball_dual_prox(z_ball + sigma * a.apply(x_ext), y, sigma, eps);
        Vector z_l1_half = z_l1 + sigma * psi.apply(x_ext);
        detail::linf_clip(z_l1_half);
        x += rho * (x_half - x);
        z_ball += rho * (z_ball_half - z_ball);
        z_l1 += rho * (z_l1_half - z_l1);

        if (iter % opts.check_interval == 0 || iter == opts.max_iterations) {
            const double res = (y - a.apply(x)).norm();
            const double obj = detail::l1_norm(psi.apply(x));
            const bool feasible = res <= eps + opts.feasibility_tol;
            if (feasible && obj < best_obj) {
                best_obj = obj;
                best_res = res;
                x_best = x;
            }
            trace.push_back(best_obj);
            window.push_back({iter, obj, best_obj});
            while (window.size() > 1 && iter - window[1].iter >= opts.stagnation_window)
                window.erase(window.begin());
            // Converged once the best feasible objective stopped improving
            // over the window and the current iterate's objective agrees with
            // that snapshot, so the snapshot is the limit and not a stale
            // early capture.
            if (x_best.size() > 0 && iter - window.front().iter >= opts.stagnation_window &&
                std::isfinite(window.front().best)) {
                const double scale = std::max(1.0, std::abs(best_obj));
                const bool best_stagnant =
                    window.front().best - best_obj <= opts.objective_tol * scale;
                const bool consistent =
                    std::abs(obj - best_obj) <= 10.0 * opts.objective_tol * scale;
                if (best_stagnant && consistent) converged = true;
            }
            if (converged) break;
        }
    }

    SolveResult r;
    r.iterations_used = iter;
    r.converged = converged;
    r.best_objective_trace = std::move(trace);
    if (x_best.size() > 0) {
        r.x_star = std::move(x_best);
        r.objective = best_obj;
        r.residual_norm = best_res;
    } else {
        r.x_star = x;
        r.residual_norm = (y - a.apply(r.x_star)).norm();
        r.objective = detail::l1_norm(psi.apply(r.x_star));
        r.converged = false;
    }
    return r;
}

/// Dense-matrix entry point. For eps = 0 the affine feasibility of y is
/// checked up front and Infeasible is thrown when y is outside range(A).
inline SolveResult solve_p_star(const Matrix& a, const Matrix& psi, const Vector& y, double eps,
                                const SolveOptions& opts = {}) {
    require_nonempty(a, "solve_p_star");
    require_nonempty(psi, "solve_p_star");
    require_finite(a, "solve_p_star");
    require_finite(psi, "solve_p_star");
    if (eps == 0.0) {
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
        const Vector xls = cod.solve(y);
        const double dist = (a * xls - y).norm();
        if (dist > opts.feasibility_tol * std::max(1.0, y.norm()))
            throw Infeasible("solve_p_star: eps = 0 and y is outside range(A), distance " +
                             std::to_string(dist));
    }
    return solve_p_star(dense_operator(a), dense_operator(psi), y, eps, opts);
}

struct SeparationSolution {
    SolveResult result;
    SplitSolution split;
};

/// Solve the separation program on the stacked matrices and split the result.
inline SeparationSolution solve_separation(const SeparationProblem& p, const Vector& y,
                                           double eps, const SolveOptions& opts = {}) {
    SeparationSolution s;
    s.result = solve_p_star(p.stacked_a, p.stacked_psi, y, eps, opts);
    s.split = split_solution(p, s.result.x_star);
    return s;
}

struct OracleOptions {
    int max_iterations = 200000;
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    double feasibility_tol = 1e-7;
    int rho_update_interval = 64;
};

/// Independent cross-check solver for the same program, structurally distinct
/// from the primal-dual path: ADMM on the splitting u = Psi x, v = A x with a
/// prefactored normal-equations solve, the l1 prox on u, and the exact ball
/// projection on v. Intended for desk-scale instances (couple hundred
/// columns); the factorization is dense.
inline SolveResult oracle_solve(const Matrix& a, const Matrix& psi, const Vector& y, double eps,
                                const OracleOptions& oopts = {}) {
    if (a.cols() != psi.cols()) throw DimensionMismatch("oracle_solve: column counts differ");
    if (y.size() != a.rows()) throw DimensionMismatch("oracle_solve: y length vs rows of A");
    if (eps < 0.0) throw Error("oracle_solve: eps must be nonnegative");
    if (eps == 0.0) {
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
        const Vector xls = cod.solve(y);
        if ((a * xls - y).norm() > oopts.feasibility_tol * std::max(1.0, y.norm()))
            throw Infeasible("oracle_solve: eps = 0 and y is outside range(A)");
    }

    const Eigen::Index p = a.cols(), m = a.rows(), n = psi.rows();
    const Matrix normal = a.adjoint() * a + psi.adjoint() * psi;
    Eigen::LDLT<Matrix> ldlt(normal);
    if (ldlt.info() != Eigen::Success)
        throw RankDeficient("oracle_solve: stacked [A; Psi] is rank deficient");

    Vector x = Vector::Zero(p);
    Vector u = Vector::Zero(n), v = Vector::Zero(m);
    Vector wu = Vector::Zero(n), wv = Vector::Zero(m);
    double rho = 1.0;
    bool converged = false;
    int iter = 0;
    while (iter < oopts.max_iterations) {
        ++iter;
        x = ldlt.solve(psi.adjoint() * (u - wu) + a.adjoint() * (v - wv));
        const Vector px = psi * x;
        const Vector ax = a * x;
        const Vector u_prev = u;
        const Vector v_prev = v;
        u = detail::soft_threshold(px + wu, 1.0 / rho);
        v = detail::ball_project(ax + wv, y, eps);
        wu += px - u;
        wv += ax - v;

        const double r_primal = std::sqrt((px - u).squaredNorm() + (ax - v).squaredNorm());
        const double s_dual =
            rho * (psi.adjoint() * (u - u_prev) + a.adjoint() * (v - v_prev)).norm();
        const double scale_primal = std::max({std::sqrt(px.squaredNorm() + ax.squaredNorm()),
                                              std::sqrt(u.squaredNorm() + v.squaredNorm()), 1.0});
        const double scale_dual =
            std::max(rho * (psi.adjoint() * wu + a.adjoint() * wv).norm(), 1.0);
        const double eps_primal =
            std::sqrt(static_cast<double>(n + m)) * oopts.abs_tol + oopts.rel_tol * scale_primal;
        const double eps_dual =
            std::sqrt(static_cast<double>(p)) * oopts.abs_tol + oopts.rel_tol * scale_dual;
        if (r_primal <= eps_primal && s_dual <= eps_dual) {
            converged = true;
            break;
        }
        // Residual balancing; the x-update is independent of rho, so this is free.
        if (iter % oopts.rho_update_interval == 0) {
            if (r_primal > 10.0 * s_dual) {
                rho *= 2.0;
                wu *= 0.5;
                wv *= 0.5;
            } else if (s_dual > 10.0 * r_primal) {
                rho *= 0.5;
                wu *= 2.0;
                wv *= 2.0;
            }
        }
    }

    SolveResult r;
    r.x_star = x;
    r.objective = detail::l1_norm(psi * x);
    r.residual_norm = (y - a * x).norm();
    r.iterations_used = iter;
    r.converged = converged && r.residual_norm <= eps + oopts.feasibility_tol;
    return r;
}

/// Post-solve diagnostics against a known reference signal: the tube slack
/// (2 eps + 2 feasibility_tol) - ||A h||_2 and the cone slack
/// (||Psi_S h||_1 + 2 ||Psi_{S^c} x_true||_1) - ||Psi_{S^c} h||_1 with
/// S = supp_k(Psi x_true). Violations show up as negative slack.
inline LemmaDiagnostics check_lemmas(const SolveResult& result, const Vector& x_true,
                                     const Matrix& psi, const Matrix& a, int k, double epsilon,
                                     double feasibility_tol = 1e-7) {
    if (x_true.size() != result.x_star.size())
        throw DimensionMismatch("check_lemmas: reference length differs from solution");
    LemmaDiagnostics d;
    d.h = result.x_star - x_true;
    d.tube_slack = 2.0 * epsilon + 2.0 * feasibility_tol - (a * d.h).norm();
    const Vector psi_x = psi * x_true;
    const Vector psi_h = psi * d.h;
    const IndexSet s = supp_k(psi_x, k);
    const IndexSet sc = complement(s);
    const double on_support = detail::l1_norm(project_support(psi_h, s));
    const double off_support = detail::l1_norm(project_support(psi_h, sc));
    const double x_tail = detail::l1_norm(project_support(psi_x, sc));
    d.cone_slack = on_support + 2.0 * x_tail - off_support;
    return d;
}

}  // namespace ssep
