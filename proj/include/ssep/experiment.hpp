#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ssep/guarantees.hpp"
#include "ssep/operators.hpp"
#include "ssep/rng.hpp"
#include "ssep/solver.hpp"

namespace ssep {

enum class DictionaryFamily { Gaussian, PartialDct, IdentityPlusDct };

inline const char* to_string(DictionaryFamily f) {
    switch (f) {
        case DictionaryFamily::Gaussian: return "gaussian";
        case DictionaryFamily::PartialDct: return "partial_dct";
        case DictionaryFamily::IdentityPlusDct: return "identity_plus_dct";
    }
    return "?";
}

struct ExperimentSpec {
    int m = 16;  // measurement rows
    int d = 16;  // signal dimension per component
    int n = 16;  // analysis rows / dictionary atoms per component
    Flavor flavor = Flavor::Analysis;
    int k1 = 1;
    int k2 = 1;
    std::optional<double> snr_db;  // noiseless when absent
    int trials = 1;
    std::uint64_t seed = 0;
    DictionaryFamily family = DictionaryFamily::IdentityPlusDct;
    double approx_tail = 0.0;    // l1 mass added outside the sparse support, relative
    double eps_inflation = 1.0;  // >= 1; scales eps beyond the realized noise norm
    SolveOptions solve;
};

struct TrialInstance {
    SeparationProblem problem;
    Vector x_true;  // stacked unknowns (coefficients where applicable)
    Vector y;
    double epsilon = 0.0;
    double sigma_k1 = 0.0;
    double sigma_k2 = 0.0;
    double realized_snr_db = std::numeric_limits<double>::infinity();
};

struct TrialReport {
    int trial = 0;
    Flavor flavor = Flavor::Analysis;
    int k1 = 0;
    int k2 = 0;
    CoherenceProfile profile;
    RecoveryCertificate certificate;
    double epsilon = 0.0;
    double sigma_k1 = 0.0;
    double sigma_k2 = 0.0;
    double empirical_error = 0.0;
    bool bound_satisfied = true;  // Theorem-1 check; vacuous unless certified and converged
    bool solver_converged = false;
    double tube_slack = 0.0;
    double cone_slack = 0.0;
    double runtime_ms = 0.0;
    std::string error;  // nonempty when the trial aborted
};

struct SweepAggregate {
    int trials = 0;
    int failed = 0;
    int certified = 0;
    int converged = 0;
    int certified_converged = 0;
    int bound_violations = 0;
    int exact_recoveries = 0;  // empirical error <= 1e-4
    double mean_empirical_error = 0.0;
    double mean_bound_ratio = 0.0;  // empirical / predicted over certified finite-bound trials
};

struct SweepResult {
    ExperimentSpec spec;
    std::vector<TrialReport> reports;
    SweepAggregate aggregate;
};

struct RunOptions {
    int threads = 0;             // 0: use SSEP_THREADS, then hardware concurrency
    bool record_runtime = true;  // false writes runtime_ms = 0 for byte-stable reports
};

namespace detail {

// Atoms with a flat DCT spectrum and random signs: low coherence against both
// the canonical and the DCT bases.
inline Matrix flat_spectrum_atoms(Rng& rng, const RealMatrix& dct_t, int count) {
    const int d = static_cast<int>(dct_t.rows());
    Matrix out(d, count);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < count; ++j) {
        RealVector signs(d);
        for (int i = 0; i < d; ++i) signs(i) = rng.uniform() < 0.5 ? -s : s;
        out.col(j) = (dct_t.transpose() * signs).cast<Complex>();
    }
    return out;
}

inline Matrix partial_dct_measurement(Rng& rng, int m, int d) {
    const RealMatrix t = dct_matrix(d);
    const auto rows = random_support(rng, d, m);
    Matrix a(m, d);
    const double scale = std::sqrt(static_cast<double>(d) / m);
    for (int i = 0; i < m; ++i) a.row(i) = (scale * t.row(rows[i])).cast<Complex>();
    return a;
}

inline Vector sparse_coefficients(Rng& rng, int n, int k, bool complex_values,
                                  double approx_tail) {
    Vector t = Vector::Zero(n);
    for (int i : random_support(rng, n, k))
        t(i) = complex_values ? Complex(2.0 * rng.complex_normal())
                              : Complex(2.0 * rng.normal(), 0.0);
    if (approx_tail > 0.0) {
        Vector tail(n);
        for (int i = 0; i < n; ++i)
            tail(i) = complex_values ? rng.complex_normal() : Complex(rng.normal(), 0.0);
        const double target = approx_tail * std::max(t.cwiseAbs().sum(), 1.0);
        tail *= target / tail.cwiseAbs().sum();
        t += tail;
    }
    return t;
}

}  // namespace detail

/// Deterministically synthesize the trial's problem, ground truth, and noisy
/// measurement. The draw depends only on (spec.seed, trial_index).
inline TrialInstance generate_instance(const ExperimentSpec& spec, int trial_index) {
    if (spec.d < 2 || spec.m < 1 || spec.n < 1) throw Error("generate_instance: bad dimensions");
    if (spec.k1 < 0 || spec.k2 < 0) throw Error("generate_instance: negative sparsity");
    if (spec.eps_inflation < 1.0)
        throw Error("generate_instance: eps_inflation must be >= 1 so that ||e|| <= eps");
    Rng rng(spec.seed, static_cast<std::uint64_t>(trial_index));
    const bool complex_instance = spec.family == DictionaryFamily::Gaussian;
    const RealMatrix dct_t = dct_matrix(spec.d);

    TrialInstance inst;
    switch (spec.flavor) {
        case Flavor::Analysis: {
            Matrix a, psi1, psi2;
            if (spec.family == DictionaryFamily::IdentityPlusDct) {
                if (spec.m != spec.d || spec.n != spec.d)
                    throw Error("generate_instance: identity_plus_dct analysis needs m = n = d");
                a = Matrix::Identity(spec.d, spec.d);
                psi1 = Matrix::Identity(spec.d, spec.d);
                psi2 = dct_t.cast<Complex>();
            } else if (spec.family == DictionaryFamily::Gaussian) {
                if (spec.n < spec.d)
                    throw Error("generate_instance: analysis operators need n >= d");
                a = gaussian_matrix(rng, spec.m, spec.d, true) /
                    std::sqrt(static_cast<double>(spec.m));
                psi1 = random_orthonormal(rng, spec.n, spec.d, true);
                psi2 = random_orthonormal(rng, spec.n, spec.d, true);
            } else {
                if (spec.n < spec.d)
                    throw Error("generate_instance: analysis operators need n >= d");
                a = detail::partial_dct_measurement(rng, spec.m, spec.d);
                psi1 = Matrix::Identity(spec.d, spec.d);
                psi2 = random_orthonormal(rng, spec.n, spec.d, false);
            }
            inst.problem = from_analysis(a, psi1, psi2);
            break;
        }
        case Flavor::Synthesis: {
            if (spec.n <= spec.d)
                throw Error("generate_instance: synthesis dictionaries need n > d");
            Matrix a, d1, d2;
            if (spec.family == DictionaryFamily::Gaussian) {
                a = spec.m == spec.d ? Matrix(Matrix::Identity(spec.d, spec.d))
                                     : Matrix(gaussian_matrix(rng, spec.m, spec.d, true) /
                                              std::sqrt(static_cast<double>(spec.m)));
                d1 = gaussian_matrix(rng, spec.d, spec.n, true);
                d2 = gaussian_matrix(rng, spec.d, spec.n, true);
                for (int j = 0; j < spec.n; ++j) {
                    d1.col(j).normalize();
                    d2.col(j).normalize();
                }
            } else {
                a = spec.family == DictionaryFamily::PartialDct
                        ? detail::partial_dct_measurement(rng, spec.m, spec.d)
                        : Matrix(Matrix::Identity(spec.d, spec.d));
                const int extras = spec.n - spec.d;
                d1 = Matrix(spec.d, spec.n);
                d1 << Matrix::Identity(spec.d, spec.d),
                    detail::flat_spectrum_atoms(rng, dct_t, extras);
                d2 = Matrix(spec.d, spec.n);
                d2 << dct_t.transpose().cast<Complex>(),
                    detail::flat_spectrum_atoms(rng, dct_t, extras);
            }
            inst.problem = from_synthesis(a, d1, d2);
            break;
        }
        case Flavor::Hybrid: {
            if (spec.n <= spec.d)
                throw Error("generate_instance: hybrid dictionary needs n > d");
            Matrix a, d1, psi2;
            if (spec.family == DictionaryFamily::Gaussian) {
                a = gaussian_matrix(rng, spec.m, spec.d, true) /
                    std::sqrt(static_cast<double>(spec.m));
                d1 = gaussian_matrix(rng, spec.d, spec.n, true);
                for (int j = 0; j < spec.n; ++j) d1.col(j).normalize();
                psi2 = random_orthonormal(rng, spec.n, spec.d, true);
            } else {
                a = spec.family == DictionaryFamily::PartialDct
                        ? detail::partial_dct_measurement(rng, spec.m, spec.d)
                        : Matrix(Matrix::Identity(spec.d, spec.d));
                const int extras = spec.n - spec.d;
                d1 = Matrix(spec.d, spec.n);
                d1 << Matrix::Identity(spec.d, spec.d),
                    detail::flat_spectrum_atoms(rng, dct_t, extras);
                psi2 = dct_t.cast<Complex>();
            }
            inst.problem = from_hybrid(a, d1, psi2);
            break;
        }
    }

    const SeparationProblem& p = inst.problem;
    const int n1 = static_cast<int>(p.psi1.rows());
    const int n2 = static_cast<int>(p.psi2.rows());
    if (spec.k1 > n1 || spec.k2 > n2)
        throw UnsatisfiableSparsity("generate_instance: k exceeds the analysis dimension");

    // Synthesis-type blocks carry exactly sparse coefficients. Analysis-type
    // blocks are built from a sparse target through the pseudoinverse, which
    // keeps the target exactly when Psi is square and projects it onto
    // range(Psi) otherwise (approximately sparse).
    Vector x1, x2;
    {
        const Vector t1 =
            detail::sparse_coefficients(rng, n1, spec.k1, complex_instance, spec.approx_tail);
        if (p.flavor == Flavor::Synthesis || p.flavor == Flavor::Hybrid) {
            x1 = t1;
        } else if (p.psi1.rows() == p.psi1.cols()) {
            x1 = p.psi1.partialPivLu().solve(t1);
        } else {
            x1 = pseudoinverse(p.psi1) * t1;
        }
        const Vector t2 =
            detail::sparse_coefficients(rng, n2, spec.k2, complex_instance, spec.approx_tail);
        if (p.flavor == Flavor::Synthesis) {
            x2 = t2;
        } else if (p.psi2.rows() == p.psi2.cols()) {
            x2 = p.psi2.partialPivLu().solve(t2);
        } else {
            x2 = pseudoinverse(p.psi2) * t2;
        }
    }
    inst.x_true = Vector(p.d1 + p.d2);
    inst.x_true << x1, x2;
    inst.sigma_k1 = sigma_k(Vector(p.psi1 * x1), spec.k1);
    inst.sigma_k2 = sigma_k(Vector(p.psi2 * x2), spec.k2);

    const Vector y0 = p.stacked_a * inst.x_true;
    if (spec.snr_db) {
        // Unit-variance draws scaled so the expected noise energy matches the
        // requested SNR; the realized norm fluctuates with the finite length.
        const double target_power = y0.squaredNorm() * std::pow(10.0, -(*spec.snr_db) / 10.0);
        Vector noise(y0.size());
        for (Eigen::Index i = 0; i < noise.size(); ++i)
            noise(i) = complex_instance ? rng.complex_normal() : Complex(rng.normal(), 0.0);
        noise *= std::sqrt(target_power / static_cast<double>(noise.size()));
        inst.y = y0 + noise;
        const double realized = (inst.y - y0).norm();
        inst.epsilon = realized * spec.eps_inflation;
        inst.realized_snr_db = 10.0 * std::log10(y0.squaredNorm() / (realized * realized));
    } else {
        inst.y = y0;
        inst.epsilon = 0.0;
    }
    return inst;
}

/// One full trial: generate, certify, solve, run the lemma diagnostics.
inline TrialReport run_trial(const ExperimentSpec& spec, int trial_index,
                             bool record_runtime = true) {
    TrialReport r;
    r.trial = trial_index;
    r.flavor = spec.flavor;
    r.k1 = spec.k1;
    r.k2 = spec.k2;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const TrialInstance inst = generate_instance(spec, trial_index);
        const SeparationProblem& p = inst.problem;
        r.epsilon = inst.epsilon;
        r.sigma_k1 = inst.sigma_k1;
        r.sigma_k2 = inst.sigma_k2;
        r.profile = profile(p);
        r.certificate = certify(r.profile, sigma_min_stacked_psi(p), spec.k1, spec.k2,
                                inst.epsilon, inst.sigma_k1, inst.sigma_k2);
        const auto sol = solve_separation(p, inst.y, inst.epsilon, spec.solve);
        r.solver_converged = sol.result.converged;
        r.empirical_error = (sol.result.x_star - inst.x_true).norm();
        const auto diag =
            check_lemmas(sol.result, inst.x_true, p.stacked_psi, p.stacked_a, spec.k1 + spec.k2,
                         inst.epsilon, spec.solve.feasibility_tol);
        r.tube_slack = diag.tube_slack;
        r.cone_slack = diag.cone_slack;
        if (r.certificate.satisfied && r.solver_converged &&
            std::isfinite(r.certificate.predicted_bound))
            r.bound_satisfied = r.empirical_error <= r.certificate.predicted_bound + 1e-6;
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    if (record_runtime) {
        const auto t1 = std::chrono::steady_clock::now();
        r.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    return r;
}

inline int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SSEP_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return std::min(v, 256);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Run all trials of the spec, in parallel up to the thread cap, and reduce
/// the reports in trial order.
inline SweepResult run_sweep(const ExperimentSpec& spec, const RunOptions& run = {}) {
    if (spec.trials < 1) throw Error("run_sweep: trials must be >= 1");
    SweepResult out;
    out.spec = spec;
    out.reports.resize(spec.trials);
    const int threads = std::min(resolve_thread_count(run.threads), spec.trials);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= spec.trials) return;
            out.reports[i] = run_trial(spec, i, run.record_runtime);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    SweepAggregate& agg = out.aggregate;
    agg.trials = spec.trials;
    double err_sum = 0.0, ratio_sum = 0.0;
    int err_count = 0, ratio_count = 0;
    for (const TrialReport& r : out.reports) {
        if (!r.error.empty()) {
            ++agg.failed;
            continue;
        }
        agg.certified += r.certificate.satisfied ? 1 : 0;
        agg.converged += r.solver_converged ? 1 : 0;
        if (r.certificate.satisfied && r.solver_converged) {
            ++agg.certified_converged;
            if (!r.bound_satisfied) ++agg.bound_violations;
        }
        if (r.empirical_error <= 1e-4) ++agg.exact_recoveries;
        err_sum += r.empirical_error;
        ++err_count;
        if (r.certificate.satisfied && std::isfinite(r.certificate.predicted_bound) &&
            r.certificate.predicted_bound > 0.0) {
            ratio_sum += r.empirical_error / r.certificate.predicted_bound;
            ++ratio_count;
        }
    }
    agg.mean_empirical_error = err_count > 0 ? err_sum / err_count : 0.0;
    agg.mean_bound_ratio = ratio_count > 0 ? ratio_sum / ratio_count : 0.0;
    return out;
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_ms(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "trial,flavor,k1,k2,mu_hat_1,mu_hat_2,mu_hat_m,threshold,satisfied,C0,C1,eps,"
    "sigma_k1,sigma_k2,predicted_bound,empirical_error,ratio,converged,runtime_ms";

inline std::string to_csv(const SweepResult& sweep) {
    std::string csv = kCsvHeader;
    csv += '\n';
    for (const TrialReport& r : sweep.reports) {
        const double predicted = r.certificate.predicted_bound;
        const double ratio = (std::isfinite(predicted) && predicted > 0.0)
                                 ? r.empirical_error / predicted
                                 : std::numeric_limits<double>::quiet_NaN();
        csv += std::to_string(r.trial);
        csv += ',';
        csv += to_string(r.flavor);
        csv += ',';
        csv += std::to_string(r.k1);
        csv += ',';
        csv += std::to_string(r.k2);
        csv += ',';
        csv += detail::fmt_double(r.profile.mu_hat_1);
        csv += ',';
        csv += detail::fmt_double(r.profile.mu_hat_2);
        csv += ',';
        csv += detail::fmt_double(r.profile.mu_hat_m);
        csv += ',';
        csv += detail::fmt_double(r.certificate.threshold_split);
        csv += ',';
        csv += r.certificate.satisfied ? '1' : '0';
        csv += ',';
        csv += detail::fmt_double(r.certificate.c0);
        csv += ',';
        csv += detail::fmt_double(r.certificate.c1);
        csv += ',';
        csv += detail::fmt_double(r.epsilon);
        csv += ',';
        csv += detail::fmt_double(r.sigma_k1);
        csv += ',';
        csv += detail::fmt_double(r.sigma_k2);
        csv += ',';
        csv += detail::fmt_double(predicted);
        csv += ',';
        csv += detail::fmt_double(r.empirical_error);
        csv += ',';
        csv += detail::fmt_double(ratio);
        csv += ',';
        csv += r.solver_converged ? '1' : '0';
        csv += ',';
        csv += detail::fmt_ms(r.runtime_ms);
        csv += '\n';
    }
    return csv;
}

inline nlohmann::json spec_to_json(const ExperimentSpec& spec) {
    nlohmann::json j;
    j["m"] = spec.m;
    j["d"] = spec.d;
    j["n"] = spec.n;
    j["flavor"] = to_string(spec.flavor);
    j["family"] = to_string(spec.family);
    j["k1"] = spec.k1;
    j["k2"] = spec.k2;
    if (spec.snr_db)
        j["snr_db"] = *spec.snr_db;
    else
        j["snr_db"] = nullptr;
    j["trials"] = spec.trials;
    j["seed"] = spec.seed;
    j["approx_tail"] = spec.approx_tail;
    j["eps_inflation"] = spec.eps_inflation;
    j["max_iterations"] = spec.solve.max_iterations;
    return j;
}

inline Flavor flavor_from_string(const std::string& s) {
    if (s == "analysis") return Flavor::Analysis;
    if (s == "synthesis") return Flavor::Synthesis;
    if (s == "hybrid") return Flavor::Hybrid;
    throw IoError("unknown flavor: " + s);
}

inline DictionaryFamily family_from_string(const std::string& s) {
    if (s == "gaussian") return DictionaryFamily::Gaussian;
    if (s == "partial_dct") return DictionaryFamily::PartialDct;
    if (s == "identity_plus_dct") return DictionaryFamily::IdentityPlusDct;
    throw IoError("unknown dictionary family: " + s);
}

inline ExperimentSpec spec_from_json(const nlohmann::json& j) {
    ExperimentSpec spec;
    spec.m = j.value("m", spec.m);
    spec.d = j.value("d", spec.d);
    spec.n = j.value("n", spec.n);
    if (j.contains("flavor")) spec.flavor = flavor_from_string(j.at("flavor").get<std::string>());
    if (j.contains("family")) spec.family = family_from_string(j.at("family").get<std::string>());
    spec.k1 = j.value("k1", spec.k1);
    spec.k2 = j.value("k2", spec.k2);
    if (j.contains("snr_db") && !j.at("snr_db").is_null())
        spec.snr_db = j.at("snr_db").get<double>();
    spec.trials = j.value("trials", spec.trials);
    spec.seed = j.value("seed", spec.seed);
    spec.approx_tail = j.value("approx_tail", spec.approx_tail);
    spec.eps_inflation = j.value("eps_inflation", spec.eps_inflation);
    spec.solve.max_iterations = j.value("max_iterations", spec.solve.max_iterations);
    spec.solve.objective_tol = j.value("objective_tol", spec.solve.objective_tol);
    spec.solve.feasibility_tol = j.value("feasibility_tol", spec.solve.feasibility_tol);
    return spec;
}

inline nlohmann::json sweep_to_json(const SweepResult& sweep) {
    nlohmann::json j;
    j["spec"] = spec_to_json(sweep.spec);
    const SweepAggregate& a = sweep.aggregate;
    j["aggregate"] = {{"trials", a.trials},
                      {"failed", a.failed},
                      {"certified", a.certified},
                      {"converged", a.converged},
                      {"certified_converged", a.certified_converged},
                      {"bound_violations", a.bound_violations},
                      {"exact_recoveries", a.exact_recoveries},
                      {"mean_empirical_error", a.mean_empirical_error},
                      {"mean_bound_ratio", a.mean_bound_ratio}};
    auto trials = nlohmann::json::array();
    for (const TrialReport& r : sweep.reports) {
        nlohmann::json t;
        t["trial"] = r.trial;
        t["satisfied"] = r.certificate.satisfied;
        t["threshold"] = r.certificate.threshold_split;
        t["predicted_bound"] = std::isfinite(r.certificate.predicted_bound)
                                   ? nlohmann::json(r.certificate.predicted_bound)
                                   : nlohmann::json(nullptr);
        t["empirical_error"] = r.empirical_error;
        t["bound_satisfied"] = r.bound_satisfied;
        t["converged"] = r.solver_converged;
        t["tube_slack"] = r.tube_slack;
        t["cone_slack"] = r.cone_slack;
        t["runtime_ms"] = r.runtime_ms;
        if (!r.error.empty()) t["error"] = r.error;
        trials.push_back(std::move(t));
    }
    j["trials"] = std::move(trials);
    return j;
}

}  // namespace ssep
