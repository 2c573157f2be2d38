// Command-line front end: coherence profiles, recovery certificates, the
// l1 separation solver, Monte Carlo sweeps, and the image separation demo.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ssep/ssep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json number_or_inf(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json profile_to_json(const ssep::CoherenceProfile& p) {
    return json{{"mu_hat_1", p.mu_hat_1}, {"mu_hat_2", p.mu_hat_2}, {"mu_hat_m", p.mu_hat_m},
                {"mu_hat_max", p.mu_hat_max}, {"mu_1", p.mu_1},     {"mu_2", p.mu_2},
                {"mu_m", p.mu_m},           {"mu", p.mu},           {"omega_min", p.omega_min},
                {"omega_max", p.omega_max}};
}

json certificate_to_json(const ssep::RecoveryCertificate& c) {
    const char* route = c.route == ssep::ConstantsRoute::Split           ? "split"
                        : c.route == ssep::ConstantsRoute::SingleStacked ? "single_stacked"
                                                                         : "none";
    return json{{"threshold_split", number_or_inf(c.threshold_split)},
                {"threshold_single", number_or_inf(c.threshold_single)},
                {"k1", c.k1},
                {"k2", c.k2},
                {"satisfied", c.satisfied},
                {"C0", number_or_inf(c.c0)},
                {"C1", number_or_inf(c.c1)},
                {"predicted_bound", number_or_inf(c.predicted_bound)},
                {"sigma_min_psi", c.sigma_min_psi},
                {"constants_route", route}};
}

struct CoherenceArgs {
    std::string a1, psi1, a2, psi2;
    bool as_json = false;
};

int run_coherence(const CoherenceArgs& args) {
    const auto a1 = ssep::read_matrix(args.a1);
    const auto psi1 = ssep::read_matrix(args.psi1);
    const auto a2 = ssep::read_matrix(args.a2);
    const auto psi2 = ssep::read_matrix(args.psi2);
    const auto p = ssep::profile(a1, psi1, a2, psi2);
    if (args.as_json) {
        std::cout << profile_to_json(p).dump(2) << '\n';
    } else {
        std::printf("mu_hat_1   = %.12g\n", p.mu_hat_1);
        std::printf("mu_hat_2   = %.12g\n", p.mu_hat_2);
        std::printf("mu_hat_m   = %.12g\n", p.mu_hat_m);
        std::printf("mu_hat_max = %.12g\n", p.mu_hat_max);
        std::printf("mu_1       = %.12g\n", p.mu_1);
        std::printf("mu_2       = %.12g\n", p.mu_2);
        std::printf("mu_m       = %.12g\n", p.mu_m);
        std::printf("mu         = %.12g\n", p.mu);
        std::printf("omega_min  = %.12g\n", p.omega_min);
        std::printf("omega_max  = %.12g\n", p.omega_max);
    }
    return 0;
}

struct CertifyArgs {
    std::string a1, psi1, a2, psi2;
    int k1 = 0, k2 = 0;
    double eps = 0.0;
    double sigma_k1 = 0.0, sigma_k2 = 0.0;
};

int run_certify(const CertifyArgs& args) {
    const auto a1 = ssep::read_matrix(args.a1);
    const auto psi1 = ssep::read_matrix(args.psi1);
    const auto a2 = ssep::read_matrix(args.a2);
    const auto psi2 = ssep::read_matrix(args.psi2);
    const auto p = ssep::profile(a1, psi1, a2, psi2);
    const double sigma_min =
        std::min(ssep::smallest_singular_value(psi1), ssep::smallest_singular_value(psi2));
    const auto cert =
        ssep::certify(p, sigma_min, args.k1, args.k2, args.eps, args.sigma_k1, args.sigma_k2);
    json out = certificate_to_json(cert);
    out["profile"] = profile_to_json(p);
    std::cout << out.dump(2) << '\n';
    return cert.satisfied ? 0 : 3;
}

struct SolveArgs {
    std::string a, psi, y;
    double eps = 0.0;
    std::string opts_json;
    std::string out = "x_star.ssep";
    std::string summary;
};

int run_solve(const SolveArgs& args) {
    const auto a = ssep::read_matrix(args.a);
    const auto psi = ssep::read_matrix(args.psi);
    const auto y = ssep::read_vector(args.y);
    ssep::SolveOptions opts;
    if (!args.opts_json.empty()) {
        json j;
        if (fs::exists(args.opts_json)) {
            std::ifstream is(args.opts_json);
            j = json::parse(is);
        } else {
            j = json::parse(args.opts_json);
        }
        opts.max_iterations = j.value("max_iterations", opts.max_iterations);
        opts.objective_tol = j.value("objective_tol", opts.objective_tol);
        opts.feasibility_tol = j.value("feasibility_tol", opts.feasibility_tol);
        opts.step_scale = j.value("step_scale", opts.step_scale);
        opts.primal_dual_ratio = j.value("primal_dual_ratio", opts.primal_dual_ratio);
        opts.relaxation = j.value("relaxation", opts.relaxation);
    }
    const auto r = ssep::solve_p_star(a, psi, y, args.eps, opts);
    ssep::write_vector_binary(args.out, r.x_star);
    json summary{{"objective", r.objective},
                 {"residual_norm", r.residual_norm},
                 {"iterations_used", r.iterations_used},
                 {"converged", r.converged},
                 {"x_out", args.out}};
    if (!args.summary.empty()) {
        std::ofstream os(args.summary);
        os << summary.dump(2) << '\n';
    }
    std::cout << summary.dump(2) << '\n';
    return r.converged ? 0 : 4;
}

struct BenchArgs {
    std::string spec_path;
    std::string out_dir = "bench_out";
    int threads = 0;
    bool no_timing = false;
};

int run_bench(const BenchArgs& args) {
    std::ifstream is(args.spec_path);
    if (!is) throw ssep::IoError("cannot open " + args.spec_path);
    const auto spec = ssep::spec_from_json(json::parse(is));
    ssep::RunOptions run;
    run.threads = args.threads;
    run.record_runtime = !args.no_timing;
    const auto sweep = ssep::run_sweep(spec, run);
    fs::create_directories(args.out_dir);
    {
        std::ofstream os(fs::path(args.out_dir) / "sweep.csv");
        os << ssep::to_csv(sweep);
    }
    {
        std::ofstream os(fs::path(args.out_dir) / "sweep.json");
        os << ssep::sweep_to_json(sweep).dump(2) << '\n';
    }
    const auto& a = sweep.aggregate;
    std::printf("trials=%d certified=%d converged=%d bound_violations=%d exact<=1e-4: %d\n",
                a.trials, a.certified, a.converged, a.bound_violations, a.exact_recoveries);
    std::printf("mean_empirical_error=%.6g mean_bound_ratio=%.6g\n", a.mean_empirical_error,
                a.mean_bound_ratio);
    std::printf("reports written to %s\n", args.out_dir.c_str());
    return a.bound_violations == 0 ? 0 : 5;
}

struct DemoArgs {
    std::string cartoon, texture;
    double snr = 20.0;
    bool noiseless = false;
    std::string out_dir = "demo_out";
    double tau = 1e-3;
    std::uint64_t seed = 0;
    int max_iterations = 20000;
    int size = 32;
};

int run_demo(const DemoArgs& args) {
    ssep::Image cartoon, texture;
    if (!args.cartoon.empty()) {
        cartoon = ssep::read_pgm(args.cartoon);
    } else {
        cartoon = ssep::synthetic_cartoon(args.size, args.size);
        std::printf("using built-in %dx%d cartoon\n", args.size, args.size);
    }
    if (!args.texture.empty()) {
        texture = ssep::read_pgm(args.texture);
    } else {
        texture = ssep::synthetic_texture(cartoon.height(), cartoon.width());
        std::printf("using built-in single-frequency texture\n");
    }
    ssep::DemoOptions opts;
    opts.tau = args.tau;
    opts.seed = args.seed;
    opts.solve.max_iterations = args.max_iterations;
    std::optional<double> snr;
    if (!args.noiseless) snr = args.snr;
    const auto m = ssep::demo_image(cartoon, texture, snr, args.out_dir, opts);
    std::printf("corrupted SNR  = %.3f dB\n", m.corrupted_snr_db);
    std::printf("restored SNR   = %.3f dB\n", m.restored_cartoon_snr_db);
    std::printf("gain           = %.3f dB\n", m.gain_db);
    std::printf("epsilon        = %.6g, iterations = %d, converged = %d\n", m.epsilon,
                m.iterations, m.converged);
    std::printf("outputs in %s\n", args.out_dir.c_str());
    return m.converged ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse signal separation: coherence certificates and l1 solving"};
    app.require_subcommand(1);

    CoherenceArgs coh;
    auto* coh_cmd = app.add_subcommand("coherence", "coherence profile of (A1,Psi1,A2,Psi2)");
    coh_cmd->add_option("--a1", coh.a1, "matrix file for A1")->required();
    coh_cmd->add_option("--psi1", coh.psi1, "matrix file for Psi1")->required();
    coh_cmd->add_option("--a2", coh.a2, "matrix file for A2")->required();
    coh_cmd->add_option("--psi2", coh.psi2, "matrix file for Psi2")->required();
    coh_cmd->add_flag("--json", coh.as_json, "emit JSON");

    CertifyArgs cert;
    auto* cert_cmd =
        app.add_subcommand("certify", "recovery certificate for sparsity levels (k1, k2)");
    cert_cmd->add_option("--a1", cert.a1)->required();
    cert_cmd->add_option("--psi1", cert.psi1)->required();
    cert_cmd->add_option("--a2", cert.a2)->required();
    cert_cmd->add_option("--psi2", cert.psi2)->required();
    cert_cmd->add_option("--k1", cert.k1)->required();
    cert_cmd->add_option("--k2", cert.k2)->required();
    cert_cmd->add_option("--eps", cert.eps, "noise level");
    cert_cmd->add_option("--sigma-k1", cert.sigma_k1, "l1 tail of Psi1 x1");
    cert_cmd->add_option("--sigma-k2", cert.sigma_k2, "l1 tail of Psi2 x2");

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "minimize ||Psi x||_1 s.t. ||y - A x|| <= eps");
    solve_cmd->add_option("--a", solve.a)->required();
    solve_cmd->add_option("--psi", solve.psi)->required();
    solve_cmd->add_option("--y", solve.y)->required();
    solve_cmd->add_option("--eps", solve.eps)->required();
    solve_cmd->add_option("--opts", solve.opts_json, "solver options: JSON string or file");
    solve_cmd->add_option("--out", solve.out, "output file for x*");
    solve_cmd->add_option("--summary", solve.summary, "JSON summary file");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Monte Carlo sweep from a spec file");
    bench_cmd->add_option("--spec", bench.spec_path, "sweep spec JSON")->required();
    bench_cmd->add_option("--out-dir", bench.out_dir, "report directory");
    bench_cmd->add_option("--threads", bench.threads, "trial concurrency (0: SSEP_THREADS)");
    bench_cmd->add_flag("--no-timing", bench.no_timing, "write runtime_ms = 0 for stable output");

    DemoArgs demo;
    auto* demo_cmd = app.add_subcommand("demo-image", "cartoon/texture separation demo");
    demo_cmd->add_option("--cartoon", demo.cartoon, "cartoon PGM (P5); built-in if omitted");
    demo_cmd->add_option("--texture", demo.texture, "texture PGM (P5); built-in if omitted");
    demo_cmd->add_option("--snr", demo.snr, "noise level in dB");
    demo_cmd->add_flag("--noiseless", demo.noiseless, "disable noise (eps = 0)");
    demo_cmd->add_option("--out", demo.out_dir, "output directory");
    demo_cmd->add_option("--tau", demo.tau, "finite-difference regularization");
    demo_cmd->add_option("--seed", demo.seed, "noise seed");
    demo_cmd->add_option("--max-iter", demo.max_iterations, "solver iteration budget");
    demo_cmd->add_option("--size", demo.size, "built-in image side length");

    CLI11_PARSE(app, argc, argv);

    try {
        if (coh_cmd->parsed()) return run_coherence(coh);
        if (cert_cmd->parsed()) return run_certify(cert);
        if (solve_cmd->parsed()) return run_solve(solve);
        if (bench_cmd->parsed()) return run_bench(bench);
        if (demo_cmd->parsed()) return run_demo(demo);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
