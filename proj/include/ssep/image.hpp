#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "ssep/operators.hpp"
#include "ssep/rng.hpp"
#include "ssep/solver.hpp"

namespace ssep {

// Grayscale image with values in [0, 1], h x w.
struct Image {
    RealMatrix pixels;
    int height() const { return static_cast<int>(pixels.rows()); }
    int width() const { return static_cast<int>(pixels.cols()); }
};

namespace detail {

inline int pgm_next_token(std::istream& is, std::string& token) {
    token.clear();
    int c = is.get();
    for (;;) {
        while (c == ' ' || c == '\t' || c == '\r' || c == '\n') c = is.get();
        if (c == '#') {
            while (c != '\n' && c != EOF) c = is.get();
            continue;
        }
        break;
    }
    while (c != EOF && c != ' ' && c != '\t' && c != '\r' && c != '\n' && c != '#') {
        token.push_back(static_cast<char>(c));
        c = is.get();
    }
    return c;
}

}  // namespace detail

/// Binary 8-bit PGM (P5) reader.
inline Image read_pgm(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    std::string tok;
    detail::pgm_next_token(is, tok);
    if (tok != "P5") throw IoError(path.string() + ": not a binary PGM (P5) file");
    detail::pgm_next_token(is, tok);
    const int w = std::stoi(tok);
    detail::pgm_next_token(is, tok);
    const int h = std::stoi(tok);
    detail::pgm_next_token(is, tok);
    const int maxval = std::stoi(tok);
    if (w < 1 || h < 1) throw IoError(path.string() + ": bad dimensions");
    if (maxval < 1 || maxval > 255) throw IoError(path.string() + ": only 8-bit PGM supported");
    Image img;
    img.pixels.resize(h, w);
    std::vector<unsigned char> row(w);
    for (int r = 0; r < h; ++r) {
        is.read(reinterpret_cast<char*>(row.data()), w);
        if (!is) throw IoError(path.string() + ": truncated pixel data");
        for (int c = 0; c < w; ++c) img.pixels(r, c) = row[c] / static_cast<double>(maxval);
    }
    return img;
}

inline void write_pgm(const std::filesystem::path& path, const Image& img) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    std::vector<unsigned char> row(img.width());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            const double v = std::clamp(img.pixels(r, c), 0.0, 1.0);
            row[c] = static_cast<unsigned char>(std::lround(v * 255.0));
        }
        os.write(reinterpret_cast<const char*>(row.data()), img.width());
    }
    if (!os) throw IoError("write failed for " + path.string());
}

/// Piecewise-constant test image: flat background with a rectangle and a disk.
inline Image synthetic_cartoon(int h, int w) {
    Image img;
    img.pixels = RealMatrix::Constant(h, w, 0.2);
    for (int r = h / 4; r < 2 * h / 3; ++r)
        for (int c = w / 5; c < 3 * w / 5; ++c) img.pixels(r, c) = 0.7;
    const double cy = 0.7 * h, cx = 0.75 * w, rad = 0.16 * std::min(h, w);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            if ((r - cy) * (r - cy) + (c - cx) * (c - cx) <= rad * rad) img.pixels(r, c) = 0.95;
    return img;
}

/// Single-frequency cosine texture: one 2-D DCT atom, so its analysis
/// coefficients are exactly 1-sparse. Zero-mean with amplitude `amp`.
inline Image synthetic_texture(int h, int w, double amp = 0.6) {
    const RealMatrix th = dct_matrix(h);
    const RealMatrix tw = dct_matrix(w);
    const int kh = std::max(1, (2 * h) / 3);
    const int kw = std::max(1, w / 3);
    Image img;
    img.pixels.resize(h, w);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) img.pixels(r, c) = amp * th(kh, r) * tw(kw, c);
    return img;
}

struct DemoOptions {
    double tau = 1e-3;        // finite-difference regularization weight
    std::uint64_t seed = 0;   // noise draw
    int max_size = 128;       // largest accepted image side
    SolveOptions solve = [] {
        SolveOptions s;
        s.max_iterations = 20000;
        s.objective_tol = 1e-8;
        s.check_interval = 50;
        s.stagnation_window = 200;
        return s;
    }();
};

struct DemoMetrics {
    double corrupted_snr_db = 0.0;
    double restored_cartoon_snr_db = 0.0;
    double gain_db = 0.0;
    double texture_error = 0.0;  // ||x2* - texture||_2
    double epsilon = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Separate cartoon + texture + noise by the analysis program with the
/// regularized finite-difference operator on the cartoon block and the 2-D
/// DCT on the texture block, measuring through A = [I I]. Writes
/// corrupted.pgm, restored_cartoon.pgm, restored_texture.pgm, metrics.json.
inline DemoMetrics demo_image(const Image& cartoon, const Image& texture,
                              std::optional<double> snr_db,
                              const std::filesystem::path& out_dir,
                              const DemoOptions& opts = {}) {
    const int h = cartoon.height(), w = cartoon.width();
    if (h != texture.height() || w != texture.width())
        throw DimensionMismatch("demo_image: cartoon and texture sizes differ");
    if (h < 2 || w < 2) throw Error("demo_image: images must be at least 2x2");
    if (h > opts.max_size || w > opts.max_size)
        throw ImageTooLarge("demo_image: image exceeds " + std::to_string(opts.max_size) +
                            " pixels per side");
    const int d = h * w;

    Vector x1_true(d), x2_true(d);
    for (int c = 0; c < w; ++c)
        for (int r = 0; r < h; ++r) {
            x1_true(c * h + r) = cartoon.pixels(r, c);
            x2_true(c * h + r) = texture.pixels(r, c);
        }
    const Vector y0 = x1_true + x2_true;

    Vector y = y0;
    double epsilon = 0.0;
    const double snr_value = snr_db.value_or(0.0);
    if (snr_db.has_value()) {
        Rng rng(opts.seed, 0xdeadbeef);
        const double target_power = y0.squaredNorm() * std::pow(10.0, -snr_value / 10.0);
        Vector noise(d);
        for (int i = 0; i < d; ++i) noise(i) = Complex(rng.normal(), 0.0);
        noise *= std::sqrt(target_power / static_cast<double>(d));
        y += noise;
        epsilon = noise.norm();
    }

    const LinearOperator a = sum_two_components_op(d);
    const LinearOperator psi =
        block_diag_operator(finite_difference_op(h, w, opts.tau), dct2_op(h, w));
    const SolveResult result = solve_p_star(a, psi, y, epsilon, opts.solve);

    const Vector x1 = result.x_star.head(d);
    const Vector x2 = result.x_star.tail(d);

    DemoMetrics metrics;
    metrics.epsilon = epsilon;
    metrics.iterations = result.iterations_used;
    metrics.converged = result.converged;
    const double cartoon_energy = x1_true.squaredNorm();
    metrics.corrupted_snr_db = 10.0 * std::log10(cartoon_energy / (y - x1_true).squaredNorm());
    metrics.restored_cartoon_snr_db =
        10.0 * std::log10(cartoon_energy / (x1 - x1_true).squaredNorm());
    metrics.gain_db = metrics.restored_cartoon_snr_db - metrics.corrupted_snr_db;
    metrics.texture_error = (x2 - x2_true).norm();

    std::filesystem::create_directories(out_dir);
    auto to_image = [h, w](const Vector& v, double shift) {
        Image img;
        img.pixels.resize(h, w);
        for (int c = 0; c < w; ++c)
            for (int r = 0; r < h; ++r) img.pixels(r, c) = v(c * h + r).real() + shift;
        return img;
    };
    write_pgm(out_dir / "corrupted.pgm", to_image(y, 0.0));
    write_pgm(out_dir / "restored_cartoon.pgm", to_image(x1, 0.0));
    // the texture is roughly zero-mean; shift for display
    write_pgm(out_dir / "restored_texture.pgm", to_image(x2, 0.5));

    nlohmann::json j;
    j["corrupted_snr_db"] = metrics.corrupted_snr_db;
    j["restored_cartoon_snr_db"] = metrics.restored_cartoon_snr_db;
    j["gain_db"] = metrics.gain_db;
    j["texture_error"] = metrics.texture_error;
    j["epsilon"] = metrics.epsilon;
    j["iterations"] = metrics.iterations;
    j["converged"] = metrics.converged;
    std::ofstream os(out_dir / "metrics.json");
    os << j.dump(2) << '\n';
    return metrics;
}

}  // namespace ssep
