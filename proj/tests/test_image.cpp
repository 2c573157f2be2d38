#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "ssep/image.hpp"

using namespace ssep;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / "ssep_image_tests" / name;
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), {});
}

}  // namespace

TEST_CASE("pgm round trip with comments") {
    const auto dir = temp_dir("pgm");
    Image img;
    img.pixels.resize(3, 4);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) img.pixels(r, c) = (r * 4 + c) / 11.0;
    write_pgm(dir / "a.pgm", img);
    const Image back = read_pgm(dir / "a.pgm");
    REQUIRE(back.height() == 3);
    REQUIRE(back.width() == 4);
    REQUIRE((back.pixels - img.pixels).cwiseAbs().maxCoeff() < 1.0 / 255.0 + 1e-12);

    {
        std::ofstream os(dir / "c.pgm", std::ios::binary);
        os << "P5\n# a comment\n2 2\n# another\n255\n";
        const unsigned char px[4] = {0, 85, 170, 255};
        os.write(reinterpret_cast<const char*>(px), 4);
    }
    const Image commented = read_pgm(dir / "c.pgm");
    REQUIRE(commented.pixels(0, 1) == Catch::Approx(85.0 / 255.0));
    REQUIRE(commented.pixels(1, 1) == Catch::Approx(1.0));

    REQUIRE_THROWS_AS(read_pgm(dir / "missing.pgm"), IoError);
}

TEST_CASE("synthetic texture is exactly one DCT atom") {
    const int h = 16, w = 16;
    const Image tex = synthetic_texture(h, w);
    const Matrix dct = dct2_operator(h, w);
    Vector v(h * w);
    for (int c = 0; c < w; ++c)
        for (int r = 0; r < h; ++r) v(c * h + r) = tex.pixels(r, c);
    const Vector coef = dct * v;
    REQUIRE(sigma_k(coef, 1) < 1e-12);
    REQUIRE(coef.cwiseAbs().maxCoeff() == Catch::Approx(0.6).epsilon(1e-10));
}

TEST_CASE("nothing to separate: zero texture and zero noise") {
    const int h = 16, w = 16;
    const Image cartoon = synthetic_cartoon(h, w);
    Image zero;
    zero.pixels = RealMatrix::Zero(h, w);
    const auto dir = temp_dir("trivial");
    DemoOptions opts;
    opts.solve.max_iterations = 20000;
    const auto metrics = demo_image(cartoon, zero, std::nullopt, dir, opts);
    REQUIRE(metrics.converged);
    REQUIRE(metrics.epsilon == 0.0);

    // restored cartoon equals the input within solver tolerance
    const Image restored = read_pgm(dir / "restored_cartoon.pgm");
    double num = 0.0, den = 0.0;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            num += std::pow(restored.pixels(r, c) - cartoon.pixels(r, c), 2);
            den += std::pow(cartoon.pixels(r, c), 2);
        }
    REQUIRE(std::sqrt(num / den) < 1e-2);  // quantized to 8 bits on disk
    REQUIRE(metrics.restored_cartoon_snr_db > 60.0);
}

TEST_CASE("oversized images are rejected") {
    Image big;
    big.pixels = RealMatrix::Zero(129, 8);
    Image small;
    small.pixels = RealMatrix::Zero(129, 8);
    REQUIRE_THROWS_AS(demo_image(big, small, std::nullopt, temp_dir("big")), ImageTooLarge);
}

TEST_CASE("demo outputs are deterministic for a fixed seed") {
    const int h = 12, w = 12;
    const Image cartoon = synthetic_cartoon(h, w);
    const Image texture = synthetic_texture(h, w);
    DemoOptions opts;
    opts.seed = 3;
    opts.solve.max_iterations = 800;
    const auto dir1 = temp_dir("det1");
    const auto dir2 = temp_dir("det2");
    const auto m1 = demo_image(cartoon, texture, 20.0, dir1, opts);
    const auto m2 = demo_image(cartoon, texture, 20.0, dir2, opts);
    REQUIRE(m1.epsilon == m2.epsilon);
    REQUIRE(m1.restored_cartoon_snr_db == m2.restored_cartoon_snr_db);
    for (const char* f : {"corrupted.pgm", "restored_cartoon.pgm", "restored_texture.pgm"})
        REQUIRE(slurp(dir1 / f) == slurp(dir2 / f));
}
