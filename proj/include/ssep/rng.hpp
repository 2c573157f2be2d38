#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "ssep/matrix.hpp"

namespace ssep {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace detail

// Deterministic random source. Gaussian draws go through an explicit
// Box-Muller transform on raw 53-bit uniforms so that streams are identical
// across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = seed ^ (0xd6e8feb86659fd93ull * (stream + 1));
        const std::uint64_t a = detail::splitmix64(s);
        const std::uint64_t b = detail::splitmix64(s);
        gen_.seed(a ^ (b << 1));
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    /// Circularly symmetric complex normal with unit variance.
    Complex complex_normal() {
        const double s = std::numbers::sqrt2;
        return {normal() / s, normal() / s};
    }

    /// Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(gen_() % span);
    }

    std::uint64_t bits() { return gen_(); }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

inline Matrix gaussian_matrix(Rng& rng, int rows, int cols, bool complex_entries = false) {
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            m(i, j) = complex_entries ? rng.complex_normal() : Complex(rng.normal(), 0.0);
    return m;
}

/// Orthonormal columns: the thin Q factor of a Gaussian draw.
inline Matrix random_orthonormal(Rng& rng, int rows, int cols, bool complex_entries = false) {
    const Matrix g = gaussian_matrix(rng, rows, cols, complex_entries);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    return q;
}

/// k distinct indices out of [0, n), sorted.
inline std::vector<int> random_support(Rng& rng, int n, int k) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
        const int j = rng.uniform_int(i, n - 1);
        std::swap(pool[i], pool[j]);
    }
    std::vector<int> out(pool.begin(), pool.begin() + k);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace ssep
