#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "ssep/matrix.hpp"

namespace ssep {

// Binary matrix container "SSEP1": 5-byte magic, little-endian u32 rows and
// cols, u8 flag (0 = real, 1 = complex), then f64 entries in column-major
// order (complex entries as re,im pairs). Trailing bytes are rejected.
// The JSON alternative stores row-major data under
// {"rows","cols","complex","data"}.

namespace detail {

constexpr std::array<char, 5> kMagic = {'S', 'S', 'E', 'P', '1'};

inline void put_u32(std::ostream& os, std::uint32_t v) {
    const std::array<unsigned char, 4> b = {
        static_cast<unsigned char>(v & 0xff), static_cast<unsigned char>((v >> 8) & 0xff),
        static_cast<unsigned char>((v >> 16) & 0xff), static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b.data()), 4);
}

inline std::uint32_t get_u32(std::istream& is) {
    std::array<unsigned char, 4> b{};
    is.read(reinterpret_cast<char*>(b.data()), 4);
    if (!is) throw IoError("matrix file truncated in header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void put_f64(std::ostream& os, double v) {
    static_assert(sizeof(double) == 8);
    os.write(reinterpret_cast<const char*>(&v), 8);
}

inline double get_f64(std::istream& is) {
    double v = 0.0;
    is.read(reinterpret_cast<char*>(&v), 8);
    if (!is) throw IoError("matrix file truncated in payload");
    return v;
}

inline bool is_real(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (m(i, j).imag() != 0.0) return false;
    return true;
}

}  // namespace detail

inline void write_matrix_binary(const std::filesystem::path& path, const Matrix& m) {
    require_nonempty(m, "write_matrix_binary");
    require_finite(m, "write_matrix_binary");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os.write(detail::kMagic.data(), detail::kMagic.size());
    detail::put_u32(os, static_cast<std::uint32_t>(m.rows()));
    detail::put_u32(os, static_cast<std::uint32_t>(m.cols()));
    const bool complex_payload = !detail::is_real(m);
    os.put(complex_payload ? '\x01' : '\x00');
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            detail::put_f64(os, m(i, j).real());
            if (complex_payload) detail::put_f64(os, m(i, j).imag());
        }
    if (!os) throw IoError("write failed for " + path.string());
}

inline Matrix read_matrix_binary(std::istream& is) {
    std::array<char, 5> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != detail::kMagic) throw IoError("bad magic, not an SSEP1 matrix");
    const std::uint32_t rows = detail::get_u32(is);
    const std::uint32_t cols = detail::get_u32(is);
    const int flag = is.get();
    if (flag != 0 && flag != 1) throw IoError("bad complex flag");
    if (rows == 0 || cols == 0) throw IoError("matrix dimensions must be positive");
    Matrix m(rows, cols);
    for (std::uint32_t j = 0; j < cols; ++j)
        for (std::uint32_t i = 0; i < rows; ++i) {
            const double re = detail::get_f64(is);
            const double im = flag == 1 ? detail::get_f64(is) : 0.0;
            m(i, j) = Complex(re, im);
        }
    if (is.peek() != std::istream::traits_type::eof())
        throw IoError("trailing bytes after matrix payload");
    require_finite(m, "read_matrix_binary");
    return m;
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
    require_nonempty(m, "matrix_to_json");
    require_finite(m, "matrix_to_json");
    const bool complex_payload = !detail::is_real(m);
    nlohmann::json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["complex"] = complex_payload;
    auto data = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index jj = 0; jj < m.cols(); ++jj) {
            data.push_back(m(i, jj).real());
            if (complex_payload) data.push_back(m(i, jj).imag());
        }
    j["data"] = std::move(data);
    return j;
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw IoError("matrix JSON must contain rows, cols and data");
    const auto rows = j.at("rows").get<std::int64_t>();
    const auto cols = j.at("cols").get<std::int64_t>();
    const bool complex_payload = j.value("complex", false);
    if (rows <= 0 || cols <= 0) throw IoError("matrix dimensions must be positive");
    const auto& data = j.at("data");
    const std::size_t expected =
        static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * (complex_payload ? 2 : 1);
    if (!data.is_array() || data.size() != expected)
        throw IoError("matrix JSON data has wrong length: expected " + std::to_string(expected) +
                      ", got " + std::to_string(data.size()));
    Matrix m(rows, cols);
    std::size_t at = 0;
    for (std::int64_t i = 0; i < rows; ++i)
        for (std::int64_t jj = 0; jj < cols; ++jj) {
            const double re = data.at(at++).get<double>();
            const double im = complex_payload ? data.at(at++).get<double>() : 0.0;
            m(i, jj) = Complex(re, im);
        }
    require_finite(m, "matrix_from_json");
    return m;
}

/// Read a matrix from disk, sniffing SSEP1 binary by magic and falling back
/// to the JSON container otherwise.
inline Matrix read_matrix(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    std::array<char, 5> magic{};
    is.read(magic.data(), magic.size());
    const bool binary = is && magic == detail::kMagic;
    is.clear();
    is.seekg(0);
    if (binary) return read_matrix_binary(is);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("cannot parse " + path.string() + " as SSEP1 or JSON matrix: " + e.what());
    }
    return matrix_from_json(j);
}

inline void write_matrix_json(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << matrix_to_json(m).dump();
    if (!os) throw IoError("write failed for " + path.string());
}

/// Vectors travel as 1-column matrices.
inline Vector read_vector(const std::filesystem::path& path) {
    const Matrix m = read_matrix(path);
    if (m.cols() != 1) throw IoError("expected a 1-column matrix in " + path.string());
    return m.col(0);
}

inline void write_vector_binary(const std::filesystem::path& path, const Vector& v) {
    write_matrix_binary(path, Matrix(v));
}

}  // namespace ssep
