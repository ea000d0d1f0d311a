// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_BINARY_IO_HPP
#define LABELNOISE_BINARY_IO_HPP

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "labelnoise/matrix.hpp"

namespace labelnoise::io {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void write_u64(std::ostream& os, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(buf), 8);
}

inline std::uint64_t read_u64(std::istream& is, const char* what) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    if (!is) throw FormatError(std::string("truncated while reading ") + what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

inline void write_f64(std::ostream& os, double d) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(d));
    __builtin_memcpy(&bits, &d, 8);
    write_u64(os, bits);
}

inline double read_f64(std::istream& is, const char* what) {
    const std::uint64_t bits = read_u64(is, what);
    double d;
    __builtin_memcpy(&d, &bits, 8);
    return d;
}

inline void write_doubles(std::ostream& os, const std::vector<double>& v) {
    write_u64(os, v.size());
    for (double d : v) write_f64(os, d);
}

inline std::vector<double> read_doubles(std::istream& is, const char* what) {
    const std::uint64_t n = read_u64(is, what);
    std::vector<double> v(n);
    for (auto& d : v) d = read_f64(is, what);
    return v;
}

inline void write_matrix(std::ostream& os, const Matrix& m) {
    write_u64(os, m.rows());
    write_u64(os, m.cols());
    for (double d : m.data()) write_f64(os, d);
}

inline Matrix read_matrix(std::istream& is, const char* what) {
    const std::uint64_t rows = read_u64(is, what);
    const std::uint64_t cols = read_u64(is, what);
    Matrix m(rows, cols);
    for (double& d : m.data()) d = read_f64(is, what);
    return m;
}

inline void write_magic(std::ostream& os, const char magic[4], std::uint64_t version) {
    os.write(magic, 4);
    write_u64(os, version);
}

inline void expect_magic(std::istream& is, const char magic[4], std::uint64_t version,
                         const std::string& path) {
    char buf[4];
    is.read(buf, 4);
    if (!is || buf[0] != magic[0] || buf[1] != magic[1] || buf[2] != magic[2] ||
        buf[3] != magic[3])
        throw FormatError(path + ": bad magic at offset 0");
    const std::uint64_t v = read_u64(is, "version");
    if (v != version)
        throw FormatError(path + ": unsupported version " + std::to_string(v));
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open for writing: " + path);
    return os;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open for reading: " + path);
    return is;
}

}  // namespace labelnoise::io

#endif
