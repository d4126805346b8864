#include <fstream>

#include "deep_eda/dbm.hpp"
#include "deep_eda/rbm.hpp"
#include "deep_eda/textio.hpp"

// Parameter snapshot files for both Boltzmann-machine flavors. Plain text,
// one matrix row per line, 17-significant-digit reals.

namespace deep_eda {

namespace {

void write_matrix(std::ofstream& out, const Matrix& M) {
    for (int r = 0; r < M.rows; ++r) {
        for (int c = 0; c < M.cols; ++c) out << (c ? " " : "") << format_real(M(r, c));
        out << '\n';
    }
}

void write_vector(std::ofstream& out, const Vector& v) {
    for (size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << format_real(v[i]);
    out << '\n';
}

Matrix read_matrix(LineReader& rd, int rows, int cols, const std::string& what) {
    Matrix M(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const auto vals = rd.expect_reals(static_cast<size_t>(cols), what + " row");
        std::copy(vals.begin(), vals.end(), M.row(r));
    }
    return M;
}

Vector read_vector(LineReader& rd, int len, const std::string& what) {
    return rd.expect_reals(static_cast<size_t>(len), what);
}

} // namespace

void save_rbm_params(const RbmParams& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << "rbm " << p.n() << ' ' << p.m() << '\n';
    write_matrix(out, p.W);
    write_vector(out, p.b);
    write_vector(out, p.c);
    if (!out) throw std::runtime_error("write failed: " + path);
}

RbmParams load_rbm_params(const std::string& path) {
    LineReader rd(path);
    const auto header = rd.expect_tokens(3, "header fields");
    if (header[0] != "rbm") throw ParseError("expected 'rbm' header", rd.line());
    const int n = LineReader::parse_int(header[1], rd.line(), "n");
    const int m = LineReader::parse_int(header[2], rd.line(), "m");
    if (n < 1 || m < 1) throw ParseError("layer sizes must be >= 1", rd.line());
    RbmParams p;
    p.W = read_matrix(rd, n, m, "W");
    p.b = read_vector(rd, n, "b");
    p.c = read_vector(rd, m, "c");
    return p;
}

void save_dbm_params(const DbmParams& p, const std::string& path) {
    const auto s = p.shape();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << "dbm " << s.n << ' ' << s.m1 << ' ' << s.m2 << '\n';
    write_matrix(out, p.W1);
    write_matrix(out, p.W2);
    write_vector(out, p.b);
    write_vector(out, p.c1);
    write_vector(out, p.c2);
    if (!out) throw std::runtime_error("write failed: " + path);
}

DbmParams load_dbm_params(const std::string& path) {
    LineReader rd(path);
    const auto header = rd.expect_tokens(4, "header fields");
    if (header[0] != "dbm") throw ParseError("expected 'dbm' header", rd.line());
    const int n = LineReader::parse_int(header[1], rd.line(), "n");
    const int m1 = LineReader::parse_int(header[2], rd.line(), "m1");
    const int m2 = LineReader::parse_int(header[3], rd.line(), "m2");
    if (n < 1 || m1 < 1 || m2 < 1) throw ParseError("layer sizes must be >= 1", rd.line());
    DbmParams p;
    p.W1 = read_matrix(rd, n, m1, "W1");
    p.W2 = read_matrix(rd, m1, m2, "W2");
    p.b = read_vector(rd, n, "b");
    p.c1 = read_vector(rd, m1, "c1");
    p.c2 = read_vector(rd, m2, "c2");
    return p;
}

} // namespace deep_eda
