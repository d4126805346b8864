#include "deep_eda/textio.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace deep_eda {

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

LineReader::LineReader(const std::string& path) : in_(path) {
    if (!in_) throw std::runtime_error("cannot open file for reading: " + path);
}

std::vector<std::string> LineReader::next_tokens() {
    std::string line;
    if (!std::getline(in_, line)) throw ParseError("unexpected end of file", line_ + 1);
    ++line_;
    std::istringstream iss(line);
    std::vector<std::string> toks;
    std::string t;
    while (iss >> t) toks.push_back(t);
    return toks;
}

std::vector<std::string> LineReader::expect_tokens(size_t count, const std::string& what) {
    auto toks = next_tokens();
    if (toks.size() != count)
        throw ParseError("expected " + std::to_string(count) + " " + what + ", got " +
                             std::to_string(toks.size()),
                         line_);
    return toks;
}

double LineReader::parse_real(const std::string& tok, int line, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw ParseError("invalid " + what + " value '" + tok + "'", line);
    return v;
}

int LineReader::parse_int(const std::string& tok, int line, const std::string& what) {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0')
        throw ParseError("invalid " + what + " value '" + tok + "'", line);
    return static_cast<int>(v);
}

std::vector<double> LineReader::expect_reals(size_t count, const std::string& what) {
    auto toks = expect_tokens(count, what);
    std::vector<double> out(count);
    for (size_t i = 0; i < count; ++i) out[i] = parse_real(toks[i], line_, what);
    return out;
}

std::vector<int> LineReader::expect_ints(size_t count, const std::string& what) {
    auto toks = expect_tokens(count, what);
    std::vector<int> out(count);
    for (size_t i = 0; i < count; ++i) out[i] = parse_int(toks[i], line_, what);
    return out;
}

} // namespace deep_eda
