#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "deep_eda/errors.hpp"

namespace deep_eda {

// Serializes a double with 17 significant digits (round-trip exact).
std::string format_real(double x);

// Line-oriented reader that tracks the 1-based line number for ParseError.
class LineReader {
public:
    explicit LineReader(const std::string& path);

    // Next line split into whitespace tokens; throws ParseError at EOF.
    std::vector<std::string> next_tokens();
    std::vector<std::string> expect_tokens(size_t count, const std::string& what);

    std::vector<double> expect_reals(size_t count, const std::string& what);
    std::vector<int> expect_ints(size_t count, const std::string& what);

    int line() const { return line_; }

    static double parse_real(const std::string& tok, int line, const std::string& what);
    static int parse_int(const std::string& tok, int line, const std::string& what);

private:
    std::ifstream in_;
    int line_ = 0;
};

} // namespace deep_eda
