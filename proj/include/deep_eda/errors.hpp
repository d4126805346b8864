#pragma once

#include <stdexcept>
#include <string>

namespace deep_eda {

// Parameters went non-finite during a training update.
class TrainingDivergence : public std::runtime_error {
public:
    explicit TrainingDivergence(const std::string& what) : std::runtime_error(what) {}
};

// Malformed persisted file; carries the 1-based line where parsing failed.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

} // namespace deep_eda
