#pragma once
#include <stdexcept>
#include <string>

namespace subfou {

// Bad arguments to a numerical routine (outside its domain).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Bad run configuration (CLI / experiment settings).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericError {
public:
    QuadratureError(const std::string& what, double previous, double last)
        : NumericError(what + " (last estimates " + std::to_string(previous) + ", " +
                       std::to_string(last) + ")"),
          previous_(previous), last_(last) {}
    double previous() const { return previous_; }
    double last() const { return last_; }

private:
    double previous_;
    double last_;
};

} // namespace subfou
