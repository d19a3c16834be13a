// common.hpp — shared aliases and error types
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qc {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

// Error taxonomy mirrors the CLI exit codes: parse(2), validation(3), numeric(4).
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class parse_error : public error {
public:
    using error::error;
};

class validation_error : public error {
public:
    using error::error;
};

class numeric_error : public error {
public:
    using error::error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw validation_error(msg);
}

inline void require_finite(double x, const std::string& name) {
    if (!std::isfinite(x)) throw validation_error(name + " must be finite");
}

} // namespace qc
