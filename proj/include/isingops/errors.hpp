#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace isingops {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an enumeration or materialization would exceed a size guard.
class ResourceLimit : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Raised when an evaluation point sits on (or within 1e-12 of) a pole.
class SingularityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Raised when a numerical procedure cannot reach its stated accuracy.
class AccuracyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] void throw_invalid(const std::string& what);

}  // namespace isingops
