#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace lieforge {

using Real = double;
using Complex = std::complex<double>;

enum class Field { real, complex };
enum class Mode { generic, nilpotent };

template <class S>
inline constexpr bool is_complex_v = std::is_same_v<S, Complex>;

template <class S>
inline constexpr Field field_of_v = is_complex_v<S> ? Field::complex : Field::real;

/// Dense row-major matrix over the scalar field.
template <class S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class S>
using RowVector = Eigen::Matrix<S, 1, Eigen::Dynamic>;

template <class S>
using ColVector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

std::string_view to_string(Field field);
std::string_view to_string(Mode mode);
Field parse_field(std::string_view text);
Mode parse_mode(std::string_view text);

// Error hierarchy. Every library failure derives from lieforge::Error so the
// CLI can map it to an exit code.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition (shape mismatch, bad index, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

class UnsupportedDimension : public Error {
public:
    using Error::Error;
};

/// Retryable: Rk(P) != N-1.
class DegenerateParameters : public Error {
public:
    using Error::Error;
};

/// Retryable: |n{1}| below threshold in generic mode, so c = 1/n{1} is unusable.
class NullFirstComponent : public Error {
public:
    using Error::Error;
};

class GenerationFailed : public Error {
public:
    GenerationFailed(const std::string& what, std::string last_failure)
        : Error(what), last_failure_(std::move(last_failure)) {}
    const std::string& last_failure() const noexcept { return last_failure_; }

private:
    std::string last_failure_;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class SizeGuard : public Error {
public:
    using Error::Error;
};

class VersionError : public Error {
public:
    using Error::Error;
};

class IntegrityError : public Error {
public:
    using Error::Error;
};

} // namespace lieforge
