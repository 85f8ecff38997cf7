#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace gvimr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes do not line up: dimension or weight mismatch, index out of range,
/// unknown catalog tag.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// A numeric parameter lies outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// An iterative procedure did not reach its tolerance.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double last_residual,
                   std::optional<std::size_t> index = std::nullopt)
        : Error(what), last_residual_(last_residual), index_(index) {}

    double last_residual() const noexcept { return last_residual_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    double last_residual_;
    std::optional<std::size_t> index_;
};

} // namespace gvimr
