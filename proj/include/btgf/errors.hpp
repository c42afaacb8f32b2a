#pragma once

#include <stdexcept>
#include <string>

namespace btgf {

/// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Dimension or symmetry violations on matrix inputs.
struct ShapeError : Error {
    using Error::Error;
};

/// Invalid configuration values (k < 1, gamma <= 0, V < 2, ...).
struct ParameterError : Error {
    using Error::Error;
};

/// File ingestion problems; message carries file and line context.
struct DataError : Error {
    using Error::Error;
};

/// Base for numeric failures detected at runtime.
struct NumericError : Error {
    using Error::Error;
};

/// An embedding column has (near-)zero norm -- representation collapse.
struct DegenerateColumnError : NumericError {
    using NumericError::NumericError;
};

/// A row fed to a cosine-based loss has (near-)zero norm.
struct DegenerateRowError : NumericError {
    using NumericError::NumericError;
};

/// A soft-assignment column sums to zero -- empty-cluster collapse.
struct DegenerateClusterError : NumericError {
    using NumericError::NumericError;
};

/// Training produced a non-finite loss or parameter.
struct DivergenceError : NumericError {
    using NumericError::NumericError;
};

/// Inputs outside a function's mathematical domain (e.g. KL on nonpositive entries).
struct DomainError : NumericError {
    using NumericError::NumericError;
};

}  // namespace btgf
