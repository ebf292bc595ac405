#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reconet {

enum class ErrorKind {
    Parameter,         // argument outside its documented domain
    UnsupportedInput,  // e.g. a directed graph where only undirected is defined
    NumericalInput,    // asymmetric or non-finite matrix handed to a numerical kernel
    NumericalFailure,  // solver did not converge / produced an invalid result
    SizeMismatch,
    Precondition,      // structural precondition such as connectivity
    InsufficientData,
    Input,             // malformed time series (non-finite, wrong alphabet)
    Parse,
    Io,
    UnknownName,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Process exit code for an error kind: 2 parse/format, 3 precondition,
/// 4 numerical, 5 unknown name.
int exit_code(ErrorKind kind) noexcept;

}  // namespace reconet
