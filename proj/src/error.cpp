#include "reconet/error.hpp"

namespace reconet {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Parameter: return "parameter_error";
        case ErrorKind::UnsupportedInput: return "unsupported_input";
        case ErrorKind::NumericalInput: return "numerical_input";
        case ErrorKind::NumericalFailure: return "numerical_failure";
        case ErrorKind::SizeMismatch: return "size_mismatch";
        case ErrorKind::Precondition: return "precondition_failed";
        case ErrorKind::InsufficientData: return "insufficient_data";
        case ErrorKind::Input: return "input_error";
        case ErrorKind::Parse: return "parse_error";
        case ErrorKind::Io: return "io_error";
        case ErrorKind::UnknownName: return "unknown_name";
    }
    return "error";
}

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Parse:
        case ErrorKind::Io:
            return 2;
        case ErrorKind::Parameter:
        case ErrorKind::UnsupportedInput:
        case ErrorKind::SizeMismatch:
        case ErrorKind::Precondition:
        case ErrorKind::InsufficientData:
        case ErrorKind::Input:
            return 3;
        case ErrorKind::NumericalInput:
        case ErrorKind::NumericalFailure:
            return 4;
        case ErrorKind::UnknownName:
            return 5;
    }
    return 1;
}

}  // namespace reconet
