#pragma once

#include <stdexcept>
#include <string>

namespace fk {

enum class ErrorKind {
    invalid_argument,
    sampling_failure,
    stencil_out_of_range,
    window_mismatch,
    support_violation,
    evaluation_error,
    equation_residual_too_large,
    hypothesis_violation,
    solver_failure,
    io,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace fk
