#pragma once

#include <stdexcept>
#include <string>

namespace archmark {

/// Failure categories surfaced by the pipeline. Each maps to a CLI exit code.
enum class ErrorKind {
    parse,         ///< malformed or truncated STL
    orientation,   ///< PCA or sign checks could not establish a frame
    segmentation,  ///< no candidate threshold produced any tooth area
    assignment,    ///< the cost table could not be built or solved
    arch_fit,      ///< quadratic arch fit was rank deficient
    invalid_input, ///< contract violation by the caller
    internal,
};

const char* to_string(ErrorKind kind) noexcept;

/// Process exit code for a failure of the given kind (0 is success).
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace archmark
