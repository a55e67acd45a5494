#include "archmark/error.hpp"

namespace archmark {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::orientation: return "orientation";
    case ErrorKind::segmentation: return "segmentation";
    case ErrorKind::assignment: return "assignment";
    case ErrorKind::arch_fit: return "arch_fit";
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::internal: return "internal";
    }
    return "unknown";
}

int exit_code(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::parse: return 2;
    case ErrorKind::orientation: return 3;
    case ErrorKind::segmentation: return 4;
    case ErrorKind::arch_fit: return 4;
    case ErrorKind::assignment: return 5;
    case ErrorKind::invalid_input: return 1;
    case ErrorKind::internal: return 1;
    }
    return 1;
}

} // namespace archmark
