#pragma once

#include <string>
#include <vector>

namespace archmark {

/// Non-fatal conditions collected while a model is processed.
struct Diagnostics {
    std::vector<std::string> warnings;

    void warn(std::string message) { warnings.push_back(std::move(message)); }
};

inline void warn(Diagnostics* diag, std::string message)
{
    if (diag)
        diag->warn(std::move(message));
}

} // namespace archmark
