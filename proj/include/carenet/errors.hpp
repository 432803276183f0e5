#pragma once

#include <stdexcept>
#include <string>

namespace carenet {

// Input/validation failures: bad files, dangling references, out-of-range
// parameters. The CLI maps these to exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Everything else that goes wrong at run time maps to exit code 3.
struct RuntimeError : std::runtime_error {
    explicit RuntimeError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace carenet
