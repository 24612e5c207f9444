#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace c2f {

inline constexpr int kFormatVersion = 1;

// Error taxonomy. The CLI maps these onto exit codes:
//   usage 1, data 2, missing prerequisite 3, divergence 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent on-disk data (sidecar, payload, checkpoint).
struct FormatError : Error {
    using Error::Error;
};

// Invalid argument or precondition violation on an operation.
struct ParameterError : Error {
    using Error::Error;
};

// A requested class has no voxels anywhere in the corpus.
struct MissingClassError : Error {
    int class_id;
    explicit MissingClassError(int n)
        : Error("class " + std::to_string(n) + " absent"), class_id(n) {}
};

// Bad run configuration (unresolvable paths, inconsistent grids, ...).
struct ConfigError : Error {
    using Error::Error;
};

// A pipeline stage was invoked before the stage it depends on.
struct PrerequisiteError : Error {
    using Error::Error;
};

// Non-finite loss during training.
struct DivergenceError : Error {
    using Error::Error;
};

}  // namespace c2f
