#pragma once

#include <stdexcept>

namespace sampler {

struct DegenerateMaskError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConvergentCascadeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EigenSolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DensityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sampler
