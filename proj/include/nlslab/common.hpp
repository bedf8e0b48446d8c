#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nlslab {

using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846264338327950288;

// Error taxonomy. Every precondition violation throws one of these; the C API
// maps them onto stable integer codes.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad argument values (wrong range, wrong kind, malformed input).
struct domain_error : error {
    using error::error;
};

// A grid cannot represent the requested object (support escapes the box,
// chirp exceeds the sampling criterion, dilation would alias).
struct resolution_error : error {
    using error::error;
};

// An iterative procedure failed to settle (quadrature refinement, ratio
// convergence, degenerate fits).
struct convergence_error : error {
    using error::error;
};

// File and serialization failures.
struct io_error : error {
    using error::error;
};

}  // namespace nlslab
