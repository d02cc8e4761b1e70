#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace betheasep {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Base class for every error this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrix : Error { using Error::Error; };
struct DegenerateLeadingCoefficient : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct SingularJacobian : Error { using Error::Error; };
struct InvalidDimensions : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct InvalidHoppingRate : Error { using Error::Error; };
struct DegenerateSector : Error { using Error::Error; };
struct AmplitudeSingularity : Error { using Error::Error; };
struct ZeroVector : Error { using Error::Error; };
struct ZeroComponent : Error { using Error::Error; };
struct IdentityViolation : Error { using Error::Error; };
struct InvolutionBroken : Error { using Error::Error; };
struct PathLost : Error { using Error::Error; };
struct ChainDegenerate : Error { using Error::Error; };
struct ClusterTooLarge : Error { using Error::Error; };

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline bool is_finite(const ComplexVector& v) {
  for (Complex z : v)
    if (!is_finite(z)) return false;
  return true;
}

}  // namespace betheasep
