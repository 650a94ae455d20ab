#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace clf {

using cplx = std::complex<double>;

// The library works in C^2; every geometric routine assumes this size.
inline constexpr int kDim = 2;
inline constexpr int kRealDim = 2 * kDim;

using CVec = Eigen::Matrix<cplx, kDim, 1>;
using CMat = Eigen::Matrix<cplx, kDim, kDim>;
using RVec = Eigen::Matrix<double, kRealDim, 1>;
using RMat = Eigen::Matrix<double, kRealDim, kRealDim>;

inline constexpr double kPi = 3.14159265358979323846;

/// Bilinear action <a, u> = sum_k a_k u_k (no conjugation).
inline cplx pairing(const CVec& a, const CVec& u) {
  cplx s = 0.0;
  for (int k = 0; k < kDim; ++k) s += a[k] * u[k];
  return s;
}

/// Hermitian product a^* u.
inline cplx hdot(const CVec& a, const CVec& u) {
  cplx s = 0.0;
  for (int k = 0; k < kDim; ++k) s += std::conj(a[k]) * u[k];
  return s;
}

/// Real Euclidean inner product of two vectors of C^n viewed in R^{2n}.
inline double rdot(const CVec& a, const CVec& b) { return hdot(a, b).real(); }

/// z^m for integer m, by repeated squaring.
inline cplx ipow(cplx z, int m) {
  if (m < 0) return 1.0 / ipow(z, -m);
  cplx result = 1.0;
  while (m > 0) {
    if (m & 1) result *= z;
    z *= z;
    m >>= 1;
  }
  return result;
}

inline RVec to_real(const CVec& z) {
  RVec x;
  for (int k = 0; k < kDim; ++k) {
    x[2 * k] = z[k].real();
    x[2 * k + 1] = z[k].imag();
  }
  return x;
}

inline CVec to_complex(const RVec& x) {
  CVec z;
  for (int k = 0; k < kDim; ++k) z[k] = cplx(x[2 * k], x[2 * k + 1]);
  return z;
}

// Error taxonomy. Every failure mode named by the operations is a distinct type
// so callers can react to, e.g., a too-coarse grid differently from a geometry bug.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonConvexShell : Error { using Error::Error; };
struct RootNotBracketed : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct DegenerateGradient : Error { using Error::Error; };
struct SingularPairing : Error { using Error::Error; };
struct TooCloseToBoundary : Error { using Error::Error; };
struct ResolutionTooCoarse : Error { using Error::Error; };
struct EmptyRegion : Error { using Error::Error; };
struct InsufficientSeparation : Error { using Error::Error; };
struct ResolutionBudgetExceeded : Error { using Error::Error; };
struct ZeroDenominator : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct CacheCorruption : Error { using Error::Error; };

}  // namespace clf
