#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kising {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
inline constexpr Real pi_v = std::numbers::pi_v<Real>;

/// Raised when a structural residual (unitarity, block leakage, ...) exceeds
/// its tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual, double tolerance)
      : std::runtime_error(what + " (residual " + std::to_string(residual) +
                           ", tolerance " + std::to_string(tolerance) + ")"),
        residual_(residual),
        tolerance_(tolerance) {}

  double residual() const noexcept { return residual_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  double residual_;
  double tolerance_;
};

/// Wraps an angle into (-pi, pi].
template <typename Real>
Real wrap_angle(Real theta) {
  using std::remainder;
  Real r = remainder(theta, 2 * pi_v<Real>);
  if (r <= -pi_v<Real>) r += 2 * pi_v<Real>;
  return r;
}

/// i^p for integer p.
template <typename Real>
Complex<Real> i_pow(long long p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

}  // namespace kising
