#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>

#include <Eigen/Dense>

namespace floquet {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Maps an angle onto [-pi, pi).
inline double wrap_angle(double a) {
  double w = std::fmod(a + kPi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w - kPi;
}

// Rotates the global phase of `v` so that a reference component becomes real
// and positive. The reference is component 0 unless its magnitude is below
// `threshold`, in which case the largest-magnitude component is used.
void polarize(Eigen::Ref<CVector> v, double threshold = 1e-8);

}  // namespace floquet
