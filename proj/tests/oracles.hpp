#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's numerical routines.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
inline constexpr double pi = std::numbers::pi;

// out_j = m^{-1/2} sum_s v_s exp(-2 pi i j s / m), double loop.
inline CVector direct_dft(const CVector& v) {
  const auto m = v.size();
  CVector out(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    Complex acc = 0.0;
    for (Eigen::Index s = 0; s < m; ++s) acc += v(s) * std::exp(Complex(0.0, -2.0 * pi * double(j * s) / double(m)));
    out(j) = acc / std::sqrt(double(m));
  }
  return out;
}

// alpha of DFT bin j on the shifted grid.
inline double bin_alpha(int j, int m) {
  const int w = j < m - m / 2 ? j : j - m;
  return 2.0 * pi * w / m;
}

// sum_j |alpha_j| ||T^j u||^2 / ||u||^2 by explicit sectioning and direct DFT.
inline double quasiperiodicity(const CVector& u_in, int k) {
  CVector u = u_in;
  if (u.size() % k) {
    CVector p = CVector::Zero(u.size() + k - u.size() % k);
    p.head(u.size()) = u;
    u = p;
  }
  const int m = static_cast<int>(u.size() / k);
  std::vector<double> w(m, 0.0);
  for (int p = 0; p < k; ++p) {
    CVector sec(m);
    for (int s = 0; s < m; ++s) sec(s) = u(p + s * k);
    const CVector f = direct_dft(sec);
    for (int j = 0; j < m; ++j) w[j] += std::norm(f(j));
  }
  double num = 0.0, den = 0.0;
  for (int j = 0; j < m; ++j) {
    num += std::abs(bin_alpha(j, m)) * w[j];
    den += w[j];
  }
  return num / den;
}

// Eigenvalues of a 2x2 Hermitian matrix, ascending.
inline std::pair<double, double> eig2(const CMatrix& a) {
  const double p = 0.5 * (a(0, 0).real() + a(1, 1).real());
  const double q = 0.5 * (a(0, 0).real() - a(1, 1).real());
  const double r = std::sqrt(q * q + std::norm(a(0, 1)));
  return {p - r, p + r};
}

// Bands of the dimer chain with intra spacing s1 and inter spacing s2:
// (1/s1 + 1/s2) -+ |1/s1 + e^{i alpha}/s2|.
inline std::pair<double, double> dimer_bands(double s1, double s2, double alpha) {
  const double c = 1.0 / s1 + 1.0 / s2;
  const double r = std::abs(Complex(1.0 / s1) + std::polar(1.0 / s2, alpha));
  return {c - r, c + r};
}

// Gap of the dimer bands: (c - |1/s1 - 1/s2|, c + |1/s1 - 1/s2|).
inline std::pair<double, double> dimer_gap(double s1, double s2) {
  const double c = 1.0 / s1 + 1.0 / s2, h = std::abs(1.0 / s1 - 1.0 / s2);
  return {c - h, c + h};
}

// sum_p -2^{-|p|} e^{i p alpha} = -(3/4) / (5/4 - cos alpha) (Poisson kernel at r = 1/2).
inline double exponential_band(double alpha) { return -0.75 / (1.25 - std::cos(alpha)); }

// sum_{|p| > r} 2^{-|p|} = 2^{1-r}.
inline double geometric_tail(int r) { return std::ldexp(1.0, 1 - r); }

// max over `samples` points of |sum_{|p|<=radius} -2^{-|p|} e^{i p alpha}| by direct summation.
inline double exponential_sup_bruteforce(int radius, int samples) {
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double a = -pi + 2.0 * pi * i / samples;
    double f = -1.0;
    for (int p = 1; p <= radius; ++p) f -= 2.0 * std::ldexp(1.0, -p) * std::cos(p * a);
    best = std::max(best, std::abs(f));
  }
  return best;
}

// Eigenpair s (1-based) of tridiag(a1, a0, a1) of order m.
inline double tridiagonal_value(double a0, double a1, int m, int s) { return a0 + 2.0 * a1 * std::cos(s * pi / (m + 1)); }
inline Eigen::VectorXd tridiagonal_vector(int m, int s) {
  Eigen::VectorXd v(m);
  for (int q = 1; q <= m; ++q) v(q - 1) = std::sin(q * s * pi / (m + 1));
  return v / v.norm();
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline CVector random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (auto& x : v) x = Complex(g(rng), g(rng));
  return v;
}

inline CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  CMatrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) a.col(j) = random_vector(n, rng);
  return 0.5 * (a + a.adjoint());
}

inline CMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  CMatrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) a.col(j) = random_vector(n, rng);
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ() * CMatrix::Identity(n, n);
}

}  // namespace oracle
