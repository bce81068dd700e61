#include "fft.hpp"

#include <utility>
#include <vector>

namespace floquet::detail {

namespace {

constexpr Eigen::Index kDirectLimit = 64;

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative Cooley-Tukey. sign = -1 forward, +1 inverse (unnormalized).
void radix2(CVector& x, int sign) {
  const Eigen::Index n = x.size();
  for (Eigen::Index i = 1, j = 0; i < n; ++i) {
    Eigen::Index bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x(i), x(j));
  }
  for (Eigen::Index len = 2; len <= n; len <<= 1) {
    const Eigen::Index half = len / 2;
    std::vector<Complex> tw(half);
    for (Eigen::Index t = 0; t < half; ++t)
      tw[t] = std::polar(1.0, sign * kTwoPi * static_cast<double>(t) / static_cast<double>(len));
    for (Eigen::Index i = 0; i < n; i += len) {
      for (Eigen::Index t = 0; t < half; ++t) {
        const Complex u = x(i + t);
        const Complex v = x(i + t + half) * tw[t];
        x(i + t) = u + v;
        x(i + t + half) = u - v;
      }
    }
  }
}

void bluestein(CVector& x) {
  const Eigen::Index n = x.size();
  Eigen::Index len = 1;
  while (len < 2 * n - 1) len <<= 1;
  // chirp_s = e^{-i pi s^2 / n}; s^2 reduced mod 2n keeps the angle accurate.
  std::vector<Complex> chirp(n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const long long sq = (static_cast<long long>(s) * s) % (2 * static_cast<long long>(n));
    chirp[s] = std::polar(1.0, -kPi * static_cast<double>(sq) / static_cast<double>(n));
  }
  CVector a = CVector::Zero(len), b = CVector::Zero(len);
  for (Eigen::Index s = 0; s < n; ++s) a(s) = x(s) * chirp[s];
  b(0) = std::conj(chirp[0]);
  for (Eigen::Index s = 1; s < n; ++s) b(s) = b(len - s) = std::conj(chirp[s]);
  radix2(a, -1);
  radix2(b, -1);
  a = a.cwiseProduct(b);
  radix2(a, +1);
  const double inv = 1.0 / static_cast<double>(len);
  for (Eigen::Index j = 0; j < n; ++j) x(j) = a(j) * inv * chirp[j];
}

}  // namespace

void dft_direct(CVector& x) {
  const Eigen::Index n = x.size();
  std::vector<Complex> tw(n);
  for (Eigen::Index t = 0; t < n; ++t)
    tw[t] = std::polar(1.0, -kTwoPi * static_cast<double>(t) / static_cast<double>(n));
  CVector out = CVector::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Complex acc = 0.0;
    for (Eigen::Index s = 0; s < n; ++s) acc += x(s) * tw[(j * s) % n];
    out(j) = acc;
  }
  x = std::move(out);
}

void fft_unnormalized(CVector& x) {
  const Eigen::Index n = x.size();
  if (n <= 1) return;
  if (is_power_of_two(n))
    radix2(x, -1);
  else if (n <= kDirectLimit)
    dft_direct(x);
  else
    bluestein(x);
}

}  // namespace floquet::detail
