#include "floquet/transform.hpp"

#include <cmath>
#include <stdexcept>

#include "fft.hpp"

namespace floquet {

BrillouinSample brillouin_zone(int m) {
  if (m < 1) throw std::invalid_argument("Brillouin zone size must be positive");
  BrillouinSample y;
  y.m = m;
  y.alphas.reserve(m);
  for (int j = -(m / 2); j <= m - 1 - m / 2; ++j) y.alphas.push_back(kTwoPi * j / m);
  return y;
}

double bin_alpha(int j, int m) {
  if (m < 1) throw std::invalid_argument("bin_alpha: m must be positive");
  int r = j % m;
  if (r < 0) r += m;
  const int wrapped = r < m - m / 2 ? r : r - m;
  return kTwoPi * wrapped / m;
}

CVector dft(const CVector& v) {
  if (v.size() == 0) throw std::invalid_argument("dft of an empty vector");
  CVector out = v;
  detail::fft_unnormalized(out);
  out /= std::sqrt(static_cast<double>(v.size()));
  return out;
}

double SectionedVector::squared_norm() const {
  double acc = 0.0;
  for (const auto& s : sections) acc += s.squaredNorm();
  return acc;
}

SectionedVector sections(const CVector& u, int k) {
  if (k < 1) throw std::invalid_argument("block size must be positive");
  if (u.size() % k != 0)
    throw std::invalid_argument("vector length " + std::to_string(u.size()) +
                                " is not a multiple of block size " + std::to_string(k));
  const Eigen::Index m = u.size() / k;
  SectionedVector out;
  out.sections.assign(k, CVector(m));
  for (Eigen::Index s = 0; s < m; ++s)
    for (int p = 0; p < k; ++p) out.sections[p](s) = u(p + s * k);
  return out;
}

CVector zero_pad(const CVector& u, int k) {
  if (k < 1) throw std::invalid_argument("block size must be positive");
  const Eigen::Index rem = u.size() % k;
  if (rem == 0) return u;
  CVector out = CVector::Zero(u.size() + (k - rem));
  out.head(u.size()) = u;
  return out;
}

SectionedVector tfbt(const CVector& u, int k) {
  SectionedVector out = sections(u, k);
  for (auto& s : out.sections) s = dft(s);
  return out;
}

CVector tfb_projection(const SectionedVector& transformed, int j) {
  const int m = transformed.m();
  if (m == 0) throw std::invalid_argument("projection of an empty transform");
  int r = j % m;
  if (r < 0) r += m;
  CVector out(transformed.k());
  for (int p = 0; p < transformed.k(); ++p) out(p) = transformed.sections[p](r);
  return out;
}

CVector tfb_projection(const CVector& u, int k, int j) { return tfb_projection(tfbt(u, k), j); }

std::vector<double> projection_profile(const CVector& u, int k) {
  const SectionedVector t = tfbt(u, k);
  std::vector<double> profile(t.m(), 0.0);
  for (const auto& s : t.sections)
    for (int j = 0; j < t.m(); ++j) profile[j] += std::norm(s(j));
  return profile;
}

CVector quasiperiodic_extension(const CVector& cell, double alpha, int m) {
  if (m < 1) throw std::invalid_argument("quasiperiodic extension needs m >= 1");
  const Eigen::Index k = cell.size();
  CVector out(m * k);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (int n = 0; n < m; ++n) out.segment(n * k, k) = cell * (std::polar(scale, alpha * n));
  return out;
}

double quasiperiodicity_from_profile(const std::vector<double>& profile) {
  const int m = static_cast<int>(profile.size());
  double weighted = 0.0, total = 0.0;
  for (int j = 0; j < m; ++j) {
    weighted += std::abs(bin_alpha(j, m)) * profile[j];
    total += profile[j];
  }
  if (total <= 0.0) throw std::invalid_argument("quasiperiodicity of a zero vector");
  return weighted / total;
}

double discrete_quasiperiodicity(const CVector& u, int k) {
  const double norm = u.norm();
  if (std::abs(norm - 1.0) > 1e-8)
    throw std::invalid_argument("discrete_quasiperiodicity expects a unit vector");
  const CVector unit = u / norm;
  return quasiperiodicity_from_profile(projection_profile(unit, k));
}

}  // namespace floquet
