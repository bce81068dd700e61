#pragma once

#include <vector>

#include "floquet/types.hpp"

namespace floquet {

/// Discretised Brillouin zone Y*_m: alpha_j = 2 pi j / m for
/// j = -floor(m/2), ..., m - 1 - floor(m/2), ascending.
struct BrillouinSample {
  int m = 0;
  std::vector<double> alphas;
};

BrillouinSample brillouin_zone(int m);

/// Quasiperiodicity of DFT bin j (any integer, taken modulo m).
double bin_alpha(int j, int m);

/// Unitary DFT: out_j = m^{-1/2} sum_s v_s e^{-2 pi i j s / m}.
CVector dft(const CVector& v);

/// The k sections Phi_1(u), ..., Phi_k(u); section p holds u_p, u_{p+k}, ...
struct SectionedVector {
  std::vector<CVector> sections;

  int k() const { return static_cast<int>(sections.size()); }
  int m() const { return sections.empty() ? 0 : static_cast<int>(sections.front().size()); }
  double squared_norm() const;
};

/// Throws std::invalid_argument when u.size() is not a multiple of k.
SectionedVector sections(const CVector& u, int k);

/// Appends zeros until the length is a multiple of k.
CVector zero_pad(const CVector& u, int k);

/// Truncated Floquet-Bloch transform: section-wise DFT.
SectionedVector tfbt(const CVector& u, int k);

/// T^j(u): the j-th bin of every section (j modulo m).
CVector tfb_projection(const CVector& u, int k, int j);
CVector tfb_projection(const SectionedVector& transformed, int j);

/// ||T^j(u)||^2 for j = 0, ..., m-1 (natural DFT bin order).
std::vector<double> projection_profile(const CVector& u, int k);

/// QP_m(cell, e^{i alpha}) = m^{-1/2} (cell, e^{i alpha} cell, ..., e^{i alpha (m-1)} cell).
CVector quasiperiodic_extension(const CVector& cell, double alpha, int m);

/// Q_m(u) = sum_j |alpha_j| ||T^j(u)||^2.
///
/// u must be unit length to within 1e-8 and is renormalized before use;
/// otherwise std::invalid_argument. Callers pad with zero_pad first.
double discrete_quasiperiodicity(const CVector& u, int k);

/// Same weighted average taken over a precomputed profile (sum normalized).
double quasiperiodicity_from_profile(const std::vector<double>& profile);

}  // namespace floquet
