#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "floquet/symbol.hpp"
#include "floquet/types.hpp"

namespace floquet {

enum class MatrixKind { toeplitz, circulant, capacitance1d, chain, ssh, dislocated, perturbed, external };

std::string to_string(MatrixKind kind);

/// Dense square complex matrix plus structural metadata. Immutable.
///
/// A `hermitian` flag of true is verified at construction (entrywise to 1e-12).
class FiniteMatrix {
 public:
  FiniteMatrix(CMatrix data, int k, MatrixKind kind, bool hermitian, std::string provenance);

  const CMatrix& data() const { return data_; }
  int k() const { return k_; }
  MatrixKind kind() const { return kind_; }
  bool hermitian() const { return hermitian_; }
  const std::string& provenance() const { return provenance_; }
  Eigen::Index size() const { return data_.rows(); }

 private:
  CMatrix data_;
  int k_;
  MatrixKind kind_;
  bool hermitian_;
  std::string provenance_;
};

/// Largest entrywise |M - M^*|.
double hermitian_defect(const CMatrix& m);

/// T_{mk}(f): block (i, j) = a_{i-j}.
FiniteMatrix toeplitz_matrix(const Symbol& sym, int m);

/// C_{mk}(f) with wrapped blocks. Requires m > 2 * support radius.
FiniteMatrix circulant_matrix(const Symbol& sym, int m);

/// Tridiagonal Toeplitz (a0 on the diagonal, a1 above, am1 below) whose corner
/// entries are a0 + am1 (top-left) and a0 + a1 (bottom-right).
FiniteMatrix capacitance_1d(double a0, double a1, double am1, int m);

/// Nearest-neighbour capacitance chain: off-diagonal -1/s_i, diagonal
/// 1/s_{i-1} + 1/s_i. Zero row sums.
FiniteMatrix chain_capacitance(const std::vector<double>& spacings);

/// Alternating spacing sequence of `dimers` dimers: intra, inter, intra, ..., intra.
std::vector<double> dimer_spacings(double intra, double inter, int dimers);

struct SshParameters {
  double alpha_tilde = 1.0;  // edge diagonal
  double alpha = 1.5;        // bulk diagonal
  double eta = 1.0;          // defect diagonal
  double beta1 = -1.0;       // coupling at the chain edges
  double beta2 = -0.5;       // coupling adjacent to the defect

  /// Parameters of the capacitance chain with spacings intra, inter, ...,
  /// inter | inter, ..., inter, intra (the inter spacing repeated at the defect).
  static SshParameters from_spacings(double intra, double inter);
};

/// (4m+1) x (4m+1) SSH matrix with a mirror-symmetric defect at index 2m+1
/// (1-based). Couplings alternate beta1, beta2 from each edge towards the
/// defect, which is flanked by beta2 on both sides.
FiniteMatrix ssh_matrix(const SshParameters& p, int m);

/// Spacing sequence of a chain of 2 * dimers_per_side dimers whose intra-dimer
/// spacing in dimer number `dimers_per_side` (1-based) is stretched to d.
std::vector<double> dislocated_spacings(double s1, double s2, double d, int dimers_per_side);
FiniteMatrix dislocated_chain(double s1, double s2, double d, int dimers_per_side);

/// B C with B = diag(1, ..., 1 + delta, ..., 1), plus the similar Hermitian
/// form B^{1/2} C B^{1/2} used for eigensolving.
struct PerturbedMatrix {
  FiniteMatrix product;
  FiniteMatrix symmetrized;
  RVector weights;  // diagonal of B
  int index = 0;    // 1-based
  double delta = 0.0;

  /// Maps an eigenvector w of the symmetrized form to the eigenvector
  /// B^{1/2} w / ||B^{1/2} w|| of B C.
  CVector to_product_eigenvector(const CVector& w) const;
};

/// index is 1-based; requires 1 + delta > 0 and a Hermitian C.
PerturbedMatrix compact_perturbation(const FiniteMatrix& c, int index, double delta);

/// Default defect position ceil(n / 2), 1-based.
int center_index(Eigen::Index n);

// ---------------------------------------------------------------------------
// Matrix files
// ---------------------------------------------------------------------------

/// Reads CSV (one row per line; complex entries as `re+imj`) or, for paths
/// ending in .json, {"re": [[..]], "im": [[..]]}. kind = external and the
/// hermitian flag is measured.
FiniteMatrix load_matrix(const std::string& path, int k = 1);
FiniteMatrix parse_matrix_csv(const std::string& text, int k = 1);
FiniteMatrix parse_matrix_json(const std::string& text, int k = 1);

/// Writes with 17 significant digits so that a load round-trips exactly.
void write_matrix_csv(std::ostream& os, const CMatrix& m);
std::string matrix_to_json(const CMatrix& m);
void save_matrix(const std::string& path, const CMatrix& m);

/// Parses one CSV cell: `x`, `x+yj`, `x-yj` or `yj`.
Complex parse_complex(const std::string& cell);

}  // namespace floquet
