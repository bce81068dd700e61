#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "floquet/types.hpp"

namespace floquet {

/// Decay descriptor for symbols whose Fourier series is infinite and has
/// been truncated. Used only for error reporting.
struct TailModel {
  enum class Kind { power, geometric };
  Kind kind = Kind::geometric;
  /// power: ||a_s|| <= constant * |s|^-rate.  geometric: ||a_s|| <= constant * rate^|s|.
  double rate = 0.5;
  double constant = 1.0;

  /// Upper bound on sum_{|s|>r} ||a_s|| implied by the model.
  double tail_bound(int r) const;
};

/// Matrix symbol f(z) = sum_s a_s z^s with k x k Fourier coefficient blocks.
///
/// Only Hermitian symbols are representable: construction rejects supports
/// that are not symmetric and blocks with a_{-s} != a_s^*.
class Symbol {
 public:
  using Coefficients = std::map<int, CMatrix>;

  Symbol(int k, Coefficients coeffs, std::optional<TailModel> tail = std::nullopt);

  /// Builds the symbol from the blocks a_s with s >= 0; a_{-s} is filled in
  /// as the conjugate transpose. a_0 must be Hermitian.
  static Symbol from_nonnegative(int k, const Coefficients& nonnegative,
                                 std::optional<TailModel> tail = std::nullopt);

  int k() const { return k_; }
  const Coefficients& coefficients() const { return coeffs_; }
  /// Largest |s| with a stored block (0 for an empty or constant symbol).
  int support_radius() const;
  const std::optional<TailModel>& tail_model() const { return tail_; }

  /// a_s, or the zero block outside the support.
  CMatrix block(int s) const;

  /// f(e^{i alpha}) = sum_s a_s e^{i alpha s}.
  CMatrix evaluate(double alpha) const;

 private:
  int k_;
  Coefficients coeffs_;
  std::optional<TailModel> tail_;
};

/// Scalar nearest-neighbour symbol a0 + a1 (z + 1/z).
Symbol monomer_symbol(double a0, double a1);

/// Symbol of an alternating-spacing dimer chain with nearest-neighbour
/// capacitance coupling -1/spacing. The cell is (left, right) resonator with
/// intra-cell spacing `intra` and inter-cell spacing `inter`.
Symbol dimer_chain_symbol(double intra, double inter);

/// f(z) = sum_p -2^{-|p|} z^p truncated at the smallest radius whose tail
/// bound falls below `tail_tolerance`.
Symbol exponential_symbol(double tail_tolerance = 1e-10);

/// Same series truncated at an explicit radius.
Symbol exponential_symbol_truncated(int radius);

/// f^{[r]}: drops every block with |s| > r.
Symbol banded_truncation(const Symbol& sym, int r);

/// Max over `samples` equispaced alpha of the spectral norm of f(e^{i alpha}).
/// A lower bound on ||f||_inf that converges as samples grows.
double symbol_sup_norm(const Symbol& sym, int samples);

/// Sampled sup norm of f - g (both symbols must share k).
double symbol_distance_sup(const Symbol& f, const Symbol& g, int samples);

// ---------------------------------------------------------------------------
// Band functions
// ---------------------------------------------------------------------------

struct BandStructure {
  int k = 0;
  /// Quasiperiodicities of the discretised Brillouin zone, ascending in [-pi, pi).
  std::vector<double> grid;
  /// values(p, j) = lambda_{p+1}(alpha_j), ascending in p at each j.
  Eigen::MatrixXd values;
  /// derivatives(p, j) = lambda_{p+1}'(alpha_j) by finite differences.
  Eigen::MatrixXd derivatives;
  /// vectors[j].col(p) = polarized unit eigenvector u_{p+1}(alpha_j).
  std::vector<CMatrix> vectors;

  int grid_size() const { return static_cast<int>(grid.size()); }
  double band_min(int p) const { return values.row(p).minCoeff(); }
  double band_max(int p) const { return values.row(p).maxCoeff(); }

  /// lambda_p at an arbitrary alpha by periodic piecewise-linear interpolation.
  double interpolate(int p, double alpha) const;
};

/// Samples f(e^{i alpha}) on Y*_m, diagonalizes, sorts and polarizes.
/// Throws std::invalid_argument when m < 2 or a sample is not Hermitian.
BandStructure band_functions(const Symbol& sym, int m);

struct AssumptionReport {
  bool bands_disjoint = true;
  bool no_van_hove = true;
  bool hermitian = true;
  /// Smallest separation min(lambda_{p+1}) - max(lambda_p); +inf for k = 1.
  double min_band_separation = 0.0;
  /// Smallest |lambda_p'| over the interior grid (alpha not in {0, -pi}).
  double min_interior_derivative = 0.0;
  double max_hermitian_defect = 0.0;

  bool all_passed() const { return bands_disjoint && no_van_hove && hermitian; }
};

/// Checks no crossings, no van Hove points away from 0 and pi, and Hermitian
/// samples. `van_hove_tol` bounds |lambda'| from below; crossings use 1e-8.
/// The symbol is needed for the Hermitian check and may be omitted.
AssumptionReport check_assumptions(const BandStructure& bs, double van_hove_tol = 1e-6,
                                   const Symbol* sym = nullptr);

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Parses {"k": int, "coeffs": [{"s": int, "re": [[..]], "im": [[..]]}]}.
/// "im" may be omitted for real blocks. Throws std::runtime_error.
Symbol symbol_from_json(const std::string& text);
std::string symbol_to_json(const Symbol& sym);
Symbol load_symbol(const std::string& path);

/// CSV with header `alpha,band_index,lambda,dlambda`; band_index is 1-based.
void write_bands_csv(std::ostream& os, const BandStructure& bs);

}  // namespace floquet
