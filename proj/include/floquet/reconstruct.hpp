#pragma once

#include <optional>
#include <string>
#include <vector>

#include "floquet/matrices.hpp"
#include "floquet/spectra.hpp"
#include "floquet/symbol.hpp"

namespace floquet {

/// One eigenpair mapped to (quasiperiodicity, eigenvalue) with diagnostics.
struct ReconstructionPoint {
  int index = 0;             // position in the ascending spectrum, 0-based
  double alpha_est = 0.0;    // Q_m(u) in [0, pi]
  double lambda = 0.0;
  double sup_ratio = 0.0;
  double ipr = 0.0;
  bool localized = false;
  std::optional<double> band_error;
};

struct ReconstructOptions {
  /// Eigenvectors with ipr above this multiple of the median ipr are localized.
  double ipr_factor = 10.0;
  /// Worker threads for the per-eigenvector transforms; output is independent of it.
  int jobs = 1;
};

/// Q_m and localization metrics for every eigenpair of an already computed
/// decomposition, sorted by eigenvalue. Eigenvectors are zero-padded to a
/// multiple of k.
std::vector<ReconstructionPoint> reconstruct_from_eigen(const EigenDecomposition& eig, int k,
                                                        const ReconstructOptions& opt = {});

std::vector<ReconstructionPoint> reconstruct_bands(const FiniteMatrix& m, int k,
                                                   const ReconstructOptions& opt = {});
std::vector<ReconstructionPoint> reconstruct_bands(const PerturbedMatrix& m, int k,
                                                   const ReconstructOptions& opt = {});

struct ErrorStats {
  int count = 0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double q90 = 0.0;
};

struct ComparisonReport {
  ErrorStats delocalized;  // every non-localized point
  ErrorStats bulk;         // non-localized points away from alpha in {0, pi}
  ErrorStats localized;
  double edge_exclusion = 0.0;
};

/// Width of the band-edge exclusion zone, 2 pi * 4 / cells.
double edge_exclusion_width(int cells);

/// Sets band_error = min_p |lambda - lambda_p(alpha_est)| on every point and
/// returns statistics. `cells` sets the edge exclusion. Throws on empty input.
ComparisonReport compare_to_symbol(std::vector<ReconstructionPoint>& points,
                                   const BandStructure& bs, int cells);

struct GapMode {
  int index = 0;
  double lambda = 0.0;
  double alpha_est = 0.0;
};

struct GapReport {
  std::vector<std::pair<double, double>> gaps;  // open intervals, sorted
  std::vector<GapMode> gap_modes;
};

/// Gaps between the ranges of consecutive bands, shrunk by `margin` on each
/// side, and the eigenvalues strictly inside them. alpha_est is filled from
/// `points` when given.
GapReport detect_gaps(const BandStructure& bs, const RVector& eigenvalues, double margin,
                      const std::vector<ReconstructionPoint>* points = nullptr);

/// Default margin 1e-6 * (spread of all bands).
double default_gap_margin(const BandStructure& bs);

/// Closed-form eigenpairs of the symmetric tridiagonal Toeplitz matrix T_m
/// (a0 on the diagonal, a1 off it): a0 + 2 a1 cos(s pi/(m+1)) and normalized
/// sines sin(q s pi/(m+1)), s = 1..m. Sorted ascending.
EigenDecomposition tridiagonal_eigenpairs_oracle(double a0, double a1, int m);

/// Prepends the implicit Dirichlet boundary zero: (0, u_1, ..., u_n).
CVector dirichlet_extension(const CVector& u);

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

enum class Scenario { periodic_nn, periodic_symbol, ssh, dislocated, compact_defect, external_matrix };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);

struct ScenarioConfig {
  Scenario scenario = Scenario::periodic_nn;
  /// Cells (periodic), dimers per side (ssh, dislocated) or dimers (compact_defect).
  std::optional<int> m;
  /// periodic_nn / periodic_symbol finite section: "capacitance", "toeplitz" or "circulant".
  std::string variant;
  // periodic_nn couplings
  double a0 = 2.0;
  double a1 = -1.0;
  double am1 = -1.0;
  // periodic_symbol: inline JSON, file path, or a named symbol (monomer, dimer, exponential).
  std::string symbol;
  // dimer geometry shared by ssh / dislocated / compact_defect
  double s1 = 1.0;
  double s2 = 2.0;
  double d = 4.0;
  double delta = 0.5;
  std::optional<int> defect_index;  // 1-based; default ceil(n/2)
  std::optional<SshParameters> ssh;  // explicit SSH entries; default derived from s1, s2
  // external_matrix
  std::string matrix_path;
  std::string reference_symbol;  // optional symbol for the external case
  std::optional<int> k;
  int grid = 512;
  std::optional<double> gap_margin;
  ReconstructOptions reconstruct;
};

/// Inline JSON (text starting with '{'), a named symbol (monomer, dimer,
/// exponential) or a path to a symbol JSON file.
Symbol resolve_symbol(const std::string& spec);

/// Periodic dimer symbol whose finite sections have bulk diagonal alpha,
/// intra coupling beta1 and inter coupling beta2.
Symbol ssh_bulk_symbol(const SshParameters& p);

/// Parses {"scenario": "...", ...} with keys named after the ScenarioConfig
/// fields; unknown keys are rejected.
ScenarioConfig scenario_config_from_json(const std::string& text);

struct ScenarioBundle {
  ScenarioConfig config;
  std::string provenance;
  Eigen::Index dimension = 0;
  int k = 1;
  int cells = 0;
  std::optional<BandStructure> bands;
  EigenDecomposition eigen;
  std::vector<ReconstructionPoint> points;
  std::optional<ComparisonReport> comparison;
  GapReport gaps;
  double gap_margin = 0.0;
};

/// Builds the matrix and reference bands, reconstructs, compares and detects gaps.
/// Points inside a detected gap are flagged localized in addition to the ipr rule.
ScenarioBundle run_scenario(const ScenarioConfig& config);

/// Builds a matrix from a structure descriptor such as
/// {"type": "ssh", "m": 20, "alpha": 1.5, ...}.
FiniteMatrix matrix_from_descriptor(const std::string& json_text);

// ---------------------------------------------------------------------------
// Bundle serialization
// ---------------------------------------------------------------------------

void write_points_csv(std::ostream& os, const std::vector<ReconstructionPoint>& points);
std::string gaps_to_json(const GapReport& gaps);
std::string summary_to_json(const ScenarioBundle& bundle);
std::string overlay_svg(const ScenarioBundle& bundle);

struct OutputFormats {
  bool csv = true;
  bool json = true;
  bool svg = false;
};

/// Writes points.csv, bands.csv, gaps.json, summary.json and reconstruct.svg
/// into `dir` according to `formats`.
void write_bundle(const std::string& dir, const ScenarioBundle& bundle, const OutputFormats& formats);

}  // namespace floquet
