#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace floquet {

/// Per-run settings handed to every check.
struct CheckContext {
  std::uint64_t seed = 20240601;
  /// Multiplies every numeric tolerance. 0 turns each tolerance into an exact test.
  double tolerance_scale = 1.0;

  double tol(double t) const { return t * tolerance_scale; }
  /// Generator seeded from the run seed and the check name.
  std::mt19937_64 rng(const std::string& salt) const;
};

struct CheckOutcome {
  bool passed = false;
  std::string detail;
};

struct Check {
  std::string group;  // symbol, matrices, transform, spectra, reconstruct, cli, acceptance
  std::string name;
  std::function<CheckOutcome(const CheckContext&)> run;
};

/// Every invariant and acceptance check, in a fixed order.
const std::vector<Check>& verification_checks();

struct CheckRecord {
  std::string group;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the checks whose group is listed in `only` (all when empty). A check
/// that throws is recorded as failed.
std::vector<CheckRecord> run_checks(const CheckContext& ctx, const std::vector<std::string>& only = {});

/// One line per check: status, group, name, time, detail.
void print_check_table(std::ostream& os, const std::vector<CheckRecord>& records);

}  // namespace floquet
