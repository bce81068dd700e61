#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "floquet/reconstruct.hpp"
#include "floquet/transform.hpp"
#include "oracles.hpp"

using namespace floquet;

namespace {

double max_bulk_error(const ComparisonReport& r) { return r.bulk.max; }

int count_gap_modes(const ScenarioBundle& b) { return static_cast<int>(b.gaps.gap_modes.size()); }

}  // namespace

TEST_CASE("circulant spectra are reconstructed exactly") {
  for (int m : {15, 16}) {
    const FiniteMatrix c = circulant_matrix(monomer_symbol(2.0, -1.0), m);
    auto pts = reconstruct_bands(c, 1);
    REQUIRE(pts.size() == static_cast<std::size_t>(m));
    // Every DFT bin is a grid node, so no interpolation error enters.
    const auto bs = band_functions(monomer_symbol(2.0, -1.0), 4 * m);
    const auto rep = compare_to_symbol(pts, bs, m);
    for (const auto& p : pts) {
      REQUIRE(p.band_error.has_value());
      CHECK(*p.band_error < 1e-12);
      CHECK(std::abs(p.lambda - (2.0 - 2.0 * std::cos(p.alpha_est))) < 1e-12);
    }
    CHECK(rep.delocalized.count == m);
  }
}

TEST_CASE("1x1 matrix") {
  const FiniteMatrix one(CMatrix::Constant(1, 1, 5.0), 1, MatrixKind::external, true, "scalar");
  const auto pts = reconstruct_bands(one, 1);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].lambda == 5.0);
  CHECK(pts[0].alpha_est == 0.0);
  CHECK(pts[0].ipr == 1.0);
}

TEST_CASE("points follow the closed-form tridiagonal eigenpairs") {
  const int m = 4;
  const auto pts = reconstruct_bands(toeplitz_matrix(monomer_symbol(2.0, -1.0), m), 1);
  std::vector<std::pair<double, double>> expect;
  for (int s = 1; s <= m; ++s) {
    const Eigen::VectorXd v = oracle::tridiagonal_vector(m, s);
    expect.emplace_back(oracle::tridiagonal_value(2.0, -1.0, m, s), oracle::quasiperiodicity(v.cast<Complex>(), 1));
  }
  std::sort(expect.begin(), expect.end());
  for (int i = 0; i < m; ++i) {
    CHECK(std::abs(pts[i].lambda - expect[i].first) < 1e-12);
    CHECK(std::abs(pts[i].alpha_est - expect[i].second) < 1e-12);
  }
  const auto closed = tridiagonal_eigenpairs_oracle(2.0, -1.0, m);
  for (int i = 0; i < m; ++i) {
    CHECK(std::abs(closed.values(i) - expect[i].first) < 1e-14);
    CHECK(std::abs(closed.vectors.col(i).norm() - 1.0) < 1e-14);
  }
  const CVector ext = dirichlet_extension(closed.vectors.col(0));
  CHECK(ext.size() == m + 1);
  CHECK(ext(0) == Complex(0.0));
  CHECK(ext.tail(m) == closed.vectors.col(0));
}

TEST_CASE("bulk error of the capacitance section shrinks like 1/m") {
  const Symbol f = monomer_symbol(2.0, -1.0);
  const auto bs = band_functions(f, 1024);
  double prev = 0.0;
  for (int m : {40, 80, 160}) {
    auto pts = reconstruct_bands(capacitance_1d(2.0, -1.0, -1.0, m), 1);
    const auto rep = compare_to_symbol(pts, bs, m);
    const double e = max_bulk_error(rep);
    CHECK(e < 8.0 / m);
    if (prev > 0.0) CHECK(e < 0.6 * prev);
    prev = e;
  }
}

TEST_CASE("comparison rejects empty input") {
  std::vector<ReconstructionPoint> none;
  CHECK_THROWS(compare_to_symbol(none, band_functions(monomer_symbol(2.0, -1.0), 32), 10));
  CHECK(std::abs(edge_exclusion_width(80) - kTwoPi * 4 / 80) < 1e-15);
}

TEST_CASE("gap detection") {
  const auto bs = band_functions(dimer_chain_symbol(1.0, 2.0), 512);
  const auto [lo, hi] = oracle::dimer_gap(1.0, 2.0);
  RVector ev(4);
  ev << 0.2, 0.5 * (lo + hi), lo - 1e-3, hi + 1e-3;
  const auto g = detect_gaps(bs, ev, 0.0);
  REQUIRE(g.gaps.size() == 1);
  CHECK(std::abs(g.gaps[0].first - lo) < 1e-12);
  CHECK(std::abs(g.gaps[0].second - hi) < 1e-12);
  REQUIRE(g.gap_modes.size() == 1);
  CHECK(g.gap_modes[0].index == 1);
  // A margin wider than half the gap closes it.
  CHECK(detect_gaps(bs, ev, hi - lo).gaps.empty());
  CHECK_THROWS(detect_gaps(bs, ev, -1.0));
  CHECK(detect_gaps(band_functions(monomer_symbol(2.0, -1.0), 64), ev, 0.0).gaps.empty());
  CHECK(default_gap_margin(bs) > 0.0);
  CHECK(default_gap_margin(bs) < 1e-5);
}

TEST_CASE("periodic scenario") {
  ScenarioConfig c;
  const auto b = run_scenario(c);
  CHECK(b.dimension == 80);
  CHECK(b.k == 1);
  REQUIRE(b.comparison.has_value());
  CHECK(b.gaps.gaps.empty());
  CHECK(b.comparison->bulk.count > 40);
  c.variant = "circulant";
  c.m = 32;
  CHECK(run_scenario(c).comparison->delocalized.max < 1e-12);
  c.a1 = -0.5;
  CHECK_THROWS(run_scenario(c));
}

TEST_CASE("ssh scenario finds the defect mode") {
  ScenarioConfig c;
  c.scenario = Scenario::ssh;
  const auto b = run_scenario(c);
  CHECK(b.dimension == 81);
  REQUIRE(count_gap_modes(b) == 1);
  const auto& g = b.gaps.gap_modes[0];
  const auto [lo, hi] = oracle::dimer_gap(1.0, 2.0);
  CHECK(g.lambda > lo);
  CHECK(g.lambda < hi);
  CHECK(b.points[g.index].localized);
  int localized = 0;
  for (const auto& p : b.points) localized += p.localized;
  CHECK(localized == 1);
}

TEST_CASE("dislocated scenario") {
  ScenarioConfig c;
  c.scenario = Scenario::dislocated;
  const auto b = run_scenario(c);
  CHECK(b.dimension == 40);
  CHECK(count_gap_modes(b) == 1);
  CHECK(b.points[b.gaps.gap_modes[0].index].localized);
}

TEST_CASE("compact defect scenario") {
  ScenarioConfig c;
  c.scenario = Scenario::compact_defect;
  const auto pos = run_scenario(c);
  CHECK(pos.dimension == 80);
  CHECK(count_gap_modes(pos) >= 1);
  c.delta = 0.0;
  CHECK(count_gap_modes(run_scenario(c)) == 0);
  c.delta = -1.5;
  CHECK_THROWS(run_scenario(c));
}

TEST_CASE("scenario validation") {
  ScenarioConfig c;
  c.m = 0;
  CHECK_THROWS_AS(run_scenario(c), std::invalid_argument);
  c.m = 10;
  c.grid = 8;
  CHECK_THROWS_AS(run_scenario(c), std::invalid_argument);
  c.grid = 64;
  c.k = 2;
  CHECK_THROWS_AS(run_scenario(c), std::invalid_argument);
  c = ScenarioConfig{};
  c.scenario = Scenario::periodic_symbol;
  CHECK_THROWS(run_scenario(c));
  c.scenario = Scenario::external_matrix;
  CHECK_THROWS(run_scenario(c));
  CHECK_THROWS(scenario_from_string("nope"));
  for (auto s : {Scenario::periodic_nn, Scenario::ssh, Scenario::compact_defect, Scenario::external_matrix})
    CHECK(scenario_from_string(to_string(s)) == s);
}

TEST_CASE("config json") {
  const auto c = scenario_config_from_json(R"({"scenario":"ssh","m":12,"s2":3.0,"grid":128})");
  CHECK(c.scenario == Scenario::ssh);
  CHECK(c.m == 12);
  CHECK(c.s2 == 3.0);
  CHECK(c.grid == 128);
  CHECK_THROWS_AS(scenario_config_from_json(R"({"scenario":"ssh","bogus":1})"), std::invalid_argument);
  CHECK_THROWS_AS(scenario_config_from_json("{oops"), std::invalid_argument);
}

TEST_CASE("external matrix scenario") {
  const auto path = (std::filesystem::temp_directory_path() / "floquet_test_ext.csv").string();
  save_matrix(path, ssh_matrix(SshParameters::from_spacings(1.0, 2.0), 10).data());
  ScenarioConfig c;
  c.scenario = Scenario::external_matrix;
  c.matrix_path = path;
  c.k = 2;
  const auto plain = run_scenario(c);
  CHECK(plain.dimension == 41);
  CHECK(plain.cells == 21);
  CHECK_FALSE(plain.comparison.has_value());
  c.reference_symbol = "dimer";
  const auto ref = run_scenario(c);
  CHECK(ref.comparison.has_value());
  c.k = 1;
  CHECK_THROWS(run_scenario(c));
  std::filesystem::remove(path);
}

TEST_CASE("symbols by name and descriptor matrices") {
  CHECK(resolve_symbol("monomer").k() == 1);
  CHECK(resolve_symbol("dimer").k() == 2);
  CHECK(resolve_symbol(R"({"k":1,"coeffs":[{"s":0,"re":[[1]]}]})").k() == 1);
  CHECK_THROWS(resolve_symbol("/no/such/symbol.json"));
  const SshParameters p = SshParameters::from_spacings(1.0, 2.0);
  const Symbol bulk = ssh_bulk_symbol(p);
  // The bulk symbol of the SSH parameters is the dimer chain symbol.
  for (double a : {-2.5, 0.0, 1.1}) {
    const auto [lo, hi] = oracle::dimer_bands(1.0, 2.0, a);
    const auto [l2, h2] = oracle::eig2(bulk.evaluate(a));
    CHECK(std::abs(lo - l2) < 1e-12);
    CHECK(std::abs(hi - h2) < 1e-12);
  }
  CHECK(matrix_from_descriptor(R"({"type":"ssh","m":3})").size() == 13);
  CHECK(matrix_from_descriptor(R"({"type":"toeplitz","symbol":"dimer","m":5})").size() == 10);
  CHECK(matrix_from_descriptor(R"({"type":"chain","spacings":[1,2,1]})").size() == 4);
  CHECK_THROWS(matrix_from_descriptor(R"({"type":"mystery"})"));
  CHECK_THROWS(matrix_from_descriptor(R"({"type":"ssh","m":0})"));
}

TEST_CASE("reconstruction is invariant under re-basing degenerate eigenspaces") {
  std::mt19937_64 rng(41);
  const FiniteMatrix c = circulant_matrix(monomer_symbol(2.0, -1.0), 24);
  const auto eig = hermitian_eigen(c);
  const auto base = reconstruct_from_eigen(eig, 1);
  EigenDecomposition other = eig;
  for (Eigen::Index i = 0; i < eig.size();) {
    Eigen::Index j = i + 1;
    while (j < eig.size() && std::abs(eig.values(j) - eig.values(i)) < 1e-9) ++j;
    const Eigen::Index n = j - i;
    other.vectors.middleCols(i, n) = eig.vectors.middleCols(i, n) * oracle::random_unitary(n, rng);
    i = j;
  }
  const auto moved = reconstruct_from_eigen(other, 1);
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(std::abs(base[i].alpha_est - moved[i].alpha_est) < 1e-12);
    CHECK(base[i].lambda == moved[i].lambda);
    CHECK(base[i].localized == moved[i].localized);
  }
}

TEST_CASE("results do not depend on the number of jobs") {
  ScenarioConfig c;
  c.scenario = Scenario::periodic_symbol;
  c.symbol = "dimer";
  c.m = 50;
  const auto one = run_scenario(c);
  c.reconstruct.jobs = 4;
  const auto four = run_scenario(c);
  std::ostringstream a, b;
  write_points_csv(a, one.points);
  write_points_csv(b, four.points);
  CHECK(a.str() == b.str());
  CHECK(summary_to_json(one) == summary_to_json(four));
}

TEST_CASE("bundle files") {
  ScenarioConfig c;
  c.scenario = Scenario::ssh;
  c.m = 5;
  const auto b = run_scenario(c);
  std::ostringstream os;
  write_points_csv(os, b.points);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "index,alpha_est,lambda,sup_ratio,ipr,localized,band_error");
  std::getline(in, line);
  CHECK(line.rfind("1,", 0) == 0);
  CHECK(gaps_to_json(b.gaps).find("\"gap_modes\"") != std::string::npos);
  CHECK(overlay_svg(b).rfind("<svg", 0) == 0);

  const auto dir = std::filesystem::temp_directory_path() / "floquet_test_bundle";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_bundle(dir.string(), b, {true, true, true});
  for (const char* f : {"points.csv", "bands.csv", "gaps.json", "summary.json", "reconstruct.svg"})
    CHECK(std::filesystem::exists(dir / f));
  std::filesystem::remove_all(dir);
}
