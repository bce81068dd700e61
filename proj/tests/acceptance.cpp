// Acceptance criteria 1-11. One PASS/FAIL line per criterion; the exit status
// is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>

#include "floquet/matrices.hpp"
#include "floquet/reconstruct.hpp"
#include "floquet/spectra.hpp"
#include "floquet/symbol.hpp"
#include "floquet/transform.hpp"
#include "oracles.hpp"

using namespace floquet;

namespace {

struct Result {
  bool ok;
  std::string detail;
};

std::string e3(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3e", x);
  return b;
}

double q_unit(const CVector& u, int k) { return discrete_quasiperiodicity(zero_pad(u / u.norm(), k), k); }

bool in_bulk(double alpha, int cells) {
  const double w = 2.0 * oracle::pi * 4.0 / cells;
  return alpha > w && alpha < oracle::pi - w;
}

// Mixes each degenerate cluster by a random unitary and rotates phases.
EigenDecomposition rebase(EigenDecomposition e, std::mt19937_64& rng) {
  Eigen::Index i = 0;
  while (i < e.size()) {
    Eigen::Index j = i + 1;
    while (j < e.size() && e.values(j) - e.values(j - 1) < 1e-8) ++j;
    e.vectors.middleCols(i, j - i) = (e.vectors.middleCols(i, j - i) * oracle::random_unitary(j - i, rng)).eval();
    i = j;
  }
  std::uniform_real_distribution<double> ph(-oracle::pi, oracle::pi);
  for (Eigen::Index c = 0; c < e.vectors.cols(); ++c) e.vectors.col(c) *= std::polar(1.0, ph(rng));
  return e;
}

Result c1() {
  std::mt19937_64 rng(1);
  double lam = 0.0, grid = 0.0;
  for (int m : {8, 16, 32}) {
    const auto eig = hermitian_eigen(circulant_matrix(monomer_symbol(2.0, -1.0), m));
    for (int t = 0; t < 5; ++t) {
      const auto e = t == 0 ? eig : rebase(eig, rng);
      for (Eigen::Index i = 0; i < e.size(); ++i) {
        const double q = q_unit(e.vectors.col(i), 1);
        lam = std::max(lam, std::abs(e.values(i) - (2.0 - 2.0 * std::cos(q))));
        double best = 1e300;
        for (int j = 0; j < m; ++j) best = std::min(best, std::abs(std::abs(oracle::bin_alpha(j, m)) - q));
        grid = std::max(grid, best);
      }
    }
  }
  return {lam < 1e-10 && grid < 1e-10, "max |lambda - (2 - 2cos Q)| " + e3(lam) + ", max grid distance " + e3(grid)};
}

Result c2() {
  // The sine eigenvector of order m-1 with its Dirichlet boundary zero is a
  // length-m sample of sin(pi s x) on [0, 1).
  double worst = 0.0;
  for (int m : {20, 40, 80}) {
    const auto eig = hermitian_eigen(toeplitz_matrix(monomer_symbol(2.0, -1.0), m - 1));
    for (int s = 2; s < m; s += 2) {
      // Ascending order of 2 - 2cos(s pi/m) puts mode s at column s-1.
      if (std::abs(eig.values(s - 1) - oracle::tridiagonal_value(2.0, -1.0, m - 1, s)) > 1e-10) return {false, "mode order"};
      const CVector u = dirichlet_extension(eig.vectors.col(s - 1));
      worst = std::max(worst, std::abs(q_unit(u, 1) - oracle::pi * s / m));
    }
  }
  return {worst < 1e-10, "max |Q - pi s/m| " + e3(worst)};
}

Result c3() {
  std::vector<double> err;
  std::string d;
  for (int m : {41, 81, 161, 321}) {
    int s = static_cast<int>(std::lround(0.3 * m));
    if (s % 2 == 0) ++s;
    const auto eig = hermitian_eigen(toeplitz_matrix(monomer_symbol(2.0, -1.0), m));
    err.push_back(std::abs(q_unit(eig.vectors.col(s - 1), 1) - oracle::pi * s / m));
    d += (d.empty() ? "" : ", ") + e3(err.back());
  }
  bool ok = true;
  for (std::size_t i = 1; i < err.size(); ++i) ok = ok && err[i - 1] / err[i] >= 1.5;
  return {ok, "errors " + d};
}

double exponential_bulk_error(int m) {
  const auto pts = reconstruct_bands(toeplitz_matrix(exponential_symbol(), m), 1);
  double worst = 0.0;
  for (const auto& p : pts)
    if (!p.localized && in_bulk(p.alpha_est, m))
      worst = std::max(worst, std::abs(p.lambda - oracle::exponential_band(p.alpha_est)));
  return worst;
}

Result c4() {
  const double e30 = exponential_bulk_error(30), e120 = exponential_bulk_error(120);
  return {e30 < 5e-2 && e120 < e30, "bulk max error m=30 " + e3(e30) + " (needs < 5e-2), m=120 " + e3(e120)};
}

double dimer_error(double s1, double s2, const ReconstructionPoint& p) {
  const auto [lo, hi] = oracle::dimer_bands(s1, s2, p.alpha_est);
  return std::min(std::abs(p.lambda - lo), std::abs(p.lambda - hi));
}

std::vector<int> in_gap(const std::vector<ReconstructionPoint>& pts, double s1, double s2) {
  const auto [lo, hi] = oracle::dimer_gap(s1, s2);
  std::vector<int> out;
  for (const auto& p : pts)
    if (p.lambda > lo && p.lambda < hi) out.push_back(p.index);
  return out;
}

Result c5() {
  ScenarioConfig c;
  c.scenario = Scenario::ssh;
  c.m = 20;
  const auto b = run_scenario(c);
  const auto gap = in_gap(b.points, 1.0, 2.0);
  if (gap.size() != 1 || b.gaps.gap_modes.size() != 1)
    return {false, std::to_string(gap.size()) + " eigenvalues in the gap"};
  const auto& g = b.points[gap[0]];
  std::vector<double> iprs;
  for (const auto& p : b.points) iprs.push_back(p.ipr);
  const double ratio = g.ipr / oracle::median(iprs);
  // Bin weights of the zero-padded mode, sectioned with k = 2, by direct DFT.
  CVector u = CVector::Zero(b.dimension + 1);
  u.head(b.dimension) = b.eigen.vectors.col(gap[0]);
  const int m = static_cast<int>(u.size() / 2);
  std::vector<double> w(m, 0.0);
  for (int p = 0; p < 2; ++p) {
    CVector sec(m);
    for (int s = 0; s < m; ++s) sec(s) = u(p + 2 * s);
    const CVector f = oracle::direct_dft(sec);
    for (int j = 0; j < m; ++j) w[j] += std::norm(f(j));
  }
  const double top = *std::max_element(w.begin(), w.end()) / u.squaredNorm();
  double other = 0.0;
  for (const auto& p : b.points)
    if (p.index != gap[0]) other = std::max(other, dimer_error(1.0, 2.0, p));
  return {ratio > 10.0 && top < 0.2 && other < 1e-1,
          "one gap mode at " + e3(g.lambda) + ", ipr/median " + e3(ratio) + ", max bin weight " + e3(top) +
              ", max non-gap band_error " + e3(other)};
}

double bulk_error(const ScenarioBundle& b, double s1, double s2) {
  double worst = 0.0;
  for (const auto& p : b.points)
    if (!p.localized && in_bulk(p.alpha_est, b.cells)) worst = std::max(worst, dimer_error(s1, s2, p));
  return worst;
}

Result c6() {
  ScenarioConfig c;
  c.scenario = Scenario::dislocated;
  c.s1 = 1.0;
  c.s2 = 2.0;
  c.d = 4.0;
  c.m = 10;
  const auto b = run_scenario(c);
  const auto gap = in_gap(b.points, 1.0, 2.0);
  const bool one = gap.size() == 1 && b.points[gap[0]].localized;
  const double bulk = bulk_error(b, 1.0, 2.0);
  return {one && bulk < 1e-1, std::to_string(gap.size()) + " gap mode(s)" + (one ? " flagged localized" : "") +
                                  ", bulk band_error " + e3(bulk)};
}

Result c7() {
  ScenarioConfig c;
  c.scenario = Scenario::compact_defect;
  c.delta = -0.3;
  const auto neg = run_scenario(c);
  c.delta = 0.5;
  const auto pos = run_scenario(c);
  const auto gneg = in_gap(neg.points, 1.0, 2.0), gpos = in_gap(pos.points, 1.0, 2.0);
  const double bulk = bulk_error(neg, 1.0, 2.0);
  const bool a = gneg.empty() && bulk < 1e-1;
  bool b = !gpos.empty();
  for (int i : gpos) b = b && pos.points[i].localized;
  std::string where;
  for (int i : gneg) where += " " + e3(neg.points[i].lambda);
  return {a && b, "delta=-0.3: " + std::to_string(gneg.size()) + " gap mode(s)" + where + ", bulk band_error " +
                      e3(bulk) + (a ? " (ok)" : " (fails)") + "; delta=+0.5: " + std::to_string(gpos.size()) +
                      " gap mode(s)" + (b ? " localized (ok)" : " (fails)")};
}

Result c8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int done = 0, bad = 0;
  while (done < 100) {
    const int n = 4 + static_cast<int>(U(rng) * 47);
    const CMatrix a = oracle::random_hermitian(n, rng);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    const int i = static_cast<int>(U(rng) * n);
    const double c = es.eigenvalues()(i), eps = 0.05 + 0.45 * U(rng);
    CVector u = es.eigenvectors().col(i), far = CVector::Zero(n);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const Complex z(2 * U(rng) - 1, 2 * U(rng) - 1);
      if (std::abs(es.eigenvalues()(j) - c) <= eps)
        u += 0.3 * z * es.eigenvectors().col(j);
      else
        far += z * es.eigenvectors().col(j);
    }
    if (far.norm() > 0) u += 0.5 * eps * eps / ((a - c * CMatrix::Identity(n, n)) * far).norm() * far;
    u.normalize();
    if (!(((a - c * CMatrix::Identity(n, n)) * u).norm() < eps * eps)) continue;
    ++done;
    const FiniteMatrix fm(a, 1, MatrixKind::external, true, "random");
    const auto split = near_far_split(hermitian_eigen(fm), c, eps, u);
    if (!(split.u_perp.norm() < eps && split.u_parallel.norm() > std::sqrt(1 - eps * eps))) ++bad;
  }
  return {bad == 0, std::to_string(done) + " instances, " + std::to_string(bad) + " violations"};
}

Result c9() {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> K(1, 4), M(1, 64);
  double norm = 0.0, direct = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int k = K(rng), m = M(rng);
    CVector v = oracle::random_vector(k * m, rng);
    v.normalize();
    norm = std::max({norm, std::abs(dft(v).norm() - 1.0), std::abs(sections(v, k).squared_norm() - 1.0),
                     std::abs(tfbt(v, k).squared_norm() - 1.0)});
  }
  for (int m = 1; m <= 64; ++m) {
    const CVector v = oracle::random_vector(m, rng);
    direct = std::max(direct, (dft(v) - oracle::direct_dft(v)).cwiseAbs().maxCoeff());
  }
  return {norm <= 1e-12 && direct <= 1e-10, "max norm change " + e3(norm) + ", max direct-sum deviation " + e3(direct)};
}

Result c10() {
  const Symbol f = exponential_symbol();
  const int m = 40;
  const auto eig = hermitian_eigen(toeplitz_matrix(f, m));
  double tail = 0.0, excess = -1e300;
  for (int r = 2; r <= 10; ++r) {
    const double sup = symbol_distance_sup(f, banded_truncation(f, r), 4096);
    tail = std::max(tail, std::abs(sup - oracle::geometric_tail(r)));
    const FiniteMatrix tr = toeplitz_matrix(banded_truncation(f, r), m);
    for (Eigen::Index i = 0; i < eig.size(); ++i)
      excess = std::max(excess, residual(tr, eig.values(i), eig.vectors.col(i)) - oracle::geometric_tail(r));
  }
  return {tail <= 1e-8 && excess <= 0.0, "max |sup - 2^(1-r)| " + e3(tail) + ", max residual - bound " + e3(excess)};
}

Result c11() {
  std::vector<double> sup;
  std::string d;
  for (int m : {40, 80, 160, 320}) {
    const int s = static_cast<int>(std::lround(0.3 * m));
    const auto eig = hermitian_eigen(toeplitz_matrix(monomer_symbol(2.0, -1.0), m));
    const CVector u = eig.vectors.col(s - 1);
    const double expect = oracle::tridiagonal_vector(m, s).cwiseAbs().maxCoeff();
    if (std::abs(u.cwiseAbs().maxCoeff() - expect) > 1e-8) return {false, "tracked vector differs from the sine mode"};
    sup.push_back(localization_metrics(u).sup_ratio);
    d += (d.empty() ? "" : ", ") + e3(sup.back());
  }
  bool ok = true;
  for (std::size_t i = 1; i < sup.size(); ++i) ok = ok && sup[i] <= 1.05 * sup[i - 1];
  return {ok, "sup ratios " + d};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Result()>> criteria[] = {
      {"1 circulant exactness", c1}, {"2 even-index exactness", c2}, {"3 odd-index convergence", c3},
      {"4 exponential symbol", c4},  {"5 ssh", c5},                  {"6 dislocated", c6},
      {"7 compact defect", c7},      {"8 near/far lemma", c8},       {"9 unitarity", c9},
      {"10 appendix bounds", c10},   {"11 delocalisation", c11}};
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r{false, ""};
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = {false, std::string("threw: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %-26s %6.3fs  %s\n", r.ok ? "PASS" : "FAIL", name, sec, r.detail.c_str());
    failed += !r.ok;
  }
  std::printf("%d of 11 criteria passed\n", 11 - failed);
  return failed ? 1 : 0;
}
