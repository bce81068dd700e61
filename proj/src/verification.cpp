#include "floquet/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "floquet/matrices.hpp"
#include "floquet/output.hpp"
#include "floquet/reconstruct.hpp"
#include "floquet/spectra.hpp"
#include "floquet/symbol.hpp"
#include "floquet/transform.hpp"

namespace floquet {

std::mt19937_64 CheckContext::rng(const std::string& salt) const {
  std::seed_seq seq{static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(std::hash<std::string>{}(salt))};
  return std::mt19937_64(seq);
}

namespace {

using Rng = std::mt19937_64;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

CheckOutcome outcome(bool ok, const std::string& detail) { return {ok, detail}; }

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

CVector random_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (auto& x : v) x = Complex(g(rng), g(rng));
  return v;
}

CVector random_unit(Eigen::Index n, Rng& rng) {
  CVector v = random_vector(n, rng);
  return v / v.norm();
}

CMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  CMatrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) a.col(j) = random_vector(n, rng);
  return 0.5 * (a + a.adjoint());
}

Symbol random_symbol(int k, int radius, Rng& rng, bool real = false) {
  Symbol::Coefficients c;
  for (int s = 0; s <= radius; ++s) {
    CMatrix b(k, k);
    for (int j = 0; j < k; ++j) b.col(j) = random_vector(k, rng) / double(1 + s);
    if (real) b = b.real().cast<Complex>().eval();
    if (s == 0) b = 0.5 * (b + b.adjoint()).eval();
    c[s] = b;
  }
  return Symbol::from_nonnegative(k, c);
}

CMatrix random_unitary(Eigen::Index n, Rng& rng) {
  CMatrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) a.col(j) = random_vector(n, rng);
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ() * CMatrix::Identity(n, n);
}

// Random unitary mixing inside every cluster of numerically equal eigenvalues,
// plus a random global phase on each vector.
EigenDecomposition rebase(const EigenDecomposition& eig, Rng& rng) {
  EigenDecomposition out = eig;
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  Eigen::Index i = 0;
  while (i < eig.size()) {
    Eigen::Index j = i + 1;
    while (j < eig.size() && eig.values(j) - eig.values(j - 1) < 1e-8 * scale) ++j;
    const Eigen::Index len = j - i;
    out.vectors.middleCols(i, len) = eig.vectors.middleCols(i, len) * random_unitary(len, rng);
    i = j;
  }
  for (Eigen::Index c = 0; c < out.vectors.cols(); ++c)
    out.vectors.col(c) *= std::polar(1.0, uniform(rng, -kPi, kPi));
  return out;
}

double dft_direct_error(const CVector& v) {
  const auto m = v.size();
  const CVector f = dft(v);
  double err = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    Complex acc = 0.0;
    for (Eigen::Index s = 0; s < m; ++s) acc += v(s) * std::polar(1.0, -kTwoPi * double((j * s) % m) / m);
    err = std::max(err, std::abs(acc / std::sqrt(double(m)) - f(j)));
  }
  return err;
}

// Eigenvalues of a 2x2 Hermitian matrix in closed form, ascending.
std::pair<double, double> eig2(const CMatrix& a) {
  const double p = 0.5 * (a(0, 0).real() + a(1, 1).real());
  const double q = 0.5 * (a(0, 0).real() - a(1, 1).real());
  const double r = std::sqrt(q * q + std::norm(a(0, 1)));
  return {p - r, p + r};
}

double max_bulk_error(const Symbol& sym, int m) {
  std::vector<ReconstructionPoint> pts = reconstruct_bands(toeplitz_matrix(sym, m), sym.k());
  return compare_to_symbol(pts, band_functions(sym, 512), m).bulk.max;
}

double q_of(const CVector& u, int k) { return discrete_quasiperiodicity(zero_pad(u / u.norm(), k), k); }

// ----------------------------------------------------------------------------
// symbol
// ----------------------------------------------------------------------------

CheckOutcome symbol_hermitian(const CheckContext& ctx) {
  auto rng = ctx.rng("symbol_hermitian");
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k)
    for (int t = 0; t < 5; ++t) {
      const Symbol s = random_symbol(k, 3, rng);
      for (int j = 0; j < 64; ++j) worst = std::max(worst, hermitian_defect(s.evaluate(uniform(rng, -kPi, kPi))));
    }
  return outcome(worst <= ctx.tol(1e-12), "max |f - f^*| = " + fmt(worst));
}

CheckOutcome symbol_closed_form(const CheckContext& ctx) {
  auto rng = ctx.rng("symbol_closed_form");
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    const Symbol s = t == 0 ? dimer_chain_symbol(1.0, 2.0) : random_symbol(2, 2, rng);
    const BandStructure bs = band_functions(s, 64);
    for (int j = 0; j < bs.grid_size(); ++j) {
      const auto [lo, hi] = eig2(s.evaluate(bs.grid[j]));
      worst = std::max({worst, std::abs(lo - bs.values(0, j)), std::abs(hi - bs.values(1, j))});
    }
  }
  for (int j = 0; j < 64; ++j) {
    const BandStructure bs = band_functions(monomer_symbol(2.0, -1.0), 64);
    worst = std::max(worst, std::abs(bs.values(0, j) - (2.0 - 2.0 * std::cos(bs.grid[j]))));
  }
  return outcome(worst <= ctx.tol(1e-10), "max band deviation " + fmt(worst));
}

CheckOutcome symbol_symmetry(const CheckContext& ctx) {
  auto rng = ctx.rng("symbol_symmetry");
  double worst = 0.0;
  std::vector<Symbol> syms = {monomer_symbol(2.0, -1.0), dimer_chain_symbol(1.0, 2.0), exponential_symbol()};
  // Complex coefficients break the mirror symmetry (a_1 = i gives -2 sin alpha).
  for (int k = 1; k <= 3; ++k) syms.push_back(random_symbol(k, 2, rng, true));
  for (const auto& s : syms)
    for (int m : {16, 33, 64}) {
      const BandStructure bs = band_functions(s, m);
      const int h = m / 2;
      for (int j = -h; j < m - h; ++j) {
        const int mirror = -j;
        if (mirror < -h || mirror >= m - h) continue;
        for (int p = 0; p < s.k(); ++p)
          worst = std::max(worst, std::abs(bs.values(p, j + h) - bs.values(p, mirror + h)));
      }
    }
  return outcome(worst <= ctx.tol(1e-10), "max |lambda(a) - lambda(-a)| = " + fmt(worst));
}

CheckOutcome symbol_truncation_bound(const CheckContext& ctx) {
  auto rng = ctx.rng("symbol_truncation_bound");
  bool ok = true;
  double margin = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 3; ++k) {
    const Symbol s = random_symbol(k, 6, rng);
    for (int r = 0; r <= 6; ++r) {
      double tail = 0.0;
      for (const auto& [off, blk] : s.coefficients())
        if (std::abs(off) > r) tail += Eigen::JacobiSVD<CMatrix>(blk).singularValues()(0);
      const double d = symbol_distance_sup(s, banded_truncation(s, r), 512);
      margin = std::min(margin, tail - d);
      ok = ok && d <= tail + ctx.tol(1e-12);
    }
  }
  return outcome(ok, "min (tail sum - sup difference) = " + fmt(margin));
}

CheckOutcome symbol_assumptions(const CheckContext& ctx) {
  (void)ctx;
  const auto mono = check_assumptions(band_functions(monomer_symbol(2.0, -1.0), 64));
  const auto flat = check_assumptions(band_functions(monomer_symbol(2.0, 0.0), 64));
  CMatrix a0 = CMatrix::Identity(2, 2) * 2.0, a1 = -CMatrix::Identity(2, 2);
  const auto twin = check_assumptions(band_functions(Symbol::from_nonnegative(2, {{0, a0}, {1, a1}}), 64));
  const bool ok = mono.all_passed() && !flat.no_van_hove && !twin.bands_disjoint;
  return outcome(ok, std::string("monomer ") + (mono.all_passed() ? "pass" : "fail") + ", flat van Hove " +
                         (flat.no_van_hove ? "missed" : "caught") + ", twin bands " +
                         (twin.bands_disjoint ? "missed" : "caught"));
}

// ----------------------------------------------------------------------------
// matrices
// ----------------------------------------------------------------------------

CheckOutcome matrices_hermitian(const CheckContext& ctx) {
  auto rng = ctx.rng("matrices_hermitian");
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const Symbol s = random_symbol(k, 2, rng);
    worst = std::max(worst, hermitian_defect(toeplitz_matrix(s, 12).data()));
    worst = std::max(worst, hermitian_defect(circulant_matrix(s, 12).data()));
  }
  return outcome(worst <= ctx.tol(1e-12), "max defect " + fmt(worst));
}

CheckOutcome matrices_circulant_toeplitz_agree(const CheckContext& ctx) {
  auto rng = ctx.rng("matrices_agree");
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const int r = 2, m = 12;
    const Symbol s = random_symbol(k, r, rng);
    const CMatrix t = toeplitz_matrix(s, m).data(), c = circulant_matrix(s, m).data();
    for (int bi = r; bi < m - r; ++bi)
      for (int bj = r; bj < m - r; ++bj)
        worst = std::max(worst, (t.block(bi * k, bj * k, k, k) - c.block(bi * k, bj * k, k, k)).cwiseAbs().maxCoeff());
  }
  return outcome(worst <= ctx.tol(1e-15), "max interior difference " + fmt(worst));
}

CheckOutcome matrices_chain(const CheckContext& ctx) {
  auto rng = ctx.rng("matrices_chain");
  double rows = 0.0, kernel = 0.0;
  for (int t = 0; t < 10; ++t) {
    std::vector<double> sp(uniform_int(rng, 1, 30));
    for (auto& x : sp) x = uniform(rng, 0.2, 5.0);
    const FiniteMatrix c = chain_capacitance(sp);
    rows = std::max(rows, c.data().rowwise().sum().cwiseAbs().maxCoeff());
    const auto eig = hermitian_eigen(c);
    Eigen::Index i0 = 0;
    eig.values.cwiseAbs().minCoeff(&i0);
    const CVector ones = CVector::Ones(c.size()) / std::sqrt(double(c.size()));
    kernel = std::max({kernel, std::abs(eig.values(i0)), 1.0 - std::abs(ones.dot(eig.vectors.col(i0)))});
  }
  const bool ok = rows <= ctx.tol(1e-12) && kernel <= ctx.tol(1e-10);
  return outcome(ok, "row sums " + fmt(rows) + ", kernel deviation " + fmt(kernel));
}

CheckOutcome matrices_ssh(const CheckContext& ctx) {
  auto rng = ctx.rng("matrices_ssh");
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    SshParameters p{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2),
                    uniform(rng, -2, 2)};
    const CMatrix c = ssh_matrix(p, uniform_int(rng, 1, 8)).data();
    const CMatrix flipped = c.reverse();
    worst = std::max({worst, hermitian_defect(c), (c - flipped.transpose()).cwiseAbs().maxCoeff()});
  }
  return outcome(worst <= ctx.tol(1e-15), "symmetry/persymmetry defect " + fmt(worst));
}

CheckOutcome matrices_perturbed_spectrum(const CheckContext& ctx) {
  auto rng = ctx.rng("matrices_perturbed");
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    const FiniteMatrix c(random_hermitian(10, rng).real().cast<Complex>(), 1, MatrixKind::external, true, "random");
    const auto p = compact_perturbation(c, uniform_int(rng, 1, 10), uniform(rng, -0.9, 2.0));
    Eigen::VectorXcd ev = Eigen::ComplexEigenSolver<CMatrix>(p.product.data()).eigenvalues();
    std::vector<double> re(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) re[i] = ev(i).real();
    std::sort(re.begin(), re.end());
    const auto sym = hermitian_eigen(p.symmetrized);
    for (Eigen::Index i = 0; i < ev.size(); ++i) worst = std::max(worst, std::abs(re[i] - sym.values(i)));
  }
  return outcome(worst <= ctx.tol(1e-9), "max sorted eigenvalue difference " + fmt(worst));
}

CheckOutcome matrices_round_trip(const CheckContext& ctx) {
  auto rng = ctx.rng("matrices_round_trip");
  const CMatrix ssh = ssh_matrix(SshParameters::from_spacings(1.0, 2.0), 5).data();
  const CMatrix herm = random_hermitian(7, rng);
  double worst = 0.0;
  for (const CMatrix* m : {&ssh, &herm}) {
    std::ostringstream csv;
    write_matrix_csv(csv, *m);
    worst = std::max(worst, (parse_matrix_csv(csv.str()).data() - *m).cwiseAbs().maxCoeff());
    worst = std::max(worst, (parse_matrix_json(matrix_to_json(*m)).data() - *m).cwiseAbs().maxCoeff());
  }
  return outcome(worst == 0.0, "max round-trip difference " + fmt(worst));
}

// ----------------------------------------------------------------------------
// transform
// ----------------------------------------------------------------------------

CheckOutcome transform_unitarity(const CheckContext& ctx) {
  auto rng = ctx.rng("transform_unitarity");
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int k = uniform_int(rng, 1, 4), m = uniform_int(rng, 1, 40);
    const CVector v = random_vector(k * m, rng);
    const double n = v.norm();
    worst = std::max(worst, std::abs(dft(v).norm() - n) / n);
    worst = std::max(worst, std::abs(std::sqrt(sections(v, k).squared_norm()) - n) / n);
    worst = std::max(worst, std::abs(std::sqrt(tfbt(v, k).squared_norm()) - n) / n);
  }
  return outcome(worst <= ctx.tol(1e-12), "max relative norm change " + fmt(worst));
}

CheckOutcome transform_direct_oracle(const CheckContext& ctx) {
  auto rng = ctx.rng("transform_direct");
  double worst = 0.0;
  for (int m = 1; m <= 64; ++m) worst = std::max(worst, dft_direct_error(random_vector(m, rng)));
  return outcome(worst <= ctx.tol(1e-10), "max deviation from direct sum " + fmt(worst));
}

CheckOutcome transform_linearity(const CheckContext& ctx) {
  auto rng = ctx.rng("transform_linearity");
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int k = uniform_int(rng, 1, 3), m = uniform_int(rng, 2, 40);
    const CVector u = random_vector(k * m, rng), v = random_vector(k * m, rng);
    const Complex a(uniform(rng, -2, 2), uniform(rng, -2, 2)), b(uniform(rng, -2, 2), uniform(rng, -2, 2));
    const auto lhs = tfbt(a * u + b * v, k), tu = tfbt(u, k), tv = tfbt(v, k);
    for (int p = 0; p < k; ++p)
      worst = std::max(worst, (lhs.sections[p] - a * tu.sections[p] - b * tv.sections[p]).cwiseAbs().maxCoeff());
  }
  return outcome(worst <= ctx.tol(1e-12), "max linearity defect " + fmt(worst));
}

CheckOutcome transform_phase_invariance(const CheckContext& ctx) {
  auto rng = ctx.rng("transform_phase");
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int k = uniform_int(rng, 1, 3), m = uniform_int(rng, 2, 40);
    const CVector u = random_unit(k * m, rng);
    const Complex phase = std::polar(1.0, uniform(rng, -kPi, kPi));
    worst = std::max(worst, std::abs(discrete_quasiperiodicity(u, k) - discrete_quasiperiodicity(phase * u, k)));
  }
  return outcome(worst <= ctx.tol(1e-12), "max change under phase rotation " + fmt(worst));
}

CheckOutcome transform_circulant_eigenvectors(const CheckContext& ctx) {
  auto rng = ctx.rng("transform_circulant");
  double qerr = 0.0, res = 0.0;
  for (int k = 1; k <= 3; ++k)
    for (int m : {5, 8, 17, 32}) {
      const Symbol s = random_symbol(k, 2, rng);
      const CMatrix c = circulant_matrix(s, m).data();
      for (double a : brillouin_zone(m).alphas) {
        // The phase convention of block (i, j) = a_{i-j} pairs QP_m(., a) with f(e^{-ia}).
        Eigen::SelfAdjointEigenSolver<CMatrix> es(s.evaluate(-a));
        for (int p = 0; p < k; ++p) {
          const CVector u = quasiperiodic_extension(es.eigenvectors().col(p), a, m);
          res = std::max(res, residual(c, es.eigenvalues()(p), u));
          qerr = std::max(qerr, std::abs(discrete_quasiperiodicity(u, k) - std::abs(a)));
        }
      }
    }
  const bool ok = qerr <= ctx.tol(1e-10) && res <= ctx.tol(1e-10);
  return outcome(ok, "max |Q - |alpha_j|| " + fmt(qerr) + ", max residual " + fmt(res));
}

// ----------------------------------------------------------------------------
// spectra
// ----------------------------------------------------------------------------

CheckOutcome spectra_decomposition(const CheckContext& ctx) {
  auto rng = ctx.rng("spectra_decomposition");
  std::vector<FiniteMatrix> ms = {
      FiniteMatrix(random_hermitian(8, rng), 1, MatrixKind::external, true, "random 8"),
      FiniteMatrix(random_hermitian(60, rng), 1, MatrixKind::external, true, "random 60"),
      ssh_matrix(SshParameters::from_spacings(1.0, 2.0), 20),
      dislocated_chain(1.0, 2.0, 4.0, 10),
      toeplitz_matrix(dimer_chain_symbol(1.0, 2.0), 100),
      capacitance_1d(2.0, -1.0, -1.0, 2000)};
  double rec = 0.0, orth = 0.0;
  bool sorted = true;
  for (const auto& m : ms) {
    const auto e = hermitian_eigen(m);
    const double norm = std::max(1.0, m.data().cwiseAbs().rowwise().sum().maxCoeff());
    // Large cases test a random subset of columns to keep the check fast.
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < e.size(); ++i) cols.push_back(i);
    if (e.size() > 400) {
      std::shuffle(cols.begin(), cols.end(), rng);
      cols.resize(64);
    }
    for (Eigen::Index i : cols) {
      rec = std::max(rec, residual(m, e.values(i), e.vectors.col(i)) / norm);
      CVector g = e.vectors.adjoint() * e.vectors.col(i);
      g(i) -= 1.0;
      orth = std::max(orth, g.cwiseAbs().maxCoeff());
    }
    for (Eigen::Index i = 1; i < e.size(); ++i) sorted = sorted && e.values(i - 1) <= e.values(i);
  }
  const bool ok = sorted && rec <= ctx.tol(1e-9) && orth <= ctx.tol(1e-9);
  return outcome(ok, "residual " + fmt(rec) + ", orthonormality " + fmt(orth) + ", sizes up to 2000");
}

CheckOutcome spectra_near_far(const CheckContext& ctx) {
  auto rng = ctx.rng("spectra_near_far");
  double sum = 0.0, inner = 0.0, rec = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int n = uniform_int(rng, 2, 30);
    const auto eig = hermitian_eigen(random_hermitian(n, rng));
    const CVector u = random_unit(n, rng);
    const auto split = near_far_split(eig, uniform(rng, -3, 3), uniform(rng, 0.05, 2.0), u);
    sum = std::max(sum, std::abs(split.u_parallel.squaredNorm() + split.u_perp.squaredNorm() - 1.0));
    inner = std::max(inner, std::abs(split.u_parallel.dot(split.u_perp)));
    rec = std::max(rec, (split.u_parallel + split.u_perp - u).cwiseAbs().maxCoeff());
  }
  const bool ok = sum <= ctx.tol(1e-10) && inner <= ctx.tol(1e-10) && rec <= ctx.tol(1e-12);
  return outcome(ok, "norm split " + fmt(sum) + ", inner product " + fmt(inner) + ", reconstruction " + fmt(rec));
}

CheckOutcome spectra_metrics(const CheckContext& ctx) {
  const auto e = localization_metrics(CVector::Unit(7, 3));
  const auto u = localization_metrics(CVector::Ones(25) / 5.0);
  const double err = std::max({std::abs(e.sup_ratio - 1.0), std::abs(e.ipr - 1.0), std::abs(u.sup_ratio - 0.2),
                               std::abs(u.ipr - 1.0 / 25)});
  return outcome(err <= ctx.tol(1e-14), "max metric error " + fmt(err));
}

CheckOutcome spectra_ssh_sup_ratio(const CheckContext& ctx) {
  (void)ctx;
  ScenarioConfig c;
  c.scenario = Scenario::ssh;
  const auto b = run_scenario(c);
  if (b.gaps.gap_modes.size() != 1) return outcome(false, "expected one gap mode");
  std::vector<double> sups;
  for (const auto& p : b.points) sups.push_back(p.sup_ratio);
  std::nth_element(sups.begin(), sups.begin() + sups.size() / 2, sups.end());
  const double med = sups[sups.size() / 2];
  const double gap_sup = b.points[b.gaps.gap_modes[0].index].sup_ratio;
  return outcome(gap_sup > 3.0 * med, "gap mode sup ratio " + fmt(gap_sup) + " vs median " + fmt(med));
}

// ----------------------------------------------------------------------------
// reconstruct
// ----------------------------------------------------------------------------

CheckOutcome reconstruct_circulant(const CheckContext& ctx) {
  const Symbol s = monomer_symbol(2.0, -1.0);
  auto pts = reconstruct_bands(circulant_matrix(s, 16), 1);
  double err = 0.0;
  for (const auto& p : pts) err = std::max(err, std::abs(p.lambda - (2.0 - 2.0 * std::cos(p.alpha_est))));
  const auto rep = compare_to_symbol(pts, band_functions(s, 512), 16);
  const double band = std::max(rep.delocalized.max, rep.localized.max);
  const bool ok = err <= ctx.tol(1e-10) && band <= ctx.tol(1e-10);
  return outcome(ok, "closed form " + fmt(err) + ", band_error " + fmt(band));
}

CheckOutcome reconstruct_convergence(const CheckContext& ctx) {
  (void)ctx;
  std::string detail;
  bool ok = true;
  for (const Symbol& s : {monomer_symbol(2.0, -1.0), dimer_chain_symbol(1.0, 2.0)}) {
    double prev = std::numeric_limits<double>::infinity();
    detail += "k=" + std::to_string(s.k()) + ":";
    for (int m : {40, 80, 160}) {
      const double e = max_bulk_error(s, m);
      ok = ok && e <= 1.1 * prev;
      prev = e;
      detail += " " + fmt(e);
    }
    detail += "; ";
  }
  return outcome(ok, detail);
}

CheckOutcome reconstruct_cross_consistency(const CheckContext& ctx) {
  (void)ctx;
  std::string detail;
  bool ok = true;
  for (Scenario sc : {Scenario::ssh, Scenario::dislocated}) {
    ScenarioConfig c;
    c.scenario = sc;
    const auto b = run_scenario(c);
    std::set<int> loc, gap;
    for (const auto& p : b.points)
      if (p.localized) loc.insert(p.index);
    for (const auto& g : b.gaps.gap_modes) gap.insert(g.index);
    ok = ok && loc == gap;
    detail += to_string(sc) + ": " + std::to_string(loc.size()) + " localized, " + std::to_string(gap.size()) +
              " gap modes; ";
  }
  return outcome(ok, detail);
}

CheckOutcome reconstruct_rebase_invariance(const CheckContext& ctx) {
  auto rng = ctx.rng("reconstruct_rebase");
  double worst = 0.0;
  for (const FiniteMatrix& m : {circulant_matrix(monomer_symbol(2.0, -1.0), 16),
                                circulant_matrix(dimer_chain_symbol(1.0, 2.0), 12)}) {
    const auto eig = hermitian_eigen(m);
    const auto base = reconstruct_from_eigen(eig, m.k());
    for (int t = 0; t < 5; ++t) {
      const auto other = reconstruct_from_eigen(rebase(eig, rng), m.k());
      for (std::size_t i = 0; i < base.size(); ++i) {
        worst = std::max({worst, std::abs(base[i].alpha_est - other[i].alpha_est),
                          std::abs(base[i].lambda - other[i].lambda)});
        if (base[i].localized != other[i].localized) worst = std::numeric_limits<double>::infinity();
      }
    }
  }
  return outcome(worst <= ctx.tol(1e-10), "max change of (alpha_est, lambda) " + fmt(worst));
}

CheckOutcome reconstruct_gaps(const CheckContext& ctx) {
  (void)ctx;
  const auto mono = detect_gaps(band_functions(monomer_symbol(2.0, -1.0), 256), RVector::LinSpaced(5, 0, 4), 0.0);
  const auto bs = band_functions(dimer_chain_symbol(1.0, 2.0), 512);
  const auto chain = hermitian_eigen(chain_capacitance(dimer_spacings(1.0, 2.0, 20)));
  const auto dimer = detect_gaps(bs, chain.values, 1e-3);
  const bool ok = mono.gaps.empty() && dimer.gaps.size() == 1 && dimer.gap_modes.empty();
  return outcome(ok, "monomer gaps " + std::to_string(mono.gaps.size()) + ", dimer gaps " +
                         std::to_string(dimer.gaps.size()) + " with " + std::to_string(dimer.gap_modes.size()) +
                         " modes in the unperturbed chain");
}

// ----------------------------------------------------------------------------
// cli-level contracts
// ----------------------------------------------------------------------------

std::string render(const ScenarioBundle& b) {
  std::ostringstream os;
  write_points_csv(os, b.points);
  if (b.bands) write_bands_csv(os, *b.bands);
  return os.str() + gaps_to_json(b.gaps) + summary_to_json(b);
}

CheckOutcome cli_determinism(const CheckContext& ctx) {
  (void)ctx;
  bool ok = true;
  for (Scenario sc : {Scenario::periodic_nn, Scenario::ssh, Scenario::compact_defect}) {
    ScenarioConfig c;
    c.scenario = sc;
    const std::string a = render(run_scenario(c));
    c.reconstruct.jobs = 4;
    const std::string b = render(run_scenario(c));
    ok = ok && a == b && a == render(run_scenario(c));
  }
  return outcome(ok, ok ? "byte-identical across runs and job counts" : "outputs differ");
}

CheckOutcome cli_csv_reparse(const CheckContext& ctx) {
  ScenarioConfig c;
  c.scenario = Scenario::ssh;
  const auto b = run_scenario(c);
  std::ostringstream os;
  write_points_csv(os, b.points);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  double worst = 0.0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() < 7) return outcome(false, "short row: " + line);
    const auto& p = b.points.at(rows++);
    const double vals[] = {p.alpha_est, p.lambda, p.sup_ratio, p.ipr, *p.band_error};
    const int cols[] = {1, 2, 3, 4, 6};
    for (int i = 0; i < 5; ++i) {
      const double x = std::stod(cells[cols[i]]);
      worst = std::max(worst, std::abs(x - vals[i]) / std::max(1e-300, std::abs(vals[i])));
    }
  }
  const bool ok = rows == b.points.size() && worst <= ctx.tol(1e-14);
  return outcome(ok, std::to_string(rows) + " rows, max relative print error " + fmt(worst));
}

// ----------------------------------------------------------------------------
// acceptance
// ----------------------------------------------------------------------------

CheckOutcome acc_circulant(const CheckContext& ctx) {
  auto rng = ctx.rng("acc_circulant");
  const Symbol s = monomer_symbol(2.0, -1.0);
  double lam = 0.0, grid = 0.0;
  for (int m : {8, 16, 32}) {
    const auto eig = hermitian_eigen(circulant_matrix(s, m));
    const auto alphas = brillouin_zone(m).alphas;
    for (int t = 0; t < 4; ++t) {
      const auto pts = reconstruct_from_eigen(t == 0 ? eig : rebase(eig, rng), 1);
      for (const auto& p : pts) {
        lam = std::max(lam, std::abs(p.lambda - (2.0 - 2.0 * std::cos(p.alpha_est))));
        double best = std::numeric_limits<double>::infinity();
        for (double a : alphas) best = std::min(best, std::abs(std::abs(a) - p.alpha_est));
        grid = std::max(grid, best);
      }
    }
  }
  const bool ok = lam < ctx.tol(1e-10) && grid < ctx.tol(1e-10);
  return outcome(ok, "max |lambda - f(Q)| " + fmt(lam) + ", max distance to |Y*_m| " + fmt(grid));
}

CheckOutcome acc_even_index(const CheckContext& ctx) {
  double worst = 0.0;
  for (int m : {20, 40, 80}) {
    const auto oracle = tridiagonal_eigenpairs_oracle(2.0, -1.0, m - 1);
    for (int s = 2; s < m; s += 2) {
      const CVector u = dirichlet_extension(oracle.vectors.col(s - 1));
      worst = std::max(worst, std::abs(q_of(u, 1) - kPi * s / m));
    }
  }
  return outcome(worst < ctx.tol(1e-10), "max |Q - pi s/m| over even s " + fmt(worst));
}

CheckOutcome acc_odd_index(const CheckContext& ctx) {
  (void)ctx;
  std::vector<double> errs;
  std::string detail;
  for (int m : {41, 81, 161, 321}) {
    int s = static_cast<int>(std::lround(0.3 * m));
    if (s % 2 == 0) ++s;
    const auto oracle = tridiagonal_eigenpairs_oracle(2.0, -1.0, m);
    errs.push_back(std::abs(q_of(oracle.vectors.col(s - 1), 1) - kPi * s / m));
    detail += (detail.empty() ? "" : ", ") + fmt(errs.back());
  }
  bool ok = true;
  for (std::size_t i = 1; i < errs.size(); ++i) ok = ok && errs[i - 1] >= 1.5 * errs[i];
  return outcome(ok, "errors " + detail);
}

CheckOutcome acc_exponential(const CheckContext& ctx) {
  const Symbol s = exponential_symbol();
  const double e30 = max_bulk_error(s, 30), e120 = max_bulk_error(s, 120);
  const bool ok = e30 < ctx.tol(5e-2) && e120 < e30;
  return outcome(ok, "bulk max error m=30 " + fmt(e30) + " (bound 5e-2), m=120 " + fmt(e120));
}

CheckOutcome acc_ssh(const CheckContext& ctx) {
  ScenarioConfig c;
  c.scenario = Scenario::ssh;
  c.m = 20;
  const auto b = run_scenario(c);
  if (b.gaps.gap_modes.size() != 1)
    return outcome(false, std::to_string(b.gaps.gap_modes.size()) + " gap modes, expected 1");
  const int g = b.gaps.gap_modes[0].index;
  std::vector<double> iprs;
  for (const auto& p : b.points) iprs.push_back(p.ipr);
  std::sort(iprs.begin(), iprs.end());
  const std::size_t n = iprs.size();
  const double med = n % 2 ? iprs[n / 2] : 0.5 * (iprs[n / 2 - 1] + iprs[n / 2]);
  const auto prof = projection_profile(zero_pad(b.eigen.vectors.col(g), 2), 2);
  double total = 0.0, top = 0.0;
  for (double w : prof) {
    total += w;
    top = std::max(top, w);
  }
  top /= total;
  double other = 0.0;
  for (const auto& p : b.points)
    if (p.index != g) other = std::max(other, *p.band_error);
  const double ratio = b.points[g].ipr / med;
  const bool ok = ratio > 10.0 && top < 0.2 && other < ctx.tol(1e-1);
  return outcome(ok, "1 gap mode at " + fmt(b.points[g].lambda) + ", ipr/median " + fmt(ratio) + ", max bin weight " +
                         fmt(top) + ", max non-gap band_error " + fmt(other));
}

CheckOutcome acc_dislocated(const CheckContext& ctx) {
  ScenarioConfig c;
  c.scenario = Scenario::dislocated;
  c.s1 = 1.0;
  c.s2 = 2.0;
  c.d = 4.0;
  c.m = 10;
  const auto b = run_scenario(c);
  const std::size_t modes = b.gaps.gap_modes.size();
  const bool flagged = modes == 1 && b.points[b.gaps.gap_modes[0].index].localized;
  const double bulk = b.comparison->bulk.max;
  const bool ok = flagged && bulk < ctx.tol(1e-1);
  return outcome(ok, std::to_string(modes) + " gap mode(s)" + (flagged ? ", localized" : "") +
                         ", bulk band_error " + fmt(bulk));
}

CheckOutcome acc_compact(const CheckContext& ctx) {
  ScenarioConfig c;
  c.scenario = Scenario::compact_defect;
  c.delta = -0.3;
  const auto neg = run_scenario(c);
  c.delta = 0.5;
  const auto pos = run_scenario(c);
  const bool neg_ok = neg.gaps.gap_modes.empty() && neg.comparison->bulk.max < ctx.tol(1e-1);
  bool pos_ok = !pos.gaps.gap_modes.empty();
  for (const auto& g : pos.gaps.gap_modes) pos_ok = pos_ok && pos.points[g.index].localized;
  std::string neg_modes;
  for (const auto& g : neg.gaps.gap_modes) neg_modes += " " + fmt(g.lambda);
  return outcome(neg_ok && pos_ok,
                 "delta=-0.3: " + std::to_string(neg.gaps.gap_modes.size()) + " gap mode(s)" + neg_modes +
                     ", bulk band_error " + fmt(neg.comparison->bulk.max) + (neg_ok ? " ok" : " FAIL") +
                     "; delta=+0.5: " + std::to_string(pos.gaps.gap_modes.size()) + " gap mode(s)" +
                     (pos_ok ? " localized ok" : " FAIL"));
}

CheckOutcome acc_near_far(const CheckContext& ctx) {
  auto rng = ctx.rng("acc_near_far");
  int done = 0, bad = 0;
  double worst_perp = 0.0;
  while (done < 100) {
    const int n = uniform_int(rng, 4, 50);
    const auto eig = hermitian_eigen(random_hermitian(n, rng));
    const int i = uniform_int(rng, 0, n - 1);
    const double center = eig.values(i), eps = uniform(rng, 0.05, 0.5);
    CVector u = eig.vectors.col(i);
    CVector far = CVector::Zero(n);
    for (int j = 0; j < n; ++j) {
      const double gap = std::abs(eig.values(j) - center);
      if (j == i) continue;
      const Complex c(uniform(rng, -1, 1), uniform(rng, -1, 1));
      if (gap <= eps)
        u += 0.3 * c * eig.vectors.col(j);
      else
        far += c * eig.vectors.col(j);
    }
    if (far.norm() > 0.0) {
      const CMatrix shifted = eig.vectors * (eig.values.array() - center).matrix().cast<Complex>().asDiagonal() *
                              eig.vectors.adjoint();
      u += 0.5 * eps * eps / (shifted * far).norm() * far;
    }
    u.normalize();
    const CMatrix a = eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    if (!(residual(a, center, u) < eps * eps)) continue;
    ++done;
    const auto split = near_far_split(eig, center, eps, u);
    worst_perp = std::max(worst_perp, split.u_perp.norm() / eps);
    if (!(split.u_perp.norm() < eps && split.u_parallel.norm() > std::sqrt(1.0 - eps * eps))) ++bad;
  }
  return outcome(bad == 0, std::to_string(done) + " instances, " + std::to_string(bad) +
                               " violations, max ||u_perp||/eps " + fmt(worst_perp));
}

CheckOutcome acc_unitarity(const CheckContext& ctx) {
  auto rng = ctx.rng("acc_unitarity");
  double norm = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int k = uniform_int(rng, 1, 4), m = uniform_int(rng, 1, 64);
    const CVector v = random_unit(k * m, rng);
    norm = std::max({norm, std::abs(dft(v).norm() - 1.0), std::abs(sections(v, k).squared_norm() - 1.0),
                     std::abs(tfbt(v, k).squared_norm() - 1.0)});
  }
  double direct = 0.0;
  for (int m = 1; m <= 64; ++m) direct = std::max(direct, dft_direct_error(random_vector(m, rng)));
  const bool ok = norm <= ctx.tol(1e-12) && direct <= ctx.tol(1e-10);
  return outcome(ok, "max norm change " + fmt(norm) + ", max direct-sum deviation " + fmt(direct));
}

CheckOutcome acc_appendix(const CheckContext& ctx) {
  const Symbol f = exponential_symbol();
  const int m = 40;
  const auto eig = hermitian_eigen(toeplitz_matrix(f, m));
  double tail_err = 0.0, excess = -std::numeric_limits<double>::infinity();
  for (int r = 2; r <= 10; ++r) {
    const Symbol fr = banded_truncation(f, r);
    const double sup = symbol_distance_sup(f, fr, 4096);
    tail_err = std::max(tail_err, std::abs(sup - std::ldexp(1.0, 1 - r)));
    const FiniteMatrix tr = toeplitz_matrix(fr, m);
    for (Eigen::Index i = 0; i < eig.size(); ++i)
      excess = std::max(excess, residual(tr, eig.values(i), eig.vectors.col(i)) - sup);
  }
  const bool ok = tail_err <= ctx.tol(1e-8) && excess <= ctx.tol(1e-12);
  return outcome(ok, "max |sup - 2^(1-r)| " + fmt(tail_err) + ", max (residual - bound) " + fmt(excess));
}

CheckOutcome acc_delocalisation(const CheckContext& ctx) {
  (void)ctx;
  std::vector<double> sups;
  std::string detail;
  for (int m : {40, 80, 160, 320}) {
    const auto eig = hermitian_eigen(toeplitz_matrix(monomer_symbol(2.0, -1.0), m));
    const int s = static_cast<int>(std::lround(0.3 * m));
    sups.push_back(localization_metrics(eig.vectors.col(s - 1)).sup_ratio);
    detail += (detail.empty() ? "" : ", ") + fmt(sups.back());
  }
  bool ok = true;
  for (std::size_t i = 1; i < sups.size(); ++i) ok = ok && sups[i] <= 1.05 * sups[i - 1];
  return outcome(ok, "sup ratios " + detail);
}

std::vector<Check> build_checks() {
  return {
      {"symbol", "hermitian evaluation", symbol_hermitian},
      {"symbol", "bands match closed form", symbol_closed_form},
      {"symbol", "band symmetry", symbol_symmetry},
      {"symbol", "banded truncation bound", symbol_truncation_bound},
      {"symbol", "assumption checks", symbol_assumptions},
      {"matrices", "toeplitz and circulant hermitian", matrices_hermitian},
      {"matrices", "circulant equals toeplitz in interior", matrices_circulant_toeplitz_agree},
      {"matrices", "chain zero row sums and kernel", matrices_chain},
      {"matrices", "ssh symmetric and persymmetric", matrices_ssh},
      {"matrices", "perturbed spectra coincide", matrices_perturbed_spectrum},
      {"matrices", "matrix file round trip", matrices_round_trip},
      {"transform", "unitarity", transform_unitarity},
      {"transform", "dft matches direct sum", transform_direct_oracle},
      {"transform", "linearity", transform_linearity},
      {"transform", "Q phase invariance", transform_phase_invariance},
      {"transform", "Q of circulant eigenvectors", transform_circulant_eigenvectors},
      {"spectra", "decomposition residual and orthonormality", spectra_decomposition},
      {"spectra", "near/far split orthogonal", spectra_near_far},
      {"spectra", "localization metrics", spectra_metrics},
      {"spectra", "ssh gap mode sup ratio", spectra_ssh_sup_ratio},
      {"reconstruct", "circulant exactness", reconstruct_circulant},
      {"reconstruct", "toeplitz bulk error non-increasing", reconstruct_convergence},
      {"reconstruct", "localized set equals gap modes", reconstruct_cross_consistency},
      {"reconstruct", "invariance under re-basing", reconstruct_rebase_invariance},
      {"reconstruct", "gap detection", reconstruct_gaps},
      {"cli", "deterministic output", cli_determinism},
      {"cli", "csv re-parse", cli_csv_reparse},
      {"acceptance", "1 circulant exactness", acc_circulant},
      {"acceptance", "2 even-index exactness", acc_even_index},
      {"acceptance", "3 odd-index convergence", acc_odd_index},
      {"acceptance", "4 exponential symbol", acc_exponential},
      {"acceptance", "5 ssh", acc_ssh},
      {"acceptance", "6 dislocated", acc_dislocated},
      {"acceptance", "7 compact defect", acc_compact},
      {"acceptance", "8 near/far lemma", acc_near_far},
      {"acceptance", "9 unitarity", acc_unitarity},
      {"acceptance", "10 appendix bounds", acc_appendix},
      {"acceptance", "11 delocalisation", acc_delocalisation},
  };
}

}  // namespace

const std::vector<Check>& verification_checks() {
  static const std::vector<Check> checks = build_checks();
  return checks;
}

std::vector<CheckRecord> run_checks(const CheckContext& ctx, const std::vector<std::string>& only) {
  std::vector<CheckRecord> out;
  for (const auto& c : verification_checks()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.group) == only.end()) continue;
    CheckRecord r;
    r.group = c.group;
    r.name = c.name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto o = c.run(ctx);
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("threw: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

void print_check_table(std::ostream& os, const std::vector<CheckRecord>& records) {
  int failed = 0;
  for (const auto& r : records) {
    char head[160];
    std::snprintf(head, sizeof head, "%-4s %-11s %-42s %7.3fs  ", r.passed ? "PASS" : "FAIL", r.group.c_str(),
                  r.name.c_str(), r.seconds);
    os << head << r.detail << '\n';
    failed += !r.passed;
  }
  os << records.size() - failed << " passed, " << failed << " failed\n";
}

}  // namespace floquet
