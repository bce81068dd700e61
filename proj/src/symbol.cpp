#include "floquet/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "floquet/output.hpp"
#include "floquet/transform.hpp"

namespace floquet {

namespace {

constexpr double kHermitianTol = 1e-12;

double block_scale(const CMatrix& a) { return std::max(1.0, a.cwiseAbs().maxCoeff()); }

}  // namespace

void polarize(Eigen::Ref<CVector> v, double threshold) {
  if (v.size() == 0) return;
  Eigen::Index ref = 0;
  if (std::abs(v(0)) < threshold) v.cwiseAbs().maxCoeff(&ref);
  const double mag = std::abs(v(ref));
  if (mag == 0.0) return;
  v *= std::conj(v(ref)) / mag;
  v(ref) = Complex(std::abs(v(ref)), 0.0);
}

double TailModel::tail_bound(int r) const {
  switch (kind) {
    case Kind::geometric:
      // 2 C sum_{s>r} q^s
      return 2.0 * constant * std::pow(rate, r + 1) / (1.0 - rate);
    case Kind::power:
      // Integral bound on 2 C sum_{s>r} s^-p.
      if (r < 1) return std::numeric_limits<double>::infinity();
      return 2.0 * constant * std::pow(static_cast<double>(r), 1.0 - rate) / (rate - 1.0);
  }
  return std::numeric_limits<double>::infinity();
}

Symbol::Symbol(int k, Coefficients coeffs, std::optional<TailModel> tail)
    : k_(k), coeffs_(std::move(coeffs)), tail_(tail) {
  if (k_ < 1) throw std::invalid_argument("symbol block size must be positive");
  for (const auto& [s, a] : coeffs_) {
    if (a.rows() != k_ || a.cols() != k_)
      throw std::invalid_argument("symbol block a_" + std::to_string(s) + " is not k x k");
  }
  for (const auto& [s, a] : coeffs_) {
    auto partner = coeffs_.find(-s);
    if (partner == coeffs_.end())
      throw std::invalid_argument("symbol support is not symmetric at s = " + std::to_string(s));
    const double defect = (partner->second - a.adjoint()).cwiseAbs().maxCoeff();
    if (defect > kHermitianTol * block_scale(a))
      throw std::invalid_argument("symbol is not Hermitian: a_{-s} != a_s^* at s = " +
                                  std::to_string(s));
  }
}

Symbol Symbol::from_nonnegative(int k, const Coefficients& nonnegative,
                                std::optional<TailModel> tail) {
  Coefficients all;
  for (const auto& [s, a] : nonnegative) {
    if (s < 0) throw std::invalid_argument("from_nonnegative expects s >= 0");
    all[s] = a;
    if (s > 0) all[-s] = a.adjoint();
  }
  return Symbol(k, std::move(all), tail);
}

int Symbol::support_radius() const {
  if (coeffs_.empty()) return 0;
  return std::max(std::abs(coeffs_.begin()->first), std::abs(coeffs_.rbegin()->first));
}

CMatrix Symbol::block(int s) const {
  auto it = coeffs_.find(s);
  if (it == coeffs_.end()) return CMatrix::Zero(k_, k_);
  return it->second;
}

CMatrix Symbol::evaluate(double alpha) const {
  CMatrix out = CMatrix::Zero(k_, k_);
  for (const auto& [s, a] : coeffs_) out += a * std::polar(1.0, alpha * s);
  return out;
}

Symbol monomer_symbol(double a0, double a1) {
  Symbol::Coefficients c;
  c[0] = CMatrix::Constant(1, 1, a0);
  if (a1 != 0.0) c[1] = CMatrix::Constant(1, 1, a1);
  return Symbol::from_nonnegative(1, c);
}

Symbol dimer_chain_symbol(double intra, double inter) {
  if (!(intra > 0.0) || !(inter > 0.0))
    throw std::invalid_argument("dimer spacings must be positive");
  const double ci = 1.0 / intra;
  const double ce = 1.0 / inter;
  CMatrix a0(2, 2);
  a0 << ci + ce, -ci, -ci, ci + ce;
  // Left resonator of cell n+1 couples to the right resonator of cell n.
  CMatrix a1 = CMatrix::Zero(2, 2);
  a1(0, 1) = -ce;
  return Symbol::from_nonnegative(2, {{0, a0}, {1, a1}});
}

Symbol exponential_symbol_truncated(int radius) {
  if (radius < 0) throw std::invalid_argument("truncation radius must be nonnegative");
  Symbol::Coefficients c;
  for (int p = 0; p <= radius; ++p) c[p] = CMatrix::Constant(1, 1, -std::ldexp(1.0, -p));
  return Symbol::from_nonnegative(1, c, TailModel{TailModel::Kind::geometric, 0.5, 1.0});
}

Symbol exponential_symbol(double tail_tolerance) {
  const TailModel tail{TailModel::Kind::geometric, 0.5, 1.0};
  int r = 0;
  while (tail.tail_bound(r) >= tail_tolerance) ++r;
  return exponential_symbol_truncated(r);
}

Symbol banded_truncation(const Symbol& sym, int r) {
  if (r < 0) throw std::invalid_argument("truncation radius must be nonnegative");
  Symbol::Coefficients kept;
  for (const auto& [s, a] : sym.coefficients())
    if (std::abs(s) <= r) kept[s] = a;
  return Symbol(sym.k(), std::move(kept), sym.tail_model());
}

namespace {

double spectral_norm_hermitian(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

double symbol_sup_norm(const Symbol& sym, int samples) {
  if (samples < 1) throw std::invalid_argument("samples must be positive");
  double best = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double alpha = -kPi + kTwoPi * j / samples;
    best = std::max(best, spectral_norm_hermitian(sym.evaluate(alpha)));
  }
  return best;
}

double symbol_distance_sup(const Symbol& f, const Symbol& g, int samples) {
  if (f.k() != g.k()) throw std::invalid_argument("symbol block sizes differ");
  if (samples < 1) throw std::invalid_argument("samples must be positive");
  double best = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double alpha = -kPi + kTwoPi * j / samples;
    best = std::max(best, spectral_norm_hermitian(f.evaluate(alpha) - g.evaluate(alpha)));
  }
  return best;
}

// ---------------------------------------------------------------------------

double BandStructure::interpolate(int p, double alpha) const {
  const int m = grid_size();
  if (m == 0) throw std::logic_error("empty band structure");
  // Grid is uniform on [-pi, pi) with alpha_0 = -pi + offset.
  const double h = kTwoPi / m;
  double t = (wrap_angle(alpha) - grid.front()) / h;
  t = std::fmod(t, static_cast<double>(m));
  if (t < 0.0) t += m;
  int lo = static_cast<int>(std::floor(t));
  const double frac = t - lo;
  lo %= m;
  const int hi = (lo + 1) % m;
  return (1.0 - frac) * values(p, lo) + frac * values(p, hi);
}

BandStructure band_functions(const Symbol& sym, int m) {
  if (m < 2) throw std::invalid_argument("band_functions needs a grid of size >= 2");
  const int k = sym.k();
  BandStructure bs;
  bs.k = k;
  bs.grid = brillouin_zone(m).alphas;
  bs.values.resize(k, m);
  bs.derivatives.resize(k, m);
  bs.vectors.resize(m);
  for (int j = 0; j < m; ++j) {
    const CMatrix f = sym.evaluate(bs.grid[j]);
    const double defect = (f - f.adjoint()).cwiseAbs().maxCoeff();
    if (defect > 1e-10 * std::max(1.0, f.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("symbol sample is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(f);
    bs.values.col(j) = es.eigenvalues();
    CMatrix vecs = es.eigenvectors();
    for (int p = 0; p < k; ++p) polarize(vecs.col(p));
    bs.vectors[j] = std::move(vecs);
  }
  const double h = kTwoPi / m;
  for (int p = 0; p < k; ++p) {
    for (int j = 0; j < m; ++j) {
      if (j == 0)
        bs.derivatives(p, j) = (bs.values(p, 1) - bs.values(p, 0)) / h;
      else if (j == m - 1)
        bs.derivatives(p, j) = (bs.values(p, m - 1) - bs.values(p, m - 2)) / h;
      else
        bs.derivatives(p, j) = (bs.values(p, j + 1) - bs.values(p, j - 1)) / (2.0 * h);
    }
  }
  return bs;
}

AssumptionReport check_assumptions(const BandStructure& bs, double van_hove_tol,
                                   const Symbol* sym) {
  AssumptionReport rep;
  const int m = bs.grid_size();

  rep.min_band_separation = std::numeric_limits<double>::infinity();
  for (int p = 0; p + 1 < bs.k; ++p)
    rep.min_band_separation = std::min(rep.min_band_separation, bs.band_min(p + 1) - bs.band_max(p));
  rep.bands_disjoint = rep.min_band_separation > 1e-8;

  rep.min_interior_derivative = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j) {
    const double a = bs.grid[j];
    if (std::abs(a) < 1e-12 || std::abs(std::abs(a) - kPi) < 1e-12) continue;
    for (int p = 0; p < bs.k; ++p)
      rep.min_interior_derivative =
          std::min(rep.min_interior_derivative, std::abs(bs.derivatives(p, j)));
  }
  rep.no_van_hove = rep.min_interior_derivative > van_hove_tol;

  if (sym != nullptr) {
    for (double a : bs.grid) {
      const CMatrix f = sym->evaluate(a);
      rep.max_hermitian_defect =
          std::max(rep.max_hermitian_defect, (f - f.adjoint()).cwiseAbs().maxCoeff());
    }
    rep.hermitian = rep.max_hermitian_defect <= 1e-12 * std::max(1.0, symbol_sup_norm(*sym, 64));
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

CMatrix parse_block(const json& entry, int k) {
  CMatrix a = CMatrix::Zero(k, k);
  const auto fill = [&](const json& rows, bool imag) {
    if (!rows.is_array() || static_cast<int>(rows.size()) != k)
      throw std::runtime_error("symbol block must have k rows");
    for (int i = 0; i < k; ++i) {
      const auto& row = rows[i];
      if (!row.is_array() || static_cast<int>(row.size()) != k)
        throw std::runtime_error("symbol block must have k columns");
      for (int j = 0; j < k; ++j) {
        const double x = row[j].get<double>();
        if (imag)
          a(i, j).imag(x);
        else
          a(i, j).real(x);
      }
    }
  };
  if (!entry.contains("re")) throw std::runtime_error("symbol coefficient lacks \"re\"");
  fill(entry.at("re"), false);
  if (entry.contains("im")) fill(entry.at("im"), true);
  return a;
}

}  // namespace

Symbol symbol_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed symbol JSON: ") + e.what());
  }
  try {
    const int k = doc.at("k").get<int>();
    if (k < 1) throw std::runtime_error("symbol k must be positive");
    Symbol::Coefficients coeffs;
    for (const auto& entry : doc.at("coeffs")) {
      const int s = entry.at("s").get<int>();
      if (coeffs.count(s)) throw std::runtime_error("duplicate coefficient s = " + std::to_string(s));
      coeffs[s] = parse_block(entry, k);
    }
    return Symbol(k, std::move(coeffs));
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("invalid symbol JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("invalid symbol: ") + e.what());
  }
}

std::string symbol_to_json(const Symbol& sym) {
  json doc;
  doc["k"] = sym.k();
  doc["coeffs"] = json::array();
  for (const auto& [s, a] : sym.coefficients()) {
    json re = json::array(), im = json::array();
    for (int i = 0; i < sym.k(); ++i) {
      json rr = json::array(), ir = json::array();
      for (int j = 0; j < sym.k(); ++j) {
        rr.push_back(a(i, j).real());
        ir.push_back(a(i, j).imag());
      }
      re.push_back(rr);
      im.push_back(ir);
    }
    doc["coeffs"].push_back({{"s", s}, {"re", re}, {"im", im}});
  }
  return doc.dump(2);
}

Symbol load_symbol(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open symbol file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return symbol_from_json(ss.str());
}

void write_bands_csv(std::ostream& os, const BandStructure& bs) {
  os << "alpha,band_index,lambda,dlambda\n";
  for (int j = 0; j < bs.grid_size(); ++j) {
    for (int p = 0; p < bs.k; ++p) {
      os << format_number(bs.grid[j]) << ',' << (p + 1) << ',' << format_number(bs.values(p, j))
         << ',' << format_number(bs.derivatives(p, j)) << '\n';
    }
  }
}

}  // namespace floquet
