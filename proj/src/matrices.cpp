#include "floquet/matrices.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace floquet {

std::string to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::toeplitz: return "toeplitz";
    case MatrixKind::circulant: return "circulant";
    case MatrixKind::capacitance1d: return "capacitance1d";
    case MatrixKind::chain: return "chain";
    case MatrixKind::ssh: return "ssh";
    case MatrixKind::dislocated: return "dislocated";
    case MatrixKind::perturbed: return "perturbed";
    case MatrixKind::external: return "external";
  }
  return "unknown";
}

double hermitian_defect(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

FiniteMatrix::FiniteMatrix(CMatrix data, int k, MatrixKind kind, bool hermitian,
                           std::string provenance)
    : data_(std::move(data)), k_(k), kind_(kind), hermitian_(hermitian),
      provenance_(std::move(provenance)) {
  if (data_.rows() != data_.cols()) throw std::invalid_argument("matrix is not square");
  if (k_ < 1) throw std::invalid_argument("block size must be positive");
  if ((kind_ == MatrixKind::toeplitz || kind_ == MatrixKind::circulant) && data_.rows() % k_ != 0)
    throw std::invalid_argument("block matrix size is not a multiple of k");
  if (hermitian_ && hermitian_defect(data_) > 1e-12)
    throw std::invalid_argument("matrix flagged Hermitian but M != M^*");
}

FiniteMatrix toeplitz_matrix(const Symbol& sym, int m) {
  if (m < 1) throw std::invalid_argument("toeplitz_matrix needs m >= 1");
  const int k = sym.k();
  CMatrix t = CMatrix::Zero(m * k, m * k);
  for (const auto& [s, a] : sym.coefficients()) {
    for (int j = 0; j < m; ++j) {
      const int i = j + s;
      if (i >= 0 && i < m) t.block(i * k, j * k, k, k) = a;
    }
  }
  return FiniteMatrix(std::move(t), k, MatrixKind::toeplitz, true,
                      "toeplitz m=" + std::to_string(m) + " k=" + std::to_string(k));
}

FiniteMatrix circulant_matrix(const Symbol& sym, int m) {
  const int r = sym.support_radius();
  if (m <= 2 * r)
    throw std::invalid_argument("circulant_matrix needs m > 2 * support radius (m = " +
                                std::to_string(m) + ", radius = " + std::to_string(r) + ")");
  const int k = sym.k();
  CMatrix c = CMatrix::Zero(m * k, m * k);
  for (const auto& [s, a] : sym.coefficients()) {
    for (int j = 0; j < m; ++j) {
      const int i = ((j + s) % m + m) % m;
      c.block(i * k, j * k, k, k) = a;
    }
  }
  return FiniteMatrix(std::move(c), k, MatrixKind::circulant, true,
                      "circulant m=" + std::to_string(m) + " k=" + std::to_string(k));
}

FiniteMatrix capacitance_1d(double a0, double a1, double am1, int m) {
  if (m < 2) throw std::invalid_argument("capacitance_1d needs m >= 2");
  CMatrix c = CMatrix::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    c(i, i) = a0;
    if (i + 1 < m) {
      c(i, i + 1) = a1;
      c(i + 1, i) = am1;
    }
  }
  c(0, 0) = a0 + am1;
  c(m - 1, m - 1) = a0 + a1;
  const bool herm = hermitian_defect(c) <= 1e-12;
  std::ostringstream prov;
  prov << "capacitance_1d a0=" << a0 << " a1=" << a1 << " am1=" << am1 << " m=" << m;
  return FiniteMatrix(std::move(c), 1, MatrixKind::capacitance1d, herm, prov.str());
}

namespace {

CMatrix chain_data(const std::vector<double>& spacings) {
  if (spacings.empty()) throw std::invalid_argument("chain needs at least one spacing");
  for (double s : spacings)
    if (!(s > 0.0)) throw std::invalid_argument("chain spacings must be positive");
  const auto n = static_cast<Eigen::Index>(spacings.size()) + 1;
  CMatrix c = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double w = 1.0 / spacings[i];
    c(i, i) += w;
    c(i + 1, i + 1) += w;
    c(i, i + 1) = -w;
    c(i + 1, i) = -w;
  }
  return c;
}

}  // namespace

FiniteMatrix chain_capacitance(const std::vector<double>& spacings) {
  return FiniteMatrix(chain_data(spacings), 1, MatrixKind::chain, true,
                      "chain n=" + std::to_string(spacings.size() + 1));
}

std::vector<double> dimer_spacings(double intra, double inter, int dimers) {
  if (dimers < 1) throw std::invalid_argument("need at least one dimer");
  std::vector<double> s;
  s.reserve(2 * dimers - 1);
  for (int i = 0; i < 2 * dimers - 1; ++i) s.push_back(i % 2 == 0 ? intra : inter);
  return s;
}

SshParameters SshParameters::from_spacings(double intra, double inter) {
  if (!(intra > 0.0) || !(inter > 0.0)) throw std::invalid_argument("spacings must be positive");
  SshParameters p;
  p.alpha_tilde = 1.0 / intra;
  p.alpha = 1.0 / intra + 1.0 / inter;
  p.eta = 2.0 / inter;
  p.beta1 = -1.0 / intra;
  p.beta2 = -1.0 / inter;
  return p;
}

FiniteMatrix ssh_matrix(const SshParameters& p, int m) {
  if (m < 1) throw std::invalid_argument("ssh_matrix needs m >= 1");
  const int n = 4 * m + 1;
  const int center = 2 * m;  // 0-based
  CMatrix c = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) c(i, i) = p.alpha;
  c(0, 0) = p.alpha_tilde;
  c(n - 1, n - 1) = p.alpha_tilde;
  c(center, center) = p.eta;
  // Bond i couples sites i and i+1 (0-based); mirror bonds about the defect.
  for (int i = 0; i + 1 < n; ++i) {
    const int from_edge = i < center ? i : n - 2 - i;
    const double b = from_edge % 2 == 0 ? p.beta1 : p.beta2;
    c(i, i + 1) = b;
    c(i + 1, i) = b;
  }
  std::ostringstream prov;
  prov << "ssh m=" << m << " alpha_tilde=" << p.alpha_tilde << " alpha=" << p.alpha
       << " eta=" << p.eta << " beta1=" << p.beta1 << " beta2=" << p.beta2;
  return FiniteMatrix(std::move(c), 1, MatrixKind::ssh, true, prov.str());
}

std::vector<double> dislocated_spacings(double s1, double s2, double d, int dimers_per_side) {
  if (!(s1 > 0.0) || !(s2 > 0.0) || !(d > 0.0))
    throw std::invalid_argument("dislocated chain spacings must be positive");
  if (dimers_per_side < 1) throw std::invalid_argument("need at least one dimer per side");
  std::vector<double> s = dimer_spacings(s1, s2, 2 * dimers_per_side);
  s[2 * (dimers_per_side - 1)] = d;
  return s;
}

FiniteMatrix dislocated_chain(double s1, double s2, double d, int dimers_per_side) {
  const auto s = dislocated_spacings(s1, s2, d, dimers_per_side);
  std::ostringstream prov;
  prov << "dislocated s1=" << s1 << " s2=" << s2 << " d=" << d
       << " dimers_per_side=" << dimers_per_side;
  return FiniteMatrix(chain_data(s), 1, MatrixKind::dislocated, true, prov.str());
}

int center_index(Eigen::Index n) { return static_cast<int>((n + 1) / 2); }

CVector PerturbedMatrix::to_product_eigenvector(const CVector& w) const {
  CVector v = weights.cwiseSqrt().cast<Complex>().cwiseProduct(w);
  return v / v.norm();
}

PerturbedMatrix compact_perturbation(const FiniteMatrix& c, int index, double delta) {
  const Eigen::Index n = c.size();
  if (index < 1 || index > n)
    throw std::invalid_argument("defect index " + std::to_string(index) + " out of range");
  if (!(1.0 + delta > 0.0)) throw std::invalid_argument("compact perturbation needs delta > -1");
  if (!c.hermitian()) throw std::invalid_argument("compact perturbation needs a Hermitian matrix");
  RVector w = RVector::Ones(n);
  w(index - 1) += delta;
  const CVector sq = w.cwiseSqrt().cast<Complex>();
  CMatrix product = w.cast<Complex>().asDiagonal() * c.data();
  CMatrix sym = sq.asDiagonal() * c.data() * sq.asDiagonal();
  // Restore exact symmetry lost to rounding in the two-sided scaling.
  sym = 0.5 * (sym + sym.adjoint()).eval();
  std::ostringstream prov;
  prov << c.provenance() << " | defect index=" << index << " delta=" << delta;
  return PerturbedMatrix{
      FiniteMatrix(std::move(product), c.k(), MatrixKind::perturbed, false, prov.str()),
      FiniteMatrix(std::move(sym), c.k(), MatrixKind::perturbed, true, prov.str() + " symmetrized"),
      std::move(w), index, delta};
}

}  // namespace floquet
