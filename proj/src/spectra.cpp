#include "floquet/spectra.hpp"

#include <cmath>
#include <stdexcept>

#include "floquet/transform.hpp"

namespace floquet {

EigenDecomposition hermitian_eigen(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigendecomposition of a non-square matrix");
  EigenDecomposition out;
  out.source_dim = m.rows();
  if (m.rows() == 0) return out;
  if (hermitian_defect(m) > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("hermitian_eigen: matrix is not Hermitian");

  if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
    const Eigen::MatrixXd re = m.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(re);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
  }
  for (Eigen::Index i = 0; i < out.vectors.cols(); ++i) polarize(out.vectors.col(i));
  return out;
}

EigenDecomposition hermitian_eigen(const FiniteMatrix& m) {
  if (!m.hermitian()) throw std::invalid_argument("hermitian_eigen: matrix is not flagged Hermitian");
  return hermitian_eigen(m.data());
}

EigenDecomposition perturbed_eigen(const PerturbedMatrix& p) {
  EigenDecomposition eig = hermitian_eigen(p.symmetrized);
  for (Eigen::Index i = 0; i < eig.vectors.cols(); ++i) {
    CVector v = p.to_product_eigenvector(eig.vectors.col(i));
    polarize(v);
    eig.vectors.col(i) = v;
  }
  return eig;
}

double residual(const CMatrix& m, double lambda, const CVector& u) {
  if (m.cols() != u.size() || m.rows() != m.cols())
    throw std::invalid_argument("residual: dimension mismatch");
  return (m * u - lambda * u).norm();
}

double residual(const FiniteMatrix& m, double lambda, const CVector& u) {
  return residual(m.data(), lambda, u);
}

NearFarSplit near_far_split(const EigenDecomposition& eig, double center, double eps,
                            const CVector& u) {
  if (!(eps > 0.0)) throw std::invalid_argument("near_far_split needs eps > 0");
  if (u.size() != eig.vectors.rows()) throw std::invalid_argument("near_far_split: dimension mismatch");
  NearFarSplit out;
  out.epsilon = eps;
  out.center = center;
  out.u_parallel = CVector::Zero(u.size());
  out.u_perp = CVector::Zero(u.size());
  const CVector coeffs = eig.vectors.adjoint() * u;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    const CVector part = coeffs(i) * eig.vectors.col(i);
    if (std::abs(eig.values(i) - center) <= eps)
      out.u_parallel += part;
    else
      out.u_perp += part;
  }
  return out;
}

double concentration_window(double eps, double band_derivative) {
  if (band_derivative == 0.0) throw std::invalid_argument("window undefined at a van Hove point");
  return 4.0 * eps / std::abs(band_derivative);
}

Concentration concentration_check(const CVector& u, int k, double alpha0, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("concentration_check needs delta > 0");
  const auto profile = projection_profile(u, k);
  const int m = static_cast<int>(profile.size());
  double total = 0.0;
  Concentration c;
  for (int j = 0; j < m; ++j) {
    const double a = bin_alpha(j, m);
    const bool inside = std::abs(wrap_angle(a - alpha0)) < delta || std::abs(wrap_angle(a + alpha0)) < delta;
    (inside ? c.mass_in : c.mass_out) += profile[j];
    total += profile[j];
  }
  if (total > 0.0) {
    c.mass_in /= total;
    c.mass_out /= total;
  }
  return c;
}

LocalizationMetrics localization_metrics(const CVector& u) {
  const double n2 = u.squaredNorm();
  if (n2 == 0.0) throw std::invalid_argument("localization metrics of a zero vector");
  LocalizationMetrics out;
  out.sup_ratio = u.cwiseAbs().maxCoeff() / std::sqrt(n2);
  out.ipr = u.cwiseAbs2().array().square().sum() / (n2 * n2);
  return out;
}

}  // namespace floquet
