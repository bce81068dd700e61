#pragma once

#include "floquet/matrices.hpp"
#include "floquet/types.hpp"

namespace floquet {

/// Ascending eigenvalues with orthonormal eigenvectors; column i pairs with value i.
struct EigenDecomposition {
  RVector values;
  CMatrix vectors;
  Eigen::Index source_dim = 0;

  Eigen::Index size() const { return values.size(); }
  CVector vector(Eigen::Index i) const { return vectors.col(i); }
};

/// Full Hermitian eigendecomposition. Every eigenvector is polarized.
/// Throws std::invalid_argument unless m.hermitian().
EigenDecomposition hermitian_eigen(const FiniteMatrix& m);
EigenDecomposition hermitian_eigen(const CMatrix& m);

/// Eigenpairs of B C recovered through the symmetrized form; vectors are the
/// unit eigenvectors of B C (not mutually orthogonal in general).
EigenDecomposition perturbed_eigen(const PerturbedMatrix& p);

/// ||M u - lambda u||. Throws std::invalid_argument on dimension mismatch.
double residual(const FiniteMatrix& m, double lambda, const CVector& u);
double residual(const CMatrix& m, double lambda, const CVector& u);

struct NearFarSplit {
  CVector u_parallel;
  CVector u_perp;
  double epsilon = 0.0;
  double center = 0.0;
};

/// Orthogonal projections of u onto E_eps = span{v_i : |lambda_i - center| <= eps}
/// and onto its complement.
NearFarSplit near_far_split(const EigenDecomposition& eig, double center, double eps,
                            const CVector& u);

struct Concentration {
  double mass_in = 0.0;
  double mass_out = 0.0;
};

/// T^j mass of u inside the window (alpha0 - delta, alpha0 + delta) union
/// (-alpha0 - delta, -alpha0 + delta) on Y*_m, and outside it. Distances are
/// measured on the circle.
Concentration concentration_check(const CVector& u, int k, double alpha0, double delta);

/// Window width 4 eps / |lambda'(alpha0)|.
double concentration_window(double eps, double band_derivative);

struct LocalizationMetrics {
  double sup_ratio = 0.0;  // ||u||_inf / ||u||_2
  double ipr = 0.0;        // sum |u_i|^4 / ||u||^4
};

LocalizationMetrics localization_metrics(const CVector& u);

}  // namespace floquet
