#include "floquet/reconstruct.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "floquet/transform.hpp"

namespace floquet {

namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Each index is handled
// exactly once and results are written by index, so output order is fixed.
template <typename Fn>
void parallel_for(Eigen::Index n, int jobs, Fn&& fn) {
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (workers == 1) {
    for (Eigen::Index i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<Eigen::Index> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (Eigen::Index i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ErrorStats stats_of(std::vector<double> v) {
  ErrorStats s;
  s.count = static_cast<int>(v.size());
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  s.max = v.back();
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / v.size();
  s.median = median_of(v);
  const auto rank = static_cast<std::size_t>(std::ceil(0.9 * v.size()));
  s.q90 = v[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

}  // namespace

std::vector<ReconstructionPoint> reconstruct_from_eigen(const EigenDecomposition& eig, int k,
                                                        const ReconstructOptions& opt) {
  if (k < 1) throw std::invalid_argument("block size must be positive");
  const Eigen::Index n = eig.size();
  std::vector<ReconstructionPoint> points(n);
  parallel_for(n, opt.jobs, [&](Eigen::Index i) {
    CVector u = eig.vectors.col(i);
    u /= u.norm();
    const auto metrics = localization_metrics(u);
    auto& p = points[i];
    p.index = static_cast<int>(i);
    p.lambda = eig.values(i);
    p.alpha_est = discrete_quasiperiodicity(zero_pad(u, k), k);
    p.sup_ratio = metrics.sup_ratio;
    p.ipr = metrics.ipr;
  });
  std::vector<double> iprs;
  iprs.reserve(n);
  for (const auto& p : points) iprs.push_back(p.ipr);
  const double med = median_of(iprs);
  for (auto& p : points) p.localized = p.ipr > opt.ipr_factor * med;
  return points;
}

std::vector<ReconstructionPoint> reconstruct_bands(const FiniteMatrix& m, int k,
                                                   const ReconstructOptions& opt) {
  return reconstruct_from_eigen(hermitian_eigen(m), k, opt);
}

std::vector<ReconstructionPoint> reconstruct_bands(const PerturbedMatrix& m, int k,
                                                   const ReconstructOptions& opt) {
  return reconstruct_from_eigen(perturbed_eigen(m), k, opt);
}

double edge_exclusion_width(int cells) {
  if (cells < 1) throw std::invalid_argument("cell count must be positive");
  return kTwoPi * 4.0 / cells;
}

ComparisonReport compare_to_symbol(std::vector<ReconstructionPoint>& points,
                                   const BandStructure& bs, int cells) {
  if (points.empty()) throw std::invalid_argument("compare_to_symbol: no points");
  if (bs.grid_size() == 0 || bs.k == 0) throw std::invalid_argument("compare_to_symbol: empty bands");
  ComparisonReport rep;
  rep.edge_exclusion = edge_exclusion_width(cells);
  std::vector<double> deloc, bulk, loc;
  for (auto& p : points) {
    double best = std::numeric_limits<double>::infinity();
    for (int b = 0; b < bs.k; ++b) best = std::min(best, std::abs(p.lambda - bs.interpolate(b, p.alpha_est)));
    p.band_error = best;
    if (p.localized) {
      loc.push_back(best);
      continue;
    }
    deloc.push_back(best);
    if (p.alpha_est > rep.edge_exclusion && p.alpha_est < kPi - rep.edge_exclusion) bulk.push_back(best);
  }
  rep.delocalized = stats_of(std::move(deloc));
  rep.bulk = stats_of(std::move(bulk));
  rep.localized = stats_of(std::move(loc));
  return rep;
}

double default_gap_margin(const BandStructure& bs) {
  if (bs.grid_size() == 0) return 0.0;
  return 1e-6 * (bs.values.maxCoeff() - bs.values.minCoeff());
}

GapReport detect_gaps(const BandStructure& bs, const RVector& eigenvalues, double margin,
                      const std::vector<ReconstructionPoint>* points) {
  if (margin < 0.0) throw std::invalid_argument("gap margin must be nonnegative");
  GapReport rep;
  for (int p = 0; p + 1 < bs.k; ++p) {
    const double lo = bs.band_max(p) + margin;
    const double hi = bs.band_min(p + 1) - margin;
    if (lo < hi) rep.gaps.emplace_back(lo, hi);
  }
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double l = eigenvalues(i);
    for (const auto& [lo, hi] : rep.gaps) {
      if (l > lo && l < hi) {
        GapMode g;
        g.index = static_cast<int>(i);
        g.lambda = l;
        if (points && i < static_cast<Eigen::Index>(points->size())) g.alpha_est = (*points)[i].alpha_est;
        rep.gap_modes.push_back(g);
        break;
      }
    }
  }
  return rep;
}

EigenDecomposition tridiagonal_eigenpairs_oracle(double a0, double a1, int m) {
  if (m < 1) throw std::invalid_argument("tridiagonal oracle needs m >= 1");
  struct Pair {
    double value;
    int s;
  };
  std::vector<Pair> pairs;
  for (int s = 1; s <= m; ++s) pairs.push_back({a0 + 2.0 * a1 * std::cos(s * kPi / (m + 1)), s});
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.value < b.value; });
  EigenDecomposition out;
  out.source_dim = m;
  out.values.resize(m);
  out.vectors.resize(m, m);
  const double kappa = std::sqrt(2.0 / (m + 1));
  for (int c = 0; c < m; ++c) {
    out.values(c) = pairs[c].value;
    for (int q = 1; q <= m; ++q) out.vectors(q - 1, c) = kappa * std::sin(q * pairs[c].s * kPi / (m + 1));
  }
  return out;
}

CVector dirichlet_extension(const CVector& u) {
  CVector out = CVector::Zero(u.size() + 1);
  out.tail(u.size()) = u;
  return out;
}

}  // namespace floquet
