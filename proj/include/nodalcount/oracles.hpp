// Closed-form identities and Monte Carlo estimators for edge-sign statistics
// of orthogonally invariant matrices.
//
// For a fixed normalized spectrum lambda and eigenvector index k, the sign
// statistic of the edge between rows x and y of a Haar matrix is
//
//   M(x, y) = x_k y_k * sum_j lambda_j x_j y_j,
//
// which is A_xy times the product of the k-th eigenvector entries. All
// estimators split their N samples into fixed-size chunks; chunk c draws from
// its own stream and the partial results are merged in chunk order, so the
// estimate does not depend on the worker count.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "nodalcount/ensembles.hpp"
#include "nodalcount/error.hpp"
#include "nodalcount/nodal.hpp"
#include "nodalcount/parallel.hpp"
#include "nodalcount/sampling.hpp"
#include "nodalcount/spectral.hpp"
#include "nodalcount/stats.hpp"

namespace nodalcount {

/// Leading coefficient 2^{3/2} / pi^{3/2} of the edge-sign mean.
inline const double kEdgeMeanCoefficient = std::pow(2.0, 1.5) / std::pow(std::numbers::pi, 1.5);

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t count = 0;
  std::uint64_t resampled = 0;
};

/// Where an estimator gets its randomness: the run seed, a salt that keeps
/// repeated calls with identical arguments apart, and the thread count.
struct McRun {
  SeedPlan plan;
  std::uint32_t salt = 0;
  int workers = 1;
};

/// E[sgn X sgn Y] = (2/pi) arcsin(rho) for unit-variance Gaussians with
/// correlation rho.
inline double sheppard(double rho) {
  if (!(std::abs(rho) <= 1.0)) throw InvalidInput("sheppard: |rho| must be <= 1");
  return 2.0 / std::numbers::pi * std::asin(rho);
}

namespace detail {

inline constexpr std::uint64_t kChunkSize = 1u << 14;

enum class McTag : std::uint16_t {
  SignCorrelation = 1,
  QuadformSign = 2,
  AdjacentCov = 3,
  NonAdjacentCov = 4,
  NonAdjacentIndependent = 5,
  VarianceDirect = 6,
  Concentration = 7,
};

inline RngStream chunk_stream(const McRun& run, McTag tag, std::uint64_t n, std::uint64_t chunk) {
  const auto purpose = static_cast<std::uint16_t>((static_cast<std::uint32_t>(tag) & 0xFFu) |
                                                  ((run.salt & 0xFFu) << 8));
  // Salt bits beyond the low byte go into the chunk index's high bits.
  const std::uint64_t index = chunk | (std::uint64_t{run.salt >> 8} << 24);
  return derive_stream(run.plan, stream_key(purpose, n, index));
}

struct ChunkMean {
  MomentAccumulator acc;
  std::uint64_t resampled = 0;
};

template <typename Sampler>
MCEstimate chunked_mean(std::uint64_t samples, const McRun& run, McTag tag, std::uint64_t n,
                        Sampler&& sampler) {
  if (samples < 1) throw InvalidInput("Monte Carlo estimate needs N >= 1");
  const std::uint64_t chunks = (samples + kChunkSize - 1) / kChunkSize;
  auto parts = parallel_map(chunks, run.workers, [&](std::size_t c) {
    RngStream stream = chunk_stream(run, tag, n, c);
    const std::uint64_t begin = c * kChunkSize;
    const std::uint64_t end = std::min(samples, begin + kChunkSize);
    ChunkMean part;
    for (std::uint64_t s = begin; s < end; ++s) {
      for (;;) {
        const double v = sampler(stream);
        if (v != 0.0) {
          part.acc.add(v);
          break;
        }
        ++part.resampled;
      }
    }
    return part;
  });
  MomentAccumulator total;
  std::uint64_t resampled = 0;
  for (const auto& p : parts) {
    total.merge(p.acc);
    resampled += p.resampled;
  }
  return {total.mean(), total.standard_error(), total.count(), resampled};
}

inline double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

inline void check_k(const Vector& lambdas, Eigen::Index k) {
  if (lambdas.size() < 2) throw InvalidDimension("estimator needs n >= 2");
  if (k < 1 || k > lambdas.size()) throw IndexError("estimator: k must be in 1..n");
}

}  // namespace detail

/// M(x, y) = x_k y_k <diag(lambda) x, y>, k 1-based.
inline double edge_statistic(const Vector& lambdas, Eigen::Index k, const Eigen::Ref<const Vector>& x,
                             const Eigen::Ref<const Vector>& y) {
  return x[k - 1] * y[k - 1] * (lambdas.array() * x.array() * y.array()).sum();
}

inline MCEstimate mc_sign_correlation(double rho, std::uint64_t samples, const McRun& run) {
  if (!(std::abs(rho) < 1.0)) throw InvalidInput("mc_sign_correlation: |rho| must be < 1");
  const double c = std::sqrt(1.0 - rho * rho);
  return detail::chunked_mean(samples, run, detail::McTag::SignCorrelation, 0, [&](RngStream& s) {
    const double x = s.normal();
    const double y = rho * x + c * s.normal();
    return detail::sign_of(x) * detail::sign_of(y);
  });
}

/// E[sgn(<P u, u_hat> <B u, u_hat>)] for P = e_k e_k^T, B = diag(lambdas) and
/// (u, u_hat) the first two columns of a Haar matrix, built from two Gaussian
/// vectors. Expected value ~ kEdgeMeanCoefficient * lambda_k / sqrt(n).
inline MCEstimate mc_quadform_sign(const Vector& lambdas, Eigen::Index k, std::uint64_t samples,
                                   const McRun& run) {
  detail::check_k(lambdas, k);
  const Eigen::Index n = lambdas.size();
  return detail::chunked_mean(samples, run, detail::McTag::QuadformSign,
                              static_cast<std::uint64_t>(n), [&](RngStream& s) {
                                const Vector g = sample_gaussian_vector(n, s);
                                const Vector g_hat = sample_gaussian_vector(n, s);
                                const auto [u, u_hat] = haar_pair_from_gaussians(g, g_hat);
                                return detail::sign_of(edge_statistic(lambdas, k, u, u_hat));
                              });
}

/// Mean sign of a single edge, sgn(M_12). Same estimator as mc_quadform_sign.
inline MCEstimate mc_edge_mean(const Vector& lambdas, Eigen::Index k, std::uint64_t samples,
                               const McRun& run) {
  return mc_quadform_sign(lambdas, k, samples, run);
}

/// Sample covariance of two +-1 variables with a delta-method standard error
/// (influence function (X - mx)(Y - my) - cov).
struct CovEstimate {
  double cov = 0.0;
  double std_error = 0.0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  double mean_xy = 0.0;
  std::uint64_t count = 0;
  std::uint64_t resampled = 0;
};

namespace detail {

/// Raw power sums of (X, Y); exact for +-1 data, mergeable by addition.
struct PairSums {
  double n = 0, x = 0, y = 0, xy = 0, xx = 0, yy = 0, xxy = 0, xyy = 0, xxyy = 0;
  std::uint64_t resampled = 0;

  void add(double a, double b) {
    n += 1;
    x += a;
    y += b;
    xy += a * b;
    xx += a * a;
    yy += b * b;
    xxy += a * a * b;
    xyy += a * b * b;
    xxyy += a * a * b * b;
  }

  void merge(const PairSums& o) {
    n += o.n;
    x += o.x;
    y += o.y;
    xy += o.xy;
    xx += o.xx;
    yy += o.yy;
    xxy += o.xxy;
    xyy += o.xyy;
    xxyy += o.xxyy;
    resampled += o.resampled;
  }

  CovEstimate estimate() const {
    CovEstimate e;
    e.count = static_cast<std::uint64_t>(n);
    e.resampled = resampled;
    if (n < 1) return e;
    const double mx = x / n;
    const double my = y / n;
    e.mean_x = mx;
    e.mean_y = my;
    e.mean_xy = xy / n;
    e.cov = e.mean_xy - mx * my;
    // E[((X - mx)(Y - my))^2] expanded in raw moments.
    const double ez2 = xxyy / n + my * my * xx / n + mx * mx * yy / n - 2.0 * my * xxy / n -
                       2.0 * mx * xyy / n + 4.0 * mx * my * xy / n - 3.0 * mx * mx * my * my;
    const double var_psi = std::max(0.0, ez2 - e.cov * e.cov);
    e.std_error = n > 1 ? std::sqrt(var_psi / (n - 1.0)) : 0.0;
    return e;
  }
};

/// Draws (X, Y) pairs from `sampler`, which returns false when a draw hit a
/// zero sign and has to be repeated.
template <typename Sampler>
CovEstimate chunked_cov(std::uint64_t samples, const McRun& run, McTag tag, std::uint64_t n,
                        Sampler&& sampler) {
  if (samples < 2) throw InvalidInput("covariance estimate needs N >= 2");
  const std::uint64_t chunks = (samples + kChunkSize - 1) / kChunkSize;
  auto parts = parallel_map(chunks, run.workers, [&](std::size_t c) {
    RngStream stream = chunk_stream(run, tag, n, c);
    const std::uint64_t begin = c * kChunkSize;
    const std::uint64_t end = std::min(samples, begin + kChunkSize);
    PairSums part;
    for (std::uint64_t s = begin; s < end; ++s) {
      double a = 0.0;
      double b = 0.0;
      while (!sampler(stream, a, b)) ++part.resampled;
      part.add(a, b);
    }
    return part;
  });
  PairSums total;
  for (const auto& p : parts) total.merge(p);
  return total.estimate();
}

}  // namespace detail

/// Cov(sgn M_13, sgn M_23): two edges sharing a vertex, from the first three
/// columns of a Haar matrix.
inline CovEstimate mc_adjacent_cov(const Vector& lambdas, Eigen::Index k, std::uint64_t samples,
                                   const McRun& run) {
  detail::check_k(lambdas, k);
  const Eigen::Index n = lambdas.size();
  if (n < 3) throw InvalidDimension("mc_adjacent_cov needs n >= 3");
  return detail::chunked_cov(samples, run, detail::McTag::AdjacentCov, static_cast<std::uint64_t>(n),
                             [&](RngStream& s, double& a, double& b) {
                               const Matrix f = sample_haar_frame(n, 3, s);
                               a = detail::sign_of(edge_statistic(lambdas, k, f.col(0), f.col(2)));
                               b = detail::sign_of(edge_statistic(lambdas, k, f.col(1), f.col(2)));
                               return a != 0.0 && b != 0.0;
                             });
}

/// Cov(sgn M_12, sgn M_34): two disjoint edges, from the first four columns
/// of a Haar matrix. With `independent_pairs` the two edges come from two
/// separate Haar matrices instead, so the true covariance is exactly zero.
inline CovEstimate mc_nonadjacent_cov(const Vector& lambdas, Eigen::Index k, std::uint64_t samples,
                                      const McRun& run, bool independent_pairs = false) {
  detail::check_k(lambdas, k);
  const Eigen::Index n = lambdas.size();
  if (n < 4) throw InvalidDimension("mc_nonadjacent_cov needs n >= 4");
  const auto tag = independent_pairs ? detail::McTag::NonAdjacentIndependent : detail::McTag::NonAdjacentCov;
  return detail::chunked_cov(samples, run, tag, static_cast<std::uint64_t>(n),
                             [&](RngStream& s, double& a, double& b) {
                               if (independent_pairs) {
                                 const Matrix f1 = sample_haar_frame(n, 2, s);
                                 const Matrix f2 = sample_haar_frame(n, 2, s);
                                 a = detail::sign_of(edge_statistic(lambdas, k, f1.col(0), f1.col(1)));
                                 b = detail::sign_of(edge_statistic(lambdas, k, f2.col(0), f2.col(1)));
                               } else {
                                 const Matrix f = sample_haar_frame(n, 4, s);
                                 a = detail::sign_of(edge_statistic(lambdas, k, f.col(0), f.col(1)));
                                 b = detail::sign_of(edge_statistic(lambdas, k, f.col(2), f.col(3)));
                               }
                               return a != 0.0 && b != 0.0;
                             });
}

/// Weights of Var(phi) = w_var Var(sgn M_12) + w_adj Cov(adjacent)
/// + w_disjoint Cov(disjoint): ordered pairs of edges, each scaled by 1/4.
struct DecompositionWeights {
  double variance = 0.0;
  double adjacent = 0.0;
  double disjoint = 0.0;
};

inline DecompositionWeights decomposition_weights(Eigen::Index n) {
  const double pairs = detail::pairs_of(n);
  const double m = static_cast<double>(n);
  const double disjoint_pairs = n >= 4 ? (m - 2.0) * (m - 3.0) / 2.0 : 0.0;
  return {0.25 * pairs, 0.5 * (m - 2.0) * pairs, 0.25 * pairs * disjoint_pairs};
}

struct VarianceDecompositionReport {
  Eigen::Index n = 0;
  Eigen::Index k = 0;
  double direct_var = 0.0;
  double direct_stderr = 0.0;
  std::uint64_t direct_replicates = 0;
  std::uint64_t nongeneric = 0;
  MCEstimate edge_mean;
  CovEstimate adjacent;
  CovEstimate disjoint;
  double decomposed_var = 0.0;
  double decomposed_stderr = 0.0;

  double gap() const { return std::abs(direct_var - decomposed_var); }
  double combined_stderr() const { return std::hypot(direct_stderr, decomposed_stderr); }
  bool agrees(double sigmas = 5.0) const { return gap() <= sigmas * combined_stderr(); }
};

/// Compares Var(phi(A,k)) over `replicates` full samples A = Phi diag(lambdas)
/// Phi^T with the three-term decomposition built from the edge estimators
/// (each run with `mc_samples` draws). lambdas must be sorted ascending.
inline VarianceDecompositionReport variance_decomposition_check(const Vector& lambdas, Eigen::Index k,
                                                                std::uint64_t replicates,
                                                                std::uint64_t mc_samples,
                                                                const McRun& run) {
  detail::check_k(lambdas, k);
  const Eigen::Index n = lambdas.size();
  VarianceDecompositionReport rep;
  rep.n = n;
  rep.k = k;

  struct Direct {
    double count = 0.0;
    bool generic = false;
  };
  auto direct = parallel_map(replicates, run.workers, [&](std::size_t r) {
    RngStream s = detail::chunk_stream(run, detail::McTag::VarianceDirect, static_cast<std::uint64_t>(n), r);
    const Matrix phi = sample_haar_orthogonal(n, s);
    const SymMatrix a = conjugate_diagonal(phi, lambdas);
    const NodalCount c = nodal_count(a, symmetric_eigen(a), k);
    return Direct{static_cast<double>(c.count), c.generic};
  });
  MomentAccumulator acc;
  std::vector<double> kept;
  kept.reserve(direct.size());
  for (const auto& d : direct) {
    if (!d.generic) {
      ++rep.nongeneric;
      continue;
    }
    acc.add(d.count);
    kept.push_back(d.count);
  }
  rep.direct_replicates = acc.count();
  rep.direct_var = acc.variance();
  double m4 = 0.0;
  for (double v : kept) m4 += std::pow(v - acc.mean(), 4);
  if (!kept.empty()) {
    m4 /= static_cast<double>(kept.size());
    rep.direct_stderr =
        std::sqrt(std::max(0.0, m4 - rep.direct_var * rep.direct_var) / static_cast<double>(kept.size()));
  }

  const DecompositionWeights w = decomposition_weights(n);
  rep.edge_mean = mc_edge_mean(lambdas, k, mc_samples, run);
  const double m = rep.edge_mean.mean;
  double value = w.variance * (1.0 - m * m);
  double var_of_value = std::pow(w.variance * 2.0 * m * rep.edge_mean.std_error, 2);
  if (n >= 3) {
    rep.adjacent = mc_adjacent_cov(lambdas, k, mc_samples, run);
    value += w.adjacent * rep.adjacent.cov;
    var_of_value += std::pow(w.adjacent * rep.adjacent.std_error, 2);
  }
  if (n >= 4) {
    rep.disjoint = mc_nonadjacent_cov(lambdas, k, mc_samples, run);
    value += w.disjoint * rep.disjoint.cov;
    var_of_value += std::pow(w.disjoint * rep.disjoint.std_error, 2);
  }
  rep.decomposed_var = value;
  rep.decomposed_stderr = std::sqrt(var_of_value);
  return rep;
}

/// Supplies the Gaussian-like vectors examined by the concentration check.
using VectorSource = std::function<Vector(Eigen::Index)>;

struct ConcentrationReport {
  bool passed = true;
  double band = 0.0;
  double worst = 0.0;  // largest observed statistic over all trials
};

/// Over `trials` pairs (g, g_hat) from `source`, checks that |<g,g> - n|,
/// |<g,g_hat>|, |<g, diag(l) g>| and |<g, diag(l) g_hat>| all stay below
/// 10 sqrt(n) log(n)^2.
inline ConcentrationReport quadform_concentration_check(const Vector& lambdas, int trials,
                                                        const VectorSource& source) {
  const Eigen::Index n = lambdas.size();
  if (n < 2) throw InvalidDimension("concentration check needs n >= 2");
  const double nd = static_cast<double>(n);
  ConcentrationReport rep;
  rep.band = 10.0 * std::sqrt(nd) * std::pow(std::log(nd), 2);
  for (int t = 0; t < trials; ++t) {
    const Vector g = source(n);
    const Vector g_hat = source(n);
    const double stats[] = {std::abs(g.squaredNorm() - nd), std::abs(g.dot(g_hat)),
                            std::abs((lambdas.array() * g.array() * g.array()).sum()),
                            std::abs((lambdas.array() * g.array() * g_hat.array()).sum())};
    for (double v : stats) {
      rep.worst = std::max(rep.worst, v);
      if (!(v <= rep.band)) rep.passed = false;
    }
  }
  return rep;
}

inline ConcentrationReport quadform_concentration_check(const Vector& lambdas, int trials, const McRun& run) {
  RngStream s = detail::chunk_stream(run, detail::McTag::Concentration,
                                     static_cast<std::uint64_t>(lambdas.size()), 0);
  return quadform_concentration_check(lambdas, trials,
                                      [&](Eigen::Index n) { return sample_gaussian_vector(n, s); });
}

}  // namespace nodalcount
