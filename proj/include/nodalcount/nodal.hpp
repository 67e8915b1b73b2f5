// Nodal counts of eigenvectors on the signed weighted graph of a symmetric
// matrix, plus surplus, normalizations, Betti number and genericity.
//
// The graph G of A has an edge (i,j), i<j, whenever |A_ij| > edge_tol. The
// k-th nodal count is the number of edges with A_ij * v_i * v_j > 0 where v
// is the k-th eigenvector (eigenvalues ascending). Pairs that are not edges
// never contribute.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "nodalcount/error.hpp"
#include "nodalcount/spectral.hpp"

namespace nodalcount {

struct NodalOptions {
  /// Relative threshold: an eigenvector entry is "zero" if
  /// |v_i| <= zero_tol * |v|_inf. Edge entries are exact inputs and a
  /// floating-point product keeps its sign, so an edge product only breaks
  /// genericity when it is exactly zero (underflow).
  double zero_tol = 1e-12;
  double edge_tol = 0.0;
  /// Eigenvalues closer than gap_tol * max(1, |lambda|_inf) count as tied.
  double gap_tol = 1e-10;
};

struct GraphStructure {
  Eigen::Index n = 0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;
  Eigen::Index components = 0;

  /// First Betti number |E| - n + components.
  std::int64_t betti() const {
    return static_cast<std::int64_t>(edges.size()) - n + components;
  }
  bool connected() const { return components == 1; }
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns true if x and y were in different sets.
  bool unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (rank_[x] < rank_[y]) std::swap(x, y);
    parent_[y] = x;
    if (rank_[x] == rank_[y]) ++rank_[x];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
};

inline double pairs_of(Eigen::Index n) {
  const double m = static_cast<double>(n);
  return m * (m - 1.0) / 2.0;
}

}  // namespace detail

inline GraphStructure graph_of(const SymMatrix& a, double edge_tol = 0.0) {
  if (!(edge_tol >= 0.0)) throw InvalidInput("edge_tol must be >= 0");
  GraphStructure g;
  g.n = a.n();
  g.components = a.n();
  detail::UnionFind uf(static_cast<std::size_t>(a.n()));
  for (Eigen::Index j = 0; j < a.n(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (std::abs(a(i, j)) > edge_tol) {
        g.edges.emplace_back(i, j);
        if (uf.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) --g.components;
      }
    }
  }
  return g;
}

struct NodalCount {
  std::int64_t count = 0;
  bool generic = true;
  /// min |A_ij v_i v_j| / (|A|_max |v|_inf^2) over edges; +inf without edges.
  double min_product_magnitude = std::numeric_limits<double>::infinity();
};

namespace detail {

inline bool is_complete_graph(const Matrix& m, double edge_tol) {
  for (Eigen::Index j = 1; j < m.cols(); ++j)
    if (!(m.col(j).head(j).cwiseAbs().array() > edge_tol).all()) return false;
  return true;
}

/// Number of edges with A_ij v_i v_j > 0 and the smallest |A_ij v_i v_j|.
/// The complete-graph path is branch-free so it vectorizes.
inline std::pair<std::int64_t, double> count_positive_products(const Matrix& m,
                                                               const Eigen::Ref<const Vector>& v,
                                                               double edge_tol, bool complete) {
  std::int64_t count = 0;
  double min_product = std::numeric_limits<double>::infinity();
  const Eigen::Index n = m.rows();
  for (Eigen::Index j = 1; j < n; ++j) {
    const double vj = v[j];
    if (complete) {
      const auto p = m.col(j).head(j).array() * v.head(j).array() * vj;
      count += (p > 0.0).count();
      min_product = std::min(min_product, p.abs().minCoeff());
      continue;
    }
    for (Eigen::Index i = 0; i < j; ++i) {
      const double aij = m(i, j);
      if (!(std::abs(aij) > edge_tol)) continue;
      const double p = aij * v[i] * vj;
      if (p > 0.0) ++count;
      min_product = std::min(min_product, std::abs(p));
    }
  }
  return {count, min_product};
}

inline void finish_products(NodalCount& out, double min_product, double product_scale) {
  if (!std::isfinite(min_product)) return;
  if (min_product == 0.0) out.generic = false;
  if (product_scale > 0.0) out.min_product_magnitude = min_product / product_scale;
}

/// Genericity of eigenvector k apart from the edge products.
inline bool entries_and_gaps_generic(const Spectrum& spec, Eigen::Index k, const NodalOptions& opts) {
  const Eigen::Index n = spec.lambdas.size();
  const auto col = spec.vectors.col(k - 1);
  const double v_inf = col.cwiseAbs().maxCoeff();
  if ((col.cwiseAbs().array() <= opts.zero_tol * v_inf).any()) return false;
  const double lam_inf = std::max(1.0, spec.lambdas.cwiseAbs().maxCoeff());
  const double gap_limit = opts.gap_tol * lam_inf;
  if (k > 1 && spec.lambdas[k - 1] - spec.lambdas[k - 2] <= gap_limit) return false;
  if (k < n && spec.lambdas[k] - spec.lambdas[k - 1] <= gap_limit) return false;
  return true;
}

/// Counts for every eigenvector of a complete graph at once. Eigenvectors are
/// processed in blocks so each column of A is read once per block.
inline std::vector<NodalCount> count_all_complete(const SymMatrix& a, const Spectrum& spec,
                                                  const NodalOptions& opts) {
  constexpr Eigen::Index kBlock = 16;
  const Matrix& m = a.matrix();
  const Matrix& v = spec.vectors;
  const Eigen::Index n = m.rows();
  const double a_max = a.max_abs();
  std::vector<NodalCount> out(static_cast<std::size_t>(n));
  std::vector<double> mins(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  for (Eigen::Index k0 = 0; k0 < n; k0 += kBlock) {
    const Eigen::Index k1 = std::min(n, k0 + kBlock);
    for (Eigen::Index j = 1; j < n; ++j) {
      const auto column = m.col(j).head(j).array();
      for (Eigen::Index k = k0; k < k1; ++k) {
        const auto p = column * v.col(k).head(j).array() * v(j, k);
        auto& slot = out[static_cast<std::size_t>(k)];
        slot.count += (p > 0.0).count();
        auto& mn = mins[static_cast<std::size_t>(k)];
        mn = std::min(mn, p.abs().minCoeff());
      }
    }
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    auto& slot = out[static_cast<std::size_t>(k)];
    slot.generic = entries_and_gaps_generic(spec, k + 1, opts);
    const double v_inf = v.col(k).cwiseAbs().maxCoeff();
    finish_products(slot, mins[static_cast<std::size_t>(k)], a_max * v_inf * v_inf);
  }
  return out;
}

inline NodalCount nodal_count_impl(const SymMatrix& a, const Spectrum& spec, Eigen::Index k,
                                   const NodalOptions& opts, bool complete) {
  const auto col = spec.vectors.col(k - 1);
  const double v_inf = col.cwiseAbs().maxCoeff();
  NodalCount out;
  out.generic = entries_and_gaps_generic(spec, k, opts);

  const auto [count, min_product] = count_positive_products(a.matrix(), col, opts.edge_tol, complete);
  out.count = count;
  finish_products(out, min_product, a.max_abs() * v_inf * v_inf);
  return out;
}

inline void check_nodal_args(const SymMatrix& a, const Spectrum& spec, Eigen::Index k) {
  const Eigen::Index n = a.n();
  if (k < 1 || k > n) throw IndexError("nodal_count: k must be in 1..n");
  if (spec.lambdas.size() != n || spec.vectors.rows() != n || spec.vectors.cols() != n)
    throw InvalidDimension("nodal_count: spectrum does not match matrix");
}

}  // namespace detail

/// Nodal count of eigenvector k (1-based) of a, given its spectrum.
inline NodalCount nodal_count(const SymMatrix& a, const Spectrum& spec, Eigen::Index k,
                              const NodalOptions& opts = {}) {
  detail::check_nodal_args(a, spec, k);
  return detail::nodal_count_impl(a, spec, k, opts, detail::is_complete_graph(a.matrix(), opts.edge_tol));
}

/// The normalization (pi^{3/2}/sqrt 2)(x / C(n,2) - 1/2) sqrt(n).
inline double normalize_count(double x, Eigen::Index n) {
  const double coeff = std::pow(std::numbers::pi, 1.5) / std::numbers::sqrt2;
  return coeff * (x / detail::pairs_of(n) - 0.5) * std::sqrt(static_cast<double>(n));
}

struct NodalVector {
  Eigen::Index n = 0;
  std::vector<std::int64_t> phi;
  std::vector<std::int64_t> sigma;  // phi[k] - (k-1)
  std::vector<double> phi_norm;
  std::vector<double> sigma_norm;
  std::int64_t betti = 0;
  Eigen::Index components = 0;
  std::int64_t edge_count = 0;
  bool generic = true;
  double min_product_magnitude = std::numeric_limits<double>::infinity();
};

/// All nodal counts of a from an existing spectrum.
inline NodalVector nodal_all(const SymMatrix& a, const Spectrum& spec, const NodalOptions& opts = {}) {
  const Eigen::Index n = a.n();
  if (n < 2) throw InvalidDimension("nodal_all needs n >= 2");
  const GraphStructure g = graph_of(a, opts.edge_tol);
  NodalVector nv;
  nv.n = n;
  nv.betti = g.betti();
  nv.components = g.components;
  nv.edge_count = static_cast<std::int64_t>(g.edges.size());
  nv.phi.resize(static_cast<std::size_t>(n));
  nv.sigma.resize(static_cast<std::size_t>(n));
  nv.phi_norm.resize(static_cast<std::size_t>(n));
  nv.sigma_norm.resize(static_cast<std::size_t>(n));
  if (spec.lambdas.size() != n || spec.vectors.rows() != n || spec.vectors.cols() != n)
    throw InvalidDimension("nodal_all: spectrum does not match matrix");
  const bool complete = nv.edge_count == static_cast<std::int64_t>(detail::pairs_of(n));
  std::vector<NodalCount> counts;
  if (complete) counts = detail::count_all_complete(a, spec, opts);
  for (Eigen::Index k = 1; k <= n; ++k) {
    const NodalCount c = complete ? counts[static_cast<std::size_t>(k - 1)]
                                  : detail::nodal_count_impl(a, spec, k, opts, false);
    const auto idx = static_cast<std::size_t>(k - 1);
    nv.phi[idx] = c.count;
    nv.sigma[idx] = c.count - (k - 1);
    nv.phi_norm[idx] = normalize_count(static_cast<double>(c.count), n);
    nv.sigma_norm[idx] = normalize_count(static_cast<double>(nv.sigma[idx]), n);
    nv.generic = nv.generic && c.generic;
    nv.min_product_magnitude = std::min(nv.min_product_magnitude, c.min_product_magnitude);
  }
  return nv;
}

inline NodalVector nodal_all(const SymMatrix& a, const NodalOptions& opts = {}) {
  return nodal_all(a, symmetric_eigen(a), opts);
}

enum class CheckOutcome { Pass, Fail, Inconclusive };

/// beta/n <= avg(sigma) <= beta - beta/n, with 1e-9 slack. Inconclusive on
/// non-generic or disconnected inputs.
inline CheckOutcome surplus_average_bounds_check(const NodalVector& nv) {
  if (!nv.generic || nv.components != 1) return CheckOutcome::Inconclusive;
  double sum = 0.0;
  for (auto s : nv.sigma) sum += static_cast<double>(s);
  const double avg = sum / static_cast<double>(nv.n);
  const double beta = static_cast<double>(nv.betti);
  const double lower = beta / static_cast<double>(nv.n);
  const double upper = beta - lower;
  return (avg >= lower - 1e-9 && avg <= upper + 1e-9) ? CheckOutcome::Pass : CheckOutcome::Fail;
}

/// 0 <= sigma[k] <= beta for every k. Inconclusive on non-generic or
/// disconnected inputs.
inline CheckOutcome surplus_sandwich_check(const NodalVector& nv) {
  if (!nv.generic || nv.components != 1) return CheckOutcome::Inconclusive;
  for (auto s : nv.sigma)
    if (s < 0 || s > nv.betti) return CheckOutcome::Fail;
  return CheckOutcome::Pass;
}

}  // namespace nodalcount
