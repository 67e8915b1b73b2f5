// Reproducible random streams and primitive samplers.
//
// Streams are Philox4x32-10 counter-based generators. A stream is fully
// determined by (master seed, stream id): the seed is the Philox key and the
// stream id occupies the upper half of the 128-bit counter, so any stream can
// be constructed directly without advancing another one.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>

#include "nodalcount/error.hpp"

namespace nodalcount {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace detail {

inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
  std::uint32_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * c0;
    const std::uint64_t p1 = std::uint64_t{kMul1} * c2;
    const auto n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
    const auto n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
    c1 = static_cast<std::uint32_t>(p1);
    c3 = static_cast<std::uint32_t>(p0);
    c0 = n0;
    c2 = n2;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return {c0, c1, c2, c3};
}

}  // namespace detail

/// Master seed from which all streams of a run are derived.
struct SeedPlan {
  std::uint64_t master_seed = 0;
};

/// One independent random stream. Satisfies UniformRandomBitGenerator with
/// 64-bit output. Not thread-safe; give each worker its own stream.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(SeedPlan plan, std::uint64_t stream_id)
      : key_{static_cast<std::uint32_t>(plan.master_seed),
             static_cast<std::uint32_t>(plan.master_seed >> 32)},
        stream_id_(stream_id) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (lane_ == 2) refill();
    return buffer_[lane_++];
  }

  /// Uniform double in the open interval (0, 1).
  double uniform() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; draws come in pairs.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  std::uint64_t stream_id() const { return stream_id_; }

  /// Raw 128-bit block for a given counter; exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    return detail::philox4x32_10(ctr, key);
  }

 private:
  void refill() {
    const auto out = detail::philox4x32_10(
        {static_cast<std::uint32_t>(position_), static_cast<std::uint32_t>(position_ >> 32),
         static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)},
        key_);
    ++position_;
    buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
    buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
    lane_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_id_;
  std::uint64_t position_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int lane_ = 2;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline RngStream derive_stream(SeedPlan plan, std::uint64_t stream_id) {
  return RngStream(plan, stream_id);
}

/// Packs (purpose tag, dimension, index) into a stream id so that distinct
/// experiment phases never share a stream. index < 2^32, n < 2^16.
inline std::uint64_t stream_key(std::uint16_t purpose, std::uint64_t n, std::uint64_t index) {
  return (std::uint64_t{purpose} << 48) | ((n & 0xFFFFu) << 32) | (index & 0xFFFFFFFFu);
}

inline Vector sample_gaussian_vector(Eigen::Index n, RngStream& stream) {
  if (n < 1) throw InvalidDimension("gaussian vector needs n >= 1");
  Vector g(n);
  for (Eigen::Index i = 0; i < n; ++i) g[i] = stream.normal();
  return g;
}

/// n x cols matrix of i.i.d. standard normals, filled column by column.
inline Matrix sample_gaussian_matrix(Eigen::Index n, Eigen::Index cols, RngStream& stream) {
  if (n < 1 || cols < 1) throw InvalidDimension("gaussian matrix needs positive dimensions");
  Matrix g(n, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = stream.normal();
  return g;
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with each
/// column of Q multiplied by sgn(R_jj), sgn(0) = +1.
inline Matrix sample_haar_orthogonal(Eigen::Index n, RngStream& stream) {
  if (n < 1) throw InvalidDimension("haar orthogonal needs n >= 1");
  const Matrix g = sample_gaussian_matrix(n, n, stream);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

/// First two columns of a Haar matrix from two independent Gaussians:
/// u = g/|g|, u_hat = Qg_hat/|Qg_hat| with Q the projector off g.
inline std::pair<Vector, Vector> haar_pair_from_gaussians(const Vector& g, const Vector& g_hat) {
  if (g.size() != g_hat.size() || g.size() < 1)
    throw InvalidDimension("haar pair needs equal positive lengths");
  const double gg = g.squaredNorm();
  if (!(gg > 0.0)) throw DegenerateInput("haar pair: g has zero norm");
  Vector projected = g_hat - (g.dot(g_hat) / gg) * g;
  // A second projection pass drives <u, u_hat> down to rounding level.
  projected -= (g.dot(projected) / gg) * g;
  const double pn = projected.norm();
  if (!(pn > 0.0)) throw DegenerateInput("haar pair: projected g_hat has zero norm");
  return {g / std::sqrt(gg), projected / pn};
}

/// First `cols` columns of a Haar matrix by Gram-Schmidt (two passes) on
/// i.i.d. Gaussian columns. Exact in law; O(n * cols^2) work.
inline Matrix sample_haar_frame(Eigen::Index n, Eigen::Index cols, RngStream& stream) {
  if (cols < 1 || cols > n) throw InvalidDimension("haar frame needs 1 <= cols <= n");
  Matrix frame = sample_gaussian_matrix(n, cols, stream);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < j; ++i)
        frame.col(j) -= frame.col(i).dot(frame.col(j)) * frame.col(i);
    const double norm = frame.col(j).norm();
    if (!(norm > 0.0)) throw DegenerateInput("haar frame: dependent gaussian columns");
    frame.col(j) /= norm;
  }
  return frame;
}

}  // namespace nodalcount
