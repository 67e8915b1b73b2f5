// Random symmetric matrices: GOE, orthogonal ensembles with a chosen
// eigenvalue law, and random edge signings.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "nodalcount/error.hpp"
#include "nodalcount/sampling.hpp"
#include "nodalcount/spectral.hpp"

namespace nodalcount {

struct MixtureComponent {
  double weight = 0.0;
  double mean = 0.0;
  double std = 1.0;
};

/// How the eigenvalues of an orthogonal-ensemble sample are produced.
struct EigenvalueLaw {
  enum class Variant { GoeImplicit, IidMixture, Explicit };

  Variant variant = Variant::GoeImplicit;
  std::vector<MixtureComponent> components;  // IidMixture
  std::vector<double> values;                // Explicit
  bool normalize = false;

  static EigenvalueLaw goe() { return {}; }
  static EigenvalueLaw mixture(std::vector<MixtureComponent> components, bool normalize) {
    return {Variant::IidMixture, std::move(components), {}, normalize};
  }
  static EigenvalueLaw explicit_values(std::vector<double> values, bool normalize) {
    return {Variant::Explicit, {}, std::move(values), normalize};
  }

  /// The three-component mixture used for the tri-modal demo.
  static EigenvalueLaw trimodal_demo() {
    return mixture({{0.25, -5.0, 1.0}, {0.25, -1.0, 1.0}, {0.5, 3.0, 1.0}}, true);
  }

  void validate() const {
    switch (variant) {
      case Variant::GoeImplicit:
        return;
      case Variant::IidMixture: {
        if (components.empty()) throw InvalidInput("mixture law needs components");
        double total = 0.0;
        for (const auto& c : components) {
          if (!(c.weight >= 0.0) || !(c.std > 0.0) || !std::isfinite(c.mean))
            throw InvalidInput("mixture component needs weight >= 0, std > 0, finite mean");
          total += c.weight;
        }
        if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("mixture weights must sum to 1");
        return;
      }
      case Variant::Explicit:
        for (double v : values)
          if (!std::isfinite(v)) throw InvalidInput("explicit eigenvalues must be finite");
        return;
    }
  }
};

inline std::string to_string(EigenvalueLaw::Variant v) {
  switch (v) {
    case EigenvalueLaw::Variant::GoeImplicit: return "goe";
    case EigenvalueLaw::Variant::IidMixture: return "iid_mixture";
    case EigenvalueLaw::Variant::Explicit: return "explicit";
  }
  return "unknown";
}

struct OEMatrixSample {
  SymMatrix matrix;
  Vector lambdas_used;  // ascending; empty for GOE
  double shift = 0.0;   // affine map applied when the law normalizes
  double scale = 1.0;
  bool signing_applied = false;
};

/// GOE with off-diagonal variance 1/n and diagonal variance 2/n, so the
/// spectrum converges to the radius-2 semicircle.
inline SymMatrix sample_goe(Eigen::Index n, RngStream& stream) {
  if (n < 2) throw InvalidDimension("sample_goe needs n >= 2");
  const double off = 1.0 / std::sqrt(static_cast<double>(n));
  const double diag = std::sqrt(2.0 / static_cast<double>(n));
  Matrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) a(i, j) = off * stream.normal();
    a(j, j) = diag * stream.normal();
  }
  return SymMatrix(std::move(a));
}

/// One i.i.d. draw from a Gaussian mixture (component by inverse cdf on the
/// weights, then a normal).
inline double sample_mixture(const std::vector<MixtureComponent>& components, RngStream& stream) {
  const double u = stream.uniform();
  double acc = 0.0;
  const MixtureComponent* chosen = &components.back();
  for (const auto& c : components) {
    acc += c.weight;
    if (u < acc) {
      chosen = &c;
      break;
    }
  }
  return chosen->mean + chosen->std * stream.normal();
}

/// Phi diag(lambdas) Phi^T.
inline SymMatrix conjugate_diagonal(const Matrix& phi, const Vector& lambdas) {
  const Matrix scaled = phi * lambdas.asDiagonal();
  return SymMatrix(scaled * phi.transpose());
}

inline OEMatrixSample sample_oe(Eigen::Index n, const EigenvalueLaw& law, RngStream& stream) {
  law.validate();
  if (law.variant == EigenvalueLaw::Variant::GoeImplicit) return {sample_goe(n, stream), {}, 0.0, 1.0, false};
  if (n < 1) throw InvalidDimension("sample_oe needs n >= 1");

  Vector lambdas(n);
  if (law.variant == EigenvalueLaw::Variant::Explicit) {
    if (static_cast<Eigen::Index>(law.values.size()) != n)
      throw InvalidDimension("explicit law length must equal n");
    for (Eigen::Index i = 0; i < n; ++i) lambdas[i] = law.values[static_cast<std::size_t>(i)];
  } else {
    for (Eigen::Index i = 0; i < n; ++i) lambdas[i] = sample_mixture(law.components, stream);
  }

  OEMatrixSample out;
  if (law.normalize) {
    auto normalized = normalize_spectrum(lambdas);
    lambdas = std::move(normalized.values);
    out.shift = normalized.shift;
    out.scale = normalized.scale;
  }
  std::sort(lambdas.begin(), lambdas.end());
  const Matrix phi = sample_haar_orthogonal(n, stream);
  out.matrix = conjugate_diagonal(phi, lambdas);
  out.lambdas_used = std::move(lambdas);
  return out;
}

/// Flips each off-diagonal pair (i<j, mirrored) with probability 1/2; the
/// diagonal is left alone.
inline SymMatrix random_signing(const SymMatrix& a, RngStream& stream) {
  Matrix out = a.matrix();
  const Eigen::Index n = a.n();
  std::uint64_t bits = 0;
  int left = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (left == 0) {
        bits = stream();
        left = 64;
      }
      if (bits & 1u) out(i, j) = -out(i, j);
      bits >>= 1;
      --left;
    }
  }
  return SymMatrix(std::move(out));
}

/// Uniform integer in [0, bound).
inline std::uint64_t uniform_index(std::uint64_t bound, RngStream& stream) {
  return static_cast<std::uint64_t>(stream.uniform() * static_cast<double>(bound)) % bound;
}

/// Random weighted tree: a random recursive tree on shuffled labels with
/// edge weights uniform in [0.5, 1.5] and i.i.d. N(0,1) diagonal entries.
/// All other entries are zero.
inline SymMatrix random_weighted_tree(Eigen::Index n, RngStream& stream) {
  if (n < 1) throw InvalidDimension("random_weighted_tree needs n >= 1");
  std::vector<Eigen::Index> label(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) label[static_cast<std::size_t>(i)] = i;
  for (Eigen::Index i = n - 1; i > 0; --i)
    std::swap(label[static_cast<std::size_t>(i)],
              label[uniform_index(static_cast<std::uint64_t>(i + 1), stream)]);
  SymMatrix a = SymMatrix::zeros(n);
  for (Eigen::Index v = 1; v < n; ++v) {
    const auto parent = static_cast<Eigen::Index>(uniform_index(static_cast<std::uint64_t>(v), stream));
    a.set(label[static_cast<std::size_t>(v)], label[static_cast<std::size_t>(parent)],
          0.5 + stream.uniform());
  }
  for (Eigen::Index i = 0; i < n; ++i) a.set(i, i, stream.normal());
  return a;
}

}  // namespace nodalcount
