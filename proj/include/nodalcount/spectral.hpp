// Symmetric eigendecomposition with fixed ordering and sign conventions.
#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "nodalcount/error.hpp"
#include "nodalcount/sampling.hpp"

namespace nodalcount {

/// Dense real symmetric matrix. The upper triangle is authoritative; the
/// lower triangle is mirrored from it on construction, so A(i,j) == A(j,i)
/// holds bit-exactly.
class SymMatrix {
 public:
  SymMatrix() = default;

  explicit SymMatrix(Matrix entries) : a_(std::move(entries)) {
    if (a_.rows() != a_.cols()) throw InvalidDimension("SymMatrix must be square");
    for (Eigen::Index j = 0; j < a_.cols(); ++j)
      for (Eigen::Index i = j + 1; i < a_.rows(); ++i) a_(i, j) = a_(j, i);
  }

  static SymMatrix zeros(Eigen::Index n) { return SymMatrix(Matrix::Zero(n, n)); }

  Eigen::Index n() const { return a_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return a_(i, j); }
  const Matrix& matrix() const { return a_; }

  /// Writes both (i,j) and (j,i).
  void set(Eigen::Index i, Eigen::Index j, double value) {
    a_(i, j) = value;
    a_(j, i) = value;
  }

  double max_abs() const { return a_.size() == 0 ? 0.0 : a_.cwiseAbs().maxCoeff(); }
  bool all_finite() const { return a_.allFinite(); }

 private:
  Matrix a_;
};

/// Ascending eigenvalues and matching orthonormal eigenvectors (column k
/// belongs to lambdas[k]). The first entry of each column exceeding 1e-12 in
/// magnitude is positive.
struct Spectrum {
  Vector lambdas;
  Matrix vectors;
};

namespace detail {

inline void fix_eigenvector_signs(Matrix& vectors) {
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double v = vectors(i, k);
      if (std::abs(v) > 1e-12) {
        if (v < 0.0) vectors.col(k) *= -1.0;
        break;
      }
    }
  }
}

}  // namespace detail

/// Eigen's tridiagonalization + implicit symmetric QR. Eigen returns the
/// eigenvalues in ascending order with a deterministic ordering of ties.
inline Spectrum symmetric_eigen(const SymMatrix& a) {
  if (a.n() < 1) throw InvalidDimension("symmetric_eigen needs n >= 1");
  if (!a.all_finite()) throw InvalidInput("symmetric_eigen: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw InvalidInput("symmetric_eigen: solver did not converge");
  Spectrum s{solver.eigenvalues(), solver.eigenvectors()};
  detail::fix_eigenvector_signs(s.vectors);
  return s;
}

/// Eigenvalues only, ascending.
inline Vector symmetric_eigenvalues(const SymMatrix& a) {
  if (a.n() < 1) throw InvalidDimension("symmetric_eigenvalues needs n >= 1");
  if (!a.all_finite()) throw InvalidInput("symmetric_eigenvalues: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw InvalidInput("symmetric_eigenvalues: solver did not converge");
  return solver.eigenvalues();
}

inline double average(std::span<const double> x) {
  if (x.empty()) throw InvalidInput("average of empty vector");
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

/// Population standard deviation (divisor n).
inline double population_std(std::span<const double> x) {
  const double mean = average(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

inline std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

/// Output of normalize_spectrum: values = (lambdas - shift) / scale.
struct NormalizedSpectrum {
  Vector values;
  double shift = 0.0;
  double scale = 1.0;
};

inline NormalizedSpectrum normalize_spectrum(const Vector& lambdas) {
  const auto x = as_span(lambdas);
  const double mean = average(x);
  const double std = population_std(x);
  if (!(std > 0.0)) throw ZeroVariance("normalize_spectrum: zero variance");
  NormalizedSpectrum out{(lambdas.array() - mean) / std, mean, std};
  // One correction pass removes the rounding residue of the mean.
  out.values.array() -= out.values.mean();
  return out;
}

/// True iff max_i |normalized lambda_i| <= bound * log(n)^power.
inline bool check_spectral_growth(const Vector& lambdas, double bound, double power) {
  const Vector z = normalize_spectrum(lambdas).values;
  const double n = static_cast<double>(lambdas.size());
  return z.cwiseAbs().maxCoeff() <= bound * std::pow(std::log(n), power);
}

}  // namespace nodalcount
