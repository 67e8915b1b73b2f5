#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "nodalcount/sampling.hpp"
#include "nodalcount/stats.hpp"

using namespace nodalcount;

// Published Philox4x32-10 known-answer vectors.
TEST(Philox, KnownAnswers) {
  using Block = std::array<std::uint32_t, 4>;
  EXPECT_EQ(RngStream::block({0, 0, 0, 0}, {0, 0}), (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(RngStream::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(RngStream::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStream, SameSeedAndIdRepeat) {
  RngStream a(SeedPlan{7}, 3), b(SeedPlan{7}, 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(RngStream, DistinctIdsDiffer) {
  RngStream a(SeedPlan{7}, 3), b(SeedPlan{7}, 4), c(SeedPlan{8}, 3);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    same_ab += x == b();
    same_ac += x == c();
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(RngStream, UniformInOpenInterval) {
  RngStream s(SeedPlan{1}, 0);
  MomentAccumulator acc;
  for (int i = 0; i < 200000; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    acc.add(u);
  }
  EXPECT_NEAR(acc.mean(), 0.5, 0.005);
  EXPECT_NEAR(acc.variance(), 1.0 / 12.0, 0.002);
}

TEST(RngStream, NormalMoments) {
  RngStream s(SeedPlan{2}, 0);
  MomentAccumulator acc;
  double m4 = 0.0;
  const int count = 400000;
  for (int i = 0; i < count; ++i) {
    const double z = s.normal();
    acc.add(z);
    m4 += z * z * z * z;
  }
  EXPECT_NEAR(acc.mean(), 0.0, 0.01);
  EXPECT_NEAR(acc.variance(), 1.0, 0.01);
  EXPECT_NEAR(m4 / count, 3.0, 0.06);
}

TEST(RngStream, NormalPassesKsAgainstStandardNormal) {
  RngStream s(SeedPlan{3}, 0);
  std::vector<double> x(20000);
  for (auto& v : x) v = s.normal();
  // 1.63 / sqrt(m) is the 1% critical value.
  EXPECT_LT(ks_distance(emp(x), ReferenceLaw::normal(0.0, 1.0)), 1.63 / std::sqrt(20000.0));
}

TEST(StreamKey, FieldsDoNotCollide) {
  std::set<std::uint64_t> keys;
  for (std::uint16_t p : {1, 2})
    for (std::uint64_t n : {16ull, 17ull})
      for (std::uint64_t i : {0ull, 1ull, 0xFFFFFFFFull}) keys.insert(stream_key(p, n, i));
  EXPECT_EQ(keys.size(), 12u);
}

TEST(Haar, OrthogonalAndDeterminantSpread) {
  RngStream s(SeedPlan{4}, 0);
  int negative = 0;
  for (int t = 0; t < 200; ++t) {
    const Matrix q = sample_haar_orthogonal(5, s);
    ASSERT_LT((q.transpose() * q - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-12);
    negative += q.determinant() < 0.0;
  }
  // Both components of O(n) are hit with probability 1/2.
  EXPECT_GT(negative, 60);
  EXPECT_LT(negative, 140);
}

TEST(Haar, FirstColumnUniformOnSphere) {
  // For a uniform unit vector in R^n, E[u_1^2] = 1/n and E[u_1^4] = 3/(n(n+2)).
  RngStream s(SeedPlan{5}, 0);
  const int n = 6, trials = 20000;
  double m2 = 0.0, m4 = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double u = sample_haar_orthogonal(n, s)(0, 0);
    m2 += u * u;
    m4 += u * u * u * u;
  }
  EXPECT_NEAR(m2 / trials, 1.0 / n, 0.005);
  EXPECT_NEAR(m4 / trials, 3.0 / (n * (n + 2)), 0.003);
}

TEST(HaarPair, OrthonormalOutput) {
  RngStream s(SeedPlan{6}, 0);
  for (int t = 0; t < 100; ++t) {
    const auto [u, v] = haar_pair_from_gaussians(sample_gaussian_vector(50, s), sample_gaussian_vector(50, s));
    EXPECT_NEAR(u.norm(), 1.0, 1e-14);
    EXPECT_NEAR(v.norm(), 1.0, 1e-14);
    EXPECT_LT(std::abs(u.dot(v)), 1e-14);
  }
}

TEST(HaarPair, HandPicked) {
  Vector g(2), gh(2);
  g << 3.0, 4.0;
  gh << 1.0, 0.0;
  const auto [u, v] = haar_pair_from_gaussians(g, gh);
  EXPECT_NEAR(u[0], 0.6, 1e-15);
  EXPECT_NEAR(u[1], 0.8, 1e-15);
  EXPECT_NEAR(v[0], 0.8, 1e-15);
  EXPECT_NEAR(v[1], -0.6, 1e-15);
}

TEST(HaarPair, DegenerateInputs) {
  Vector zero = Vector::Zero(3), g(3);
  g << 1.0, 2.0, 3.0;
  EXPECT_THROW(haar_pair_from_gaussians(zero, g), DegenerateInput);
  EXPECT_THROW(haar_pair_from_gaussians(g, 2.0 * g), DegenerateInput);
  EXPECT_THROW(haar_pair_from_gaussians(g, Vector::Ones(2)), InvalidDimension);
}

TEST(HaarFrame, Orthonormal) {
  RngStream s(SeedPlan{7}, 0);
  const Matrix f = sample_haar_frame(40, 4, s);
  EXPECT_LT((f.transpose() * f - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(sample_haar_frame(3, 4, s), InvalidDimension);
}

TEST(Samplers, RejectBadDimensions) {
  RngStream s(SeedPlan{8}, 0);
  EXPECT_THROW(sample_gaussian_vector(0, s), InvalidDimension);
  EXPECT_THROW(sample_haar_orthogonal(0, s), InvalidDimension);
}

TEST(RngStream, DistinctStreamsUncorrelated) {
  const int count = 100000;
  RngStream a(SeedPlan{7}, 10), b(SeedPlan{7}, 11);
  double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < count; ++i) {
    const double x = a.normal(), y = b.normal();
    sx += x, sy += y, sxy += x * y, sxx += x * x, syy += y * y;
  }
  const double cov = sxy / count - sx / count * sy / count;
  const double corr = cov / std::sqrt((sxx / count - sx * sx / count / count) * (syy / count - sy * sy / count / count));
  EXPECT_LT(std::abs(corr), 4.0 / std::sqrt(static_cast<double>(count)));
}

TEST(RngStream, MillionNormalsCentered) {
  RngStream s(SeedPlan{7}, 0);
  MomentAccumulator acc;
  for (int i = 0; i < 1000000; ++i) acc.add(s.normal());
  EXPECT_LT(std::abs(acc.mean()), 0.005);
  EXPECT_NEAR(acc.variance(), 1.0, 0.01);
}

TEST(GaussianVector, LargeSampleMoments) {
  RngStream s(SeedPlan{9}, 0);
  const Vector g = sample_gaussian_vector(100000, s);
  const double positive = (g.array() > 0.0).cast<double>().mean();
  EXPECT_GE(positive, 0.494);
  EXPECT_LE(positive, 0.506);
  const double var = (g.array() - g.mean()).square().sum() / (g.size() - 1);
  EXPECT_GE(var, 0.98);
  EXPECT_LE(var, 1.02);
}

TEST(GaussianVector, SameStateSameDraw) {
  RngStream a(SeedPlan{9}, 5), b(SeedPlan{9}, 5);
  EXPECT_EQ(sample_gaussian_vector(1, a)[0], sample_gaussian_vector(1, b)[0]);
}

TEST(Haar, OneByOneIsPlusMinusOne) {
  RngStream s(SeedPlan{10}, 0);
  int plus = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const double q = sample_haar_orthogonal(1, s)(0, 0);
    ASSERT_TRUE(q == 1.0 || q == -1.0);
    plus += q > 0.0;
  }
  EXPECT_NEAR(static_cast<double>(plus) / trials, 0.5, 0.02);
}

TEST(Haar, Size64Moments) {
  RngStream s(SeedPlan{11}, 0);
  const Matrix q0 = sample_haar_orthogonal(64, s);
  EXPECT_LE((q0.transpose() * q0 - Matrix::Identity(64, 64)).cwiseAbs().maxCoeff(), 1e-10);
  const int trials = 10000;
  MomentAccumulator acc;
  for (int t = 0; t < trials; ++t) {
    const double u = sample_haar_orthogonal(64, s)(0, 0);
    acc.add(u * u);
  }
  EXPECT_LT(std::abs(acc.mean() - 1.0 / 64.0), 4.0 * acc.standard_error());
}

TEST(HaarPair, CoordinateSecondMoments) {
  const Eigen::Index n = 128;
  const int trials = 10000;
  RngStream s(SeedPlan{12}, 0);
  std::vector<MomentAccumulator> u2(4), v2(4);
  for (int t = 0; t < trials; ++t) {
    const auto [u, v] = haar_pair_from_gaussians(sample_gaussian_vector(n, s), sample_gaussian_vector(n, s));
    for (int i = 0; i < 4; ++i) {
      u2[i].add(u[i] * u[i]);
      v2[i].add(v[i] * v[i]);
    }
  }
  for (int i = 0; i < 4; ++i) {
    EXPECT_LT(std::abs(u2[i].mean() - 1.0 / n), 4.0 * u2[i].standard_error());
    EXPECT_LT(std::abs(v2[i].mean() - 1.0 / n), 4.0 * v2[i].standard_error());
  }
}

TEST(HaarPair, OrthogonalInputsKept) {
  Vector g = Vector::Zero(2), gh = Vector::Zero(2);
  g[0] = 2.5;
  gh[1] = -0.3;
  const auto [u, v] = haar_pair_from_gaussians(g, gh);
  EXPECT_DOUBLE_EQ(std::abs(u[0]), 1.0);
  EXPECT_DOUBLE_EQ(u[1], 0.0);
  EXPECT_DOUBLE_EQ(std::abs(v[1]), 1.0);
  EXPECT_DOUBLE_EQ(v[0], 0.0);
}
