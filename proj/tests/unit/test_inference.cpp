#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "scoreinf/distributions.hpp"
#include "scoreinf/error.hpp"
#include "scoreinf/inference.hpp"
#include "scoreinf/samplers.hpp"

using namespace scoreinf;

namespace {

Matrix iid_normal(Index n, Index m, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  Matrix z(n, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) z(i, j) = nd(gen);
  return z;
}

Matrix truth_row(const ModelSpec& spec, int a) {
  Matrix null = Matrix::Zero(spec.p(), spec.L());
  for (int b = 0; b < spec.p(); ++b)
    if (b != a) null.row(b) = true_edge_value(spec, a, b).transpose();
  return null;
}

}  // namespace

TEST(Bootstrap, QuantileIsOrderStatistic) {
  std::vector<double> draws(100);
  std::iota(draws.begin(), draws.end(), 1.0);
  std::shuffle(draws.begin(), draws.end(), std::mt19937_64(3));
  EXPECT_DOUBLE_EQ(bootstrap_quantile(draws, 0.05), 95.0);
  EXPECT_DOUBLE_EQ(bootstrap_quantile(draws, 0.10), 90.0);
  EXPECT_DOUBLE_EQ(bootstrap_quantile(draws, 0.001), 100.0);
  EXPECT_DOUBLE_EQ(bootstrap_p_value(draws, 95.5), 6.0 / 101.0);
  EXPECT_DOUBLE_EQ(bootstrap_p_value(draws, 1000.0), 1.0 / 101.0);
}

TEST(Bootstrap, SingleColumnCriticalValue) {
  const Matrix z = iid_normal(4000, 1, 5);
  const Matrix zs = z / std::sqrt(z.squaredNorm() / 4000.0);
  const auto draws = kernels::bootstrap_maxima(zs, 20000, 11, 1.0 / std::sqrt(4000.0));
  EXPECT_NEAR(bootstrap_quantile(draws.two_sided, 0.05), 1.959964, 0.05);
  EXPECT_NEAR(bootstrap_quantile(draws.one_sided, 0.05), 1.644854, 0.05);
}

TEST(Bootstrap, IndependentColumnsMatchMaxOfNormals) {
  const Index n = 3000, m = 19;
  Matrix z = iid_normal(n, m, 8);
  // orthonormalize so the multiplier law is exactly max |N(0, I)|
  Eigen::HouseholderQR<Matrix> qr(z);
  z = Matrix(qr.householderQ()).leftCols(m) * std::sqrt(static_cast<double>(n));
  const auto draws = kernels::bootstrap_maxima(z, 40000, 12, 1.0 / std::sqrt(static_cast<double>(n)));
  std::mt19937_64 gen(99);
  std::normal_distribution<double> nd;
  std::vector<double> mc(200000);
  for (double& v : mc) {
    double mx = 0.0;
    for (Index j = 0; j < m; ++j) mx = std::max(mx, std::abs(nd(gen)));
    v = mx;
  }
  EXPECT_NEAR(bootstrap_quantile(draws.two_sided, 0.05), bootstrap_quantile(mc, 0.05), 0.05);
}

TEST(Chi2, CriticalValueSolvesTailEquation) {
  for (int L : {1, 2, 3}) {
    for (int p : {10, 50}) {
      const double y = chi2_critical_value(0.05, p, L);
      EXPECT_NEAR((p - 1) * chi2_sf(y, L), -std::log(0.95), 1e-10);
    }
  }
  EXPECT_THROW(chi2_critical_value(0.0, 10, 1), InputError);
}

TEST(Chi2, DecisionFromEstimates) {
  std::vector<EdgeEstimate> ests;
  for (int b = 1; b < 5; ++b) {
    EdgeEstimate e;
    e.a = 0;
    e.b = b;
    e.n = 100;
    e.theta_tilde = Vector::Constant(1, b == 3 ? 0.5 : 0.0);
    e.V_hat = Matrix::Identity(1, 1);
    ests.push_back(e);
  }
  const Chi2TestResult r = chi2_from_estimates(ests, 0, Matrix::Zero(5, 1), 0.05, 5);
  EXPECT_NEAR(r.statistic, 25.0, 1e-12);
  EXPECT_TRUE(r.reject);
  EXPECT_NEAR(r.p_value, -std::expm1(-4.0 * chi2_sf(25.0, 1.0)), 1e-15);
}

TEST(Xia, LimitDistributionShape) {
  EXPECT_LT(xia_limit_cdf(-40.0), 1e-10);
  EXPECT_NEAR(xia_limit_cdf(60.0), 1.0, 1e-10);
  double prev = 0.0;
  for (double t = -10.0; t < 20.0; t += 0.5) {
    const double c = xia_limit_cdf(t);
    EXPECT_GE(c, prev);
    prev = c;
  }
}

TEST(Xia, StatisticScalesWithSampleSizes) {
  EdgeEstimate e1, e2;
  e1.a = e2.a = 0;
  e1.b = e2.b = 1;
  e1.n = 100;
  e2.n = 400;
  e1.theta_tilde = Vector::Constant(1, 0.3);
  e2.theta_tilde = Vector::Constant(1, 0.1);
  e1.V_hat = Matrix::Constant(1, 1, 2.0);
  e2.V_hat = Matrix::Constant(1, 1, 4.0);
  const XiaResult r = xia_test({e1}, {e2}, 10);
  EXPECT_NEAR(r.statistic, 0.04 / (0.02 + 0.01), 1e-12);
  EXPECT_GT(r.p_value, 0.0);
  EXPECT_LE(r.p_value, 1.0);
}

TEST(SimultaneousTest, ReproducibleUnderSeed) {
  const ModelSpec spec = knn_graph_spec(Family::Gaussian, 8, 2, {0.4});
  const DataMatrix data = sample(spec, 500, 3);
  TestOptions o;
  o.B = 1000;
  o.seed = 42;
  const auto r1 = simultaneous_test(spec, data, 0, truth_row(spec, 0), o);
  const auto r2 = simultaneous_test(spec, data, 0, truth_row(spec, 0), o);
  EXPECT_EQ(r1.statistic, r2.statistic);
  EXPECT_EQ(r1.critical_value, r2.critical_value);
  EXPECT_EQ(r1.p_value, r2.p_value);
  EXPECT_EQ(r1.edges.size(), 7u);
  o.seed = 43;
  const auto r3 = simultaneous_test(spec, data, 0, truth_row(spec, 0), o);
  EXPECT_EQ(r1.statistic, r3.statistic);
  EXPECT_NE(r1.critical_value, r3.critical_value);
}

TEST(SimultaneousTest, AlwaysRejectsAtAlphaNearOne) {
  const ModelSpec spec = knn_graph_spec(Family::Gaussian, 6, 2, {0.4});
  const DataMatrix data = sample(spec, 400, 3);
  TestOptions o;
  o.B = 1000;
  o.alpha = 1.0 - 1e-9;
  EXPECT_TRUE(simultaneous_test(spec, data, 0, truth_row(spec, 0), o).reject);
}

TEST(SimultaneousTest, RejectsBadInput) {
  const ModelSpec spec = knn_graph_spec(Family::Gaussian, 6, 2, {0.4});
  const DataMatrix data = sample(spec, 100, 3);
  TestOptions o;
  EXPECT_THROW(simultaneous_test(spec, data, 6, Matrix::Zero(6, 1), o), InvalidEdgeError);
  EXPECT_THROW(simultaneous_test(spec, data, 0, Matrix::Zero(5, 1), o), DimensionMismatchError);
  o.alpha = 0.0;
  EXPECT_THROW(simultaneous_test(spec, data, 0, Matrix::Zero(6, 1), o), InputError);
}

TEST(IsolatedNodeTest, SizeAndPower) {
  // node 0 isolated in `null_spec`, joined to node 1 with weight 0.5 in `alt_spec`
  Matrix omega = Matrix::Identity(8, 8);
  for (int j = 1; j + 1 < 8; ++j) omega(j, j + 1) = omega(j + 1, j) = 0.3;
  const ModelSpec null_spec(Family::Gaussian, 8, {Matrix(omega - Matrix(omega.diagonal().asDiagonal()))},
                            {Vector(omega.diagonal())}, WeightFn::Identity);
  Matrix alt = omega;
  alt(0, 1) = alt(1, 0) = 0.5;
  const ModelSpec alt_spec(Family::Gaussian, 8, {Matrix(alt - Matrix(alt.diagonal().asDiagonal()))},
                           {Vector(alt.diagonal())}, WeightFn::Identity);
  int rej_null = 0, rej_alt = 0;
  const int reps = 40;
  for (int r = 0; r < reps; ++r) {
    TestOptions o;
    o.B = 1000;
    o.seed = static_cast<std::uint64_t>(r);
    rej_null += isolated_node_test(null_spec, sample(null_spec, 2000, 100 + r), 0, o).reject;
    rej_alt += isolated_node_test(alt_spec, sample(alt_spec, 2000, 500 + r), 0, o).reject;
  }
  EXPECT_LE(rej_null, static_cast<int>(std::ceil((0.05 + 0.10) * reps)));
  EXPECT_GE(rej_alt, static_cast<int>(0.9 * reps));
}

TEST(SupportRecovery, BandedGaussianNeighbourhood) {
  const ModelSpec spec = knn_graph_spec(Family::Gaussian, 50, 4, {0.5, 0.3});
  // 45 null edges at threshold sqrt(2 log 50): about 0.23 false positives per replication
  int false_pos = 0;
  const int reps = 10;
  for (int r = 0; r < reps; ++r) {
    const SupportResult s = support_recovery(spec, sample(spec, 2000, 900 + r), 4);
    for (Index j : {2, 3, 5, 6}) EXPECT_TRUE(std::find(s.nodes.begin(), s.nodes.end(), j) != s.nodes.end());
    false_pos += static_cast<int>(s.nodes.size()) - 4;
  }
  EXPECT_LE(false_pos, 7);
}

TEST(SupportRecovery, EmptyGraph) {
  const ModelSpec spec = knn_graph_spec(Family::Gaussian, 10, 0, std::vector<double>{});
  const SupportResult s = support_recovery(spec, sample(spec, 3000, 4), 2);
  EXPECT_LE(s.nodes.size(), 1u);
}

TEST(DiffTest, EqualGroupsRarelyRejectAndDifferentGroupsDo) {
  const ModelSpec s1 = knn_graph_spec(Family::Gaussian, 6, 2, {0.4});
  const ModelSpec s2 = knn_graph_spec(Family::Gaussian, 6, 2, {0.0});
  TestOptions o;
  o.B = 1000;
  int same = 0, differ = 0;
  for (int r = 0; r < 10; ++r) {
    o.seed = static_cast<std::uint64_t>(r);
    same += diff_test(s1, sample(s1, 1500, 10 + r), sample(s1, 1500, 40 + r), o).reject;
    differ += diff_test(s1, sample(s1, 1500, 70 + r), sample(s2, 1500, 90 + r), o).reject;
  }
  EXPECT_LE(same, 3);
  EXPECT_GE(differ, 9);
}
