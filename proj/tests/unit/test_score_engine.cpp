#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "scoreinf/error.hpp"
#include "scoreinf/samplers.hpp"
#include "scoreinf/score_engine.hpp"

using namespace scoreinf;

namespace {

struct Case {
  Family family;
  std::vector<std::vector<double>> bands;
};

const Case kCases[] = {
    {Family::Gaussian, {{0.4, 0.2}}},
    {Family::NonNegGaussian, {{0.3, 0.1}}},
    {Family::NormalConditionalsL1, {{-0.2}}},
    {Family::NormalConditionalsL2, {{0.2}, {-0.2, -0.2}}},
    {Family::ExponentialGM, {{0.3}}},
};

ModelSpec case_spec(const Case& c, int p) {
  GraphSpecOptions o;
  o.bands = c.bands;
  return knn_graph_spec(c.family, p, 4, o);
}

}  // namespace

TEST(DataMatrix, ValidatesEntries) {
  Matrix x(2, 2);
  x << 1.0, 2.0, -1.0, 0.5;
  EXPECT_NO_THROW(DataMatrix(x, Domain::Reals));
  EXPECT_THROW(DataMatrix(x, Domain::NonNegReals), DomainError);
  x(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(DataMatrix(x, Domain::Reals), DomainError);
}

TEST(Assemble, CachedPathMatchesReference) {
  for (const Case& c : kCases) {
    const ModelSpec spec = case_spec(c, 7);
    const DataMatrix data = sample(spec, 300, 17);
    for (auto [a, b] : {std::pair{0, 1}, std::pair{2, 6}, std::pair{3, 4}}) {
      const EdgeScoreSystem sys = assemble(spec, data, a, b);
      const ReferenceSystem ref = assemble_reference(spec, data, a, b);
      const double scale = std::max(1.0, ref.gamma_hat.cwiseAbs().maxCoeff());
      EXPECT_LT((sys.gamma_hat() - ref.gamma_hat).cwiseAbs().maxCoeff(), 1e-12 * scale)
          << to_string(c.family);
      EXPECT_LT((sys.g_hat() - ref.g_hat).cwiseAbs().maxCoeff(), 1e-12 * scale);
      EXPECT_LT((sys.phi1_rows() - ref.phi1).cwiseAbs().maxCoeff(), 1e-12 * scale);
      EXPECT_LT((sys.phi2_rows() - ref.phi2).cwiseAbs().maxCoeff(), 1e-12 * scale);
      EXPECT_LT((sys.g_rows() - ref.g).cwiseAbs().maxCoeff(), 1e-12 * scale);
    }
  }
}

TEST(Assemble, GammaHatSymmetricPsd) {
  for (const Case& c : kCases) {
    const ModelSpec spec = case_spec(c, 8);
    const DataMatrix data = sample(spec, 200, 23);
    const EdgeScoreSystem sys = assemble(spec, data, 1, 5);
    const Matrix& G = sys.gamma_hat();
    const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
    EXPECT_LT((G - G.transpose()).cwiseAbs().maxCoeff(), 1e-12 * scale);
    Eigen::SelfAdjointEigenSolver<Matrix> es(G, Eigen::EigenvaluesOnly);
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12 * scale) << to_string(c.family);
  }
}

TEST(Assemble, ObjectiveGradientConsistent) {
  const ModelSpec spec = case_spec(kCases[3], 6);
  const DataMatrix data = sample(spec, 200, 5);
  const EdgeScoreSystem sys = assemble(spec, data, 0, 3);
  const Vector theta = oracle::random_vector(sys.dim(), 11, 0.3);
  const Vector grad = gradient(sys, theta);
  EXPECT_LT((grad - (sys.gamma_hat() * theta + sys.g_hat())).norm(), 1e-12 * grad.norm());
  std::vector<double> t(theta.data(), theta.data() + theta.size());
  auto f = [&](const std::vector<double>& y) {
    return objective(sys, Eigen::Map<const Vector>(y.data(), static_cast<Index>(y.size())));
  };
  for (Index k = 0; k < sys.dim(); ++k) {
    const double fd = oracle::central_difference(f, t, static_cast<size_t>(k), 1e-4);
    EXPECT_NEAR(fd, grad[k], 1e-6 * std::max(1.0, std::abs(grad[k])));
  }
}

TEST(Assemble, InfluenceMatchesPerSampleProducts) {
  const ModelSpec spec = case_spec(kCases[1], 6);
  const DataMatrix data = sample(spec, 150, 8);
  const EdgeScoreSystem sys = assemble(spec, data, 2, 3);
  const ReferenceSystem ref = assemble_reference(spec, data, 2, 3);
  const Vector v = oracle::random_vector(sys.dim(), 1);
  const Vector theta = oracle::random_vector(sys.dim(), 2, 0.2);
  const Vector u = sys.influence(v, theta);
  for (Index i = 0; i < data.n(); ++i) {
    const Vector p1 = ref.phi1.row(i).transpose();
    const Vector p2 = ref.phi2.row(i).transpose();
    const Vector gi = ref.g.row(i).transpose();
    const double expect = v.dot(p1 * p1.dot(theta) + p2 * p2.dot(theta) + gi);
    EXPECT_NEAR(u[i], expect, 1e-10 * std::max(1.0, std::abs(expect)));
  }
  Matrix V(sys.dim(), 2);
  V.col(0) = v;
  V.col(1) = 2.0 * v;
  const Matrix U = sys.influence(V, theta);
  EXPECT_LT((U.col(0) - u).norm(), 1e-12 * u.norm());
  EXPECT_LT((U.col(1) - 2.0 * u).norm(), 1e-12 * u.norm());
  // The mean influence is the gradient projected on v.
  EXPECT_NEAR(u.mean(), v.dot(gradient(sys, theta)), 1e-10 * std::max(1.0, std::abs(u.mean())));
}

TEST(Assemble, NuisanceSystemDropsTarget) {
  const ModelSpec spec = case_spec(kCases[0], 5);
  const DataMatrix data = sample(spec, 100, 3);
  const EdgeScoreSystem sys = assemble(spec, data, 0, 1);
  const Index t = sys.map().target_indices()[0];
  const NuisanceSystem ns = nuisance_regression_system(sys, t);
  ASSERT_EQ(ns.A.rows(), sys.dim() - 1);
  ASSERT_EQ(static_cast<Index>(ns.kept.size()), sys.dim() - 1);
  for (size_t r = 0; r < ns.kept.size(); ++r) {
    EXPECT_NE(ns.kept[r], t);
    EXPECT_DOUBLE_EQ(ns.b[static_cast<Index>(r)], sys.gamma_hat()(ns.kept[r], t));
  }
}

TEST(Assemble, CenteringOnlyForGaussian) {
  const ModelSpec spec = case_spec(kCases[4], 5);
  const DataMatrix data = sample(spec, 50, 3);
  AssembleOptions o;
  o.center = true;
  EXPECT_THROW(assemble(spec, data, 0, 1, o), InputError);
}

TEST(Assemble, WithoutPerSampleRowsInfluenceThrows) {
  const ModelSpec spec = case_spec(kCases[0], 5);
  const DataMatrix data = sample(spec, 50, 3);
  AssembleOptions o;
  o.keep_per_sample = false;
  const EdgeScoreSystem sys = assemble(spec, data, 0, 1, o);
  EXPECT_FALSE(sys.has_per_sample());
  EXPECT_THROW(sys.influence(Vector(Vector::Ones(sys.dim())), Vector(Vector::Zero(sys.dim()))), Error);
  EXPECT_LT((sys.gamma_hat() - assemble(spec, data, 0, 1).gamma_hat()).norm(), 1e-12);
}
