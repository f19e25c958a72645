#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "scoreinf/error.hpp"
#include "scoreinf/models.hpp"
#include "scoreinf/samplers.hpp"

using namespace scoreinf;

namespace {

const Family kFamilies[] = {Family::Gaussian, Family::NonNegGaussian,
                            Family::NormalConditionalsL1, Family::NormalConditionalsL2,
                            Family::ExponentialGM};

std::vector<double> random_point(Family f, int p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.4, 2.0);
  std::normal_distribution<double> nd;
  std::vector<double> x(static_cast<size_t>(p));
  for (double& v : x) v = family_domain(f) == Domain::Reals ? nd(gen) : u(gen);
  return x;
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(EdgeIndexMap, GaussianWorkedExample) {
  // p = 4, edge (1,2): theta_11, theta_12, theta_13, theta_14, theta_22, theta_23, theta_24
  const EdgeIndexMap m(4, 1, 1, 0, 1);
  ASSERT_EQ(m.dim(), 7);
  EXPECT_EQ(m.target_indices(), IndexSet{1});
  EXPECT_EQ(m.slots()[0].kind, SlotRole::Kind::NodeA);
  EXPECT_EQ(m.slots()[4].kind, SlotRole::Kind::NodeB);
  EXPECT_EQ(m.slots()[5].other, 2);
  EXPECT_EQ(m.slots()[6].other, 3);
  EXPECT_TRUE(m.groups().empty());
  EXPECT_EQ(m.ungrouped().size(), 7u);
  // b-row (theta_22, theta_21, theta_23, theta_24) lands on positions (4, 1, 5, 6)
  EXPECT_EQ(m.b_position(0), 4);
  EXPECT_EQ(m.b_position(1), 1);
  EXPECT_EQ(m.b_position(2), 5);
  EXPECT_EQ(m.b_position(3), 6);
}

TEST(EdgeIndexMap, DimensionFormulaAndGroups) {
  for (int p : {3, 5, 9}) {
    for (int K : {1, 2}) {
      for (int L : {1, 2}) {
        const EdgeIndexMap m(p, K, L, 1, p - 1);
        EXPECT_EQ(m.dim(), 2 * K + (2 * p - 3) * L);
        EXPECT_EQ(m.row_length(), K + (p - 1) * L);
        EXPECT_EQ(static_cast<int>(m.target_indices().size()), L);
        std::set<Index> seen;
        for (Index r = 0; r < m.row_length(); ++r) seen.insert(m.b_position(r));
        EXPECT_EQ(static_cast<Index>(seen.size()), m.row_length());
        if (L == 1) {
          EXPECT_TRUE(m.groups().empty());
        } else {
          EXPECT_EQ(static_cast<int>(m.groups().size()), 2 * (p - 2));
          Index covered = static_cast<Index>(m.ungrouped().size());
          for (const auto& g : m.groups()) {
            EXPECT_EQ(static_cast<int>(g.size()), L);
            covered += static_cast<Index>(g.size());
          }
          EXPECT_EQ(covered, m.dim());
        }
      }
    }
  }
}

TEST(EdgeIndexMap, RejectsBadEdges) {
  EXPECT_THROW(EdgeIndexMap(4, 1, 1, 2, 2), InvalidEdgeError);
  EXPECT_THROW(EdgeIndexMap(4, 1, 1, 2, 1), InvalidEdgeError);
  EXPECT_THROW(EdgeIndexMap(4, 1, 1, 0, 4), InvalidEdgeError);
}

TEST(ModelSpec, ParsingRoundTrip) {
  for (Family f : kFamilies) EXPECT_EQ(family_from_string(to_string(f)), f);
  EXPECT_EQ(family_from_string("nng"), Family::NonNegGaussian);
  EXPECT_THROW(family_from_string("poisson"), InputError);
  EXPECT_EQ(weight_fn_from_string("log_plus_one"), WeightFn::LogPlusOne);
}

TEST(ModelSpec, IdentityWeightOnlyOnReals) {
  EXPECT_THROW(ModelSpec::structure(Family::NonNegGaussian, 4, WeightFn::Identity),
               InvalidSpecError);
  EXPECT_NO_THROW(ModelSpec::structure(Family::Gaussian, 4));
}

TEST(ModelSpec, TrueEdgeValueReadsBands) {
  const ModelSpec spec = knn_graph_spec(Family::Gaussian, 10, 4, {0.5, 0.3});
  EXPECT_DOUBLE_EQ(true_edge_value(spec, 0, 1)[0], 0.5);
  EXPECT_DOUBLE_EQ(true_edge_value(spec, 0, 2)[0], 0.3);
  EXPECT_DOUBLE_EQ(true_edge_value(spec, 0, 3)[0], 0.0);
  EXPECT_DOUBLE_EQ(true_edge_value(spec, 3, 2)[0], 0.5);
}

TEST(ModelSpec, KnnRejectsOddK) {
  EXPECT_THROW(knn_graph_spec(Family::Gaussian, 10, 3, {0.5}), InputError);
}

// d1 = l^{1/2}(x_a) d phi / d x_a against a finite difference of the statistics.
TEST(ScoreComponents, FirstDerivativesMatchFiniteDifferences) {
  for (Family f : kFamilies) {
    for (WeightFn w : {WeightFn::Identity, WeightFn::Square, WeightFn::LogPlusOne}) {
      if ((w == WeightFn::Identity) != (family_domain(f) == Domain::Reals)) continue;
      const int p = 5;
      const ModelSpec spec = ModelSpec::structure(f, p, w);
      const EdgeIndexMap map = edge_index_map(spec, 1, 3);
      for (std::uint64_t s = 0; s < 5; ++s) {
        const auto x = random_point(f, p, 100 + s);
        const ScoreComponents sc = score_components(spec, x, map);
        for (Index k = 0; k < map.dim(); ++k) {
          auto stat = [&](const std::vector<double>& y) {
            return sufficient_statistics(spec, y, map)[k];
          };
          const double da = oracle::central_difference(stat, x, 1, 1e-5);
          const double db = oracle::central_difference(stat, x, 3, 1e-5);
          const double la = std::sqrt(weight_value(w, x[1]));
          const double lb = std::sqrt(weight_value(w, x[3]));
          EXPECT_LT(relative_gap(sc.phi1[k], la * da), 1e-6) << to_string(f) << " k=" << k;
          EXPECT_LT(relative_gap(sc.phi2[k], lb * db), 1e-6) << to_string(f) << " k=" << k;
        }
      }
    }
  }
}

// g = d/dx_a (l d phi/dx_a) + d/dx_b (l d phi/dx_b), with l d phi/dx = l^{1/2} phi1.
TEST(ScoreComponents, SecondOrderTermMatchesFiniteDifferences) {
  for (Family f : kFamilies) {
    for (WeightFn w : {WeightFn::Identity, WeightFn::Square, WeightFn::LogPlusOne}) {
      if ((w == WeightFn::Identity) != (family_domain(f) == Domain::Reals)) continue;
      const int p = 4;
      const ModelSpec spec = ModelSpec::structure(f, p, w);
      const EdgeIndexMap map = edge_index_map(spec, 0, 2);
      for (std::uint64_t s = 0; s < 5; ++s) {
        const auto x = random_point(f, p, 300 + s);
        const ScoreComponents sc = score_components(spec, x, map);
        for (Index k = 0; k < map.dim(); ++k) {
          auto flux_a = [&](const std::vector<double>& y) {
            return std::sqrt(weight_value(w, y[0])) * score_components(spec, y, map).phi1[k];
          };
          auto flux_b = [&](const std::vector<double>& y) {
            return std::sqrt(weight_value(w, y[2])) * score_components(spec, y, map).phi2[k];
          };
          const double expect = oracle::central_difference(flux_a, x, 0, 1e-5) +
                                oracle::central_difference(flux_b, x, 2, 1e-5);
          EXPECT_LT(relative_gap(sc.g[k], expect), 1e-6) << to_string(f) << " k=" << k;
        }
      }
    }
  }
}

TEST(ScoreComponents, NodeRowScatterMatchesEdgeComponents) {
  const ModelSpec spec = ModelSpec::structure(Family::NormalConditionalsL2, 5);
  const EdgeIndexMap map = edge_index_map(spec, 1, 4);
  const auto x = random_point(Family::NormalConditionalsL2, 5, 9);
  std::vector<double> d1a(static_cast<size_t>(map.row_length())), ga(d1a.size());
  std::vector<double> d1b(d1a.size()), gb(d1a.size());
  node_row(spec, x, 1, d1a, ga);
  node_row(spec, x, 4, d1b, gb);
  const ScoreComponents sc = score_components(spec, x, map);
  Vector g = Vector::Zero(map.dim());
  for (Index r = 0; r < map.row_length(); ++r) {
    EXPECT_DOUBLE_EQ(sc.phi1[map.a_position(r)], d1a[static_cast<size_t>(r)]);
    EXPECT_DOUBLE_EQ(sc.phi2[map.b_position(r)], d1b[static_cast<size_t>(r)]);
    g[map.a_position(r)] += ga[static_cast<size_t>(r)];
    g[map.b_position(r)] += gb[static_cast<size_t>(r)];
  }
  EXPECT_LT((g - sc.g).norm(), 1e-12);
}

TEST(ScoreComponents, DomainIsChecked) {
  const ModelSpec spec = ModelSpec::structure(Family::ExponentialGM, 3);
  const std::vector<double> bad = {1.0, -0.5, 2.0};
  EXPECT_THROW(check_domain(spec, bad), DomainError);
}
