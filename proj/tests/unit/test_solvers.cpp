#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "scoreinf/error.hpp"
#include "scoreinf/solvers.hpp"

using namespace scoreinf;

namespace {

QuadraticLassoProblem random_problem(std::uint64_t seed, bool grouped) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> dim(2, 12);
  std::uniform_real_distribution<double> lam(0.01, 0.8);
  const Index d = dim(gen);
  QuadraticLassoProblem prob;
  prob.A = oracle::random_spd(d, seed, 0.1, 3.0);
  prob.b = oracle::random_vector(d, seed + 1);
  prob.lambda = lam(gen);
  if (grouped) prob.groups = oracle::random_groups(d, seed + 2);
  return prob;
}

}  // namespace

TEST(LassoCd, MatchesProximalGradientOracle) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const QuadraticLassoProblem prob = random_problem(1000 + s, false);
    const SolveResult r = lasso_cd(prob);
    ASSERT_TRUE(r.converged);
    const Vector ref = oracle::proximal_gradient(prob.A, prob.b, prob.lambda, {});
    const double f = oracle::penalized_objective(prob.A, prob.b, prob.lambda, {}, r.theta);
    const double f_ref = oracle::penalized_objective(prob.A, prob.b, prob.lambda, {}, ref);
    EXPECT_NEAR(f, f_ref, 1e-6) << "instance " << s;
    EXPECT_LE(f, f_ref + 1e-10);
    EXPECT_LE(r.kkt_residual, 1e-8);
    EXPECT_NEAR(f, lasso_objective(prob, r.theta), 1e-12);
  }
}

TEST(GroupLassoCd, MatchesProximalGradientOracle) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const QuadraticLassoProblem prob = random_problem(5000 + s, true);
    const SolveResult r = group_lasso_cd(prob);
    ASSERT_TRUE(r.converged);
    const Vector ref = oracle::proximal_gradient(prob.A, prob.b, prob.lambda, prob.groups);
    const double f = oracle::penalized_objective(prob.A, prob.b, prob.lambda, prob.groups, r.theta);
    const double f_ref = oracle::penalized_objective(prob.A, prob.b, prob.lambda, prob.groups, ref);
    EXPECT_NEAR(f, f_ref, 1e-6) << "instance " << s;
    EXPECT_LE(r.kkt_residual, 1e-8);
  }
}

TEST(LassoCd, ZeroPenaltyIsLinearSolve) {
  const Matrix A = oracle::random_spd(6, 4);
  const Vector b = oracle::random_vector(6, 5);
  QuadraticLassoProblem prob{A, b, 0.0, {}};
  const SolveResult r = lasso_cd(prob);
  EXPECT_LT((r.theta + A.ldlt().solve(b)).norm(), 1e-9);
}

TEST(LassoCd, LargePenaltyGivesZero) {
  const Matrix A = oracle::random_spd(5, 7);
  const Vector b = oracle::random_vector(5, 8);
  QuadraticLassoProblem prob{A, b, b.lpNorm<Eigen::Infinity>() * 1.01, {}};
  const SolveResult r = lasso_cd(prob);
  EXPECT_EQ(r.theta.lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_TRUE(r.support.empty());
}

TEST(LassoCd, RejectsGroups) {
  QuadraticLassoProblem prob{Matrix::Identity(3, 3), Vector::Ones(3), 0.1, {{0, 1}}};
  EXPECT_THROW(lasso_cd(prob), InputError);
}

TEST(GroupLassoCd, SingletonGroupsEqualLasso) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    QuadraticLassoProblem prob = random_problem(9000 + s, false);
    const SolveResult plain = lasso_cd(prob);
    for (Index j = 0; j < prob.b.size(); ++j) prob.groups.push_back({j});
    const SolveResult grouped = group_lasso_cd(prob);
    EXPECT_LT((plain.theta - grouped.theta).lpNorm<Eigen::Infinity>(), 1e-7);
  }
}

TEST(GroupLassoCd, RejectsOverlappingGroups) {
  QuadraticLassoProblem prob{Matrix::Identity(3, 3), Vector::Ones(3), 0.1, {{0, 1}, {1, 2}}};
  EXPECT_THROW(group_lasso_cd(prob), InputError);
}

TEST(Solvers, UnboundedCoordinateIsReported) {
  Matrix A = Matrix::Identity(3, 3);
  A(2, 2) = 0.0;
  Vector b(3);
  b << 0.1, 0.2, 1.0;
  QuadraticLassoProblem prob{A, b, 0.5, {}};
  EXPECT_THROW(lasso_cd(prob), InfeasibleError);
}

TEST(Refit, SolvesRestrictedSystem) {
  const Matrix A = oracle::random_spd(7, 12);
  const Vector b = oracle::random_vector(7, 13);
  const IndexSet S = {0, 2, 5};
  const Vector t = refit(A, b, S);
  Matrix As(3, 3);
  Vector bs(3);
  for (Index i = 0; i < 3; ++i) {
    bs[i] = b[S[i]];
    for (Index j = 0; j < 3; ++j) As(i, j) = A(S[i], S[j]);
  }
  const Vector expect = -As.inverse() * bs;
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(t[S[i]], expect[i], 1e-12);
  EXPECT_EQ(t[1], 0.0);
  // optimality residual of the restricted problem
  Vector grad = A * t + b;
  for (Index j : S) EXPECT_LE(std::abs(grad[j]), 1e-8);
}

TEST(Refit, SingularSystemThrows) {
  Matrix A = Matrix::Zero(3, 3);
  A(0, 0) = 1.0;
  EXPECT_THROW(refit(A, Vector::Ones(3), {1, 2}), SingularSystemError);
}
