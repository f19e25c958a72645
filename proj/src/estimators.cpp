#include "scoreinf/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <iostream>
#include <string>

#include "scoreinf/distributions.hpp"
#include "scoreinf/error.hpp"

namespace scoreinf {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::ThreeStep: return "three_step";
    case Method::Debiased: return "debiased";
    case Method::GroupL: return "group_l";
  }
  return "unknown";
}

Method method_from_string(std::string_view s) {
  for (Method m : {Method::ThreeStep, Method::Debiased, Method::GroupL})
    if (s == to_string(m)) return m;
  if (s == "debias") return Method::Debiased;
  if (s == "group" || s == "groupL") return Method::GroupL;
  throw InputError("unknown method '" + std::string(s) + "'");
}

double default_lambda_constant(Domain domain) { return domain == Domain::Reals ? 0.5 : 1.0; }

double default_lambda(Index dim, Index n, double c) {
  if (n < 1) throw EmptyDataError("no samples");
  return c * std::sqrt(std::log(static_cast<double>(dim)) / static_cast<double>(n));
}

std::pair<DataMatrix, DataMatrix> split_even_odd(const DataMatrix& data) {
  std::vector<Index> even, odd;
  for (Index i = 0; i < data.n(); ++i) (i % 2 == 0 ? even : odd).push_back(i);
  if (even.empty() || odd.empty()) throw EmptyDataError("too few samples to split");
  return {data.rows(even), data.rows(odd)};
}

namespace {

// Adds every member of a group that has at least one member in `support`.
IndexSet close_over_groups(IndexSet support, const std::vector<IndexSet>& groups) {
  for (const IndexSet& g : groups) {
    for (Index j : g) {
      if (std::binary_search(support.begin(), support.end(), j)) {
        support = set_union(support, g);
        break;
      }
    }
  }
  return support;
}

SolveResult penalized_solve(QuadraticLassoProblem prob) {
  SolveResult res = prob.groups.empty() ? lasso_cd(prob) : group_lasso_cd(prob);
  if (!res.converged)
    throw NumericalError("penalized solver did not converge (KKT residual " +
                         std::to_string(res.kkt_residual) + " after " +
                         std::to_string(res.iterations) + " sweeps)");
  return res;
}

// Groups of `map` re-indexed into the coordinates `kept`.
std::vector<IndexSet> restrict_groups(const std::vector<IndexSet>& groups, const IndexSet& kept) {
  std::vector<IndexSet> out;
  for (const IndexSet& g : groups) {
    IndexSet mapped;
    for (Index j : g) {
      auto it = std::lower_bound(kept.begin(), kept.end(), j);
      if (it != kept.end() && *it == j) mapped.push_back(it - kept.begin());
    }
    if (!mapped.empty()) out.push_back(mapped);
  }
  return out;
}

}  // namespace

Matrix sandwich_variance(const Matrix& H, const Matrix& Z, const IndexSet& targets) {
  if (H.rows() != H.cols() || Z.rows() != H.rows() || Z.cols() != H.cols())
    throw DimensionMismatchError("sandwich_variance: inconsistent dimensions");
  const Eigen::PartialPivLU<Matrix> lu(H.transpose());
  if (std::abs(lu.determinant()) == 0.0) throw SingularSystemError("singular restricted matrix");
  Matrix E = Matrix::Zero(H.rows(), static_cast<Index>(targets.size()));
  for (size_t l = 0; l < targets.size(); ++l) E(targets[l], static_cast<Index>(l)) = 1.0;
  const Matrix U = lu.solve(E);
  Matrix V = U.transpose() * Z * U;
  return 0.5 * (V + V.transpose());
}

Matrix variance_hat(const EdgeScoreSystem& system, const IndexSet& support, const Vector& theta,
                    const IndexSet& targets) {
  const Matrix H = submatrix(system.gamma_hat(), support, support);
  Matrix E = Matrix::Zero(static_cast<Index>(support.size()), static_cast<Index>(targets.size()));
  for (size_t l = 0; l < targets.size(); ++l) {
    auto it = std::lower_bound(support.begin(), support.end(), targets[l]);
    if (it == support.end() || *it != targets[l])
      throw InputError("target coordinate missing from the support");
    E(it - support.begin(), static_cast<Index>(l)) = 1.0;
  }
  Eigen::LLT<Matrix> llt(H);
  if (llt.info() != Eigen::Success) throw SingularSystemError("singular restricted matrix");
  const Matrix Us = llt.solve(E);
  Matrix U = Matrix::Zero(system.dim(), Us.cols());
  for (size_t k = 0; k < support.size(); ++k) U.row(support[k]) = Us.row(static_cast<Index>(k));
  const Matrix infl = system.influence(U, theta);
  Matrix V = infl.transpose() * infl / static_cast<double>(system.n());
  return 0.5 * (V + V.transpose());
}

EdgeEstimate three_step_from_system(const EdgeScoreSystem& system, double lambda1,
                                    double lambda2) {
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) throw InputError("penalties must be non-negative");
  const EdgeIndexMap& map = system.map();
  const Index s = map.dim();
  const Index n = system.n();
  const IndexSet& targets = map.target_indices();
  const auto& groups = map.groups();
  const Matrix& G = system.gamma_hat();

  EdgeEstimate est;
  est.a = map.a();
  est.b = map.b();
  est.method = map.L() > 1 ? Method::GroupL : Method::ThreeStep;
  est.n = n;
  est.targets = targets;

  // Step 1: pilot fit.
  QuadraticLassoProblem step1{G, system.g_hat(), lambda1, groups};
  const SolveResult pilot = penalized_solve(step1);
  est.M1_hat = close_over_groups(pilot.support, groups);

  // Step 2: one nuisance regression per target coordinate.
  IndexSet m2;
  for (Index t : targets) {
    const NuisanceSystem ns = nuisance_regression_system(system, t);
    QuadraticLassoProblem step2{ns.A, -ns.b, lambda2, restrict_groups(groups, ns.kept)};
    const SolveResult nuis = penalized_solve(step2);
    Vector full = Vector::Zero(s);
    IndexSet supp;
    for (Index k : nuis.support) supp.push_back(ns.kept[static_cast<size_t>(k)]);
    for (Index k = 0; k < nuis.theta.size(); ++k) full[ns.kept[static_cast<size_t>(k)]] = nuis.theta[k];
    est.gamma_hat.push_back(std::move(full));
    m2 = set_union(m2, supp);
  }
  est.M2_hat = close_over_groups(m2, groups);

  // Step 3: refit on the union.
  est.M_tilde = set_union(set_union(targets, est.M1_hat), est.M2_hat);
  if (static_cast<Index>(est.M_tilde.size()) >= n)
    throw OverparameterizedError("refit support of size " + std::to_string(est.M_tilde.size()) +
                                 " is not smaller than n=" + std::to_string(n));
  est.theta_full = refit(G, system.g_hat(), est.M_tilde);
  est.theta_tilde = subvector(est.theta_full, targets);

  // Refitted nuisance directions and the residual scale.
  const Index L = static_cast<Index>(targets.size());
  est.sigma_n.resize(L);
  est.U = Matrix::Zero(s, L);
  for (Index l = 0; l < L; ++l) {
    const Index t = targets[static_cast<size_t>(l)];
    const IndexSet rest = set_difference(est.M_tilde, IndexSet{t});
    Vector gamma = Vector::Zero(s);
    if (!rest.empty()) gamma = refit(G, -G.col(t), rest);
    Vector w = -gamma;
    w[t] = 1.0;
    const double sigma = w.dot(G.col(t));
    if (!(std::abs(sigma) > 1e-14 * std::max(1.0, std::abs(G(t, t)))))
      throw DegenerateVarianceError("residual scale of the target coordinate vanishes");
    est.sigma_n[l] = sigma;
    est.U.col(l) = w / sigma;
    est.gamma_tilde.push_back(std::move(gamma));
  }

  if (system.has_per_sample()) {
    const Matrix infl = system.influence(est.U, est.theta_full);
    Matrix V = infl.transpose() * infl / static_cast<double>(n);
    est.V_hat = 0.5 * (V + V.transpose());
  } else {
    est.V_hat = Matrix::Constant(L, L, std::numeric_limits<double>::quiet_NaN());
  }
  return est;
}

EdgeEstimate three_step_edge(const ModelSpec& spec, const DataMatrix& data, int a, int b,
                             double lambda1, double lambda2, AssembleOptions opts) {
  return three_step_from_system(assemble(spec, data, a, b, opts), lambda1, lambda2);
}

EdgeEstimate three_step_edge_groupL(const ModelSpec& spec, const DataMatrix& data, int a, int b,
                                    double lambda1, double lambda2, AssembleOptions opts) {
  return three_step_edge(spec, data, a, b, lambda1, lambda2, opts);
}

Matrix debias_rows(const Matrix& gamma_hat, const IndexSet& targets, double lambda2,
                   DebiasMatrix m_source) {
  if (m_source == DebiasMatrix::Clime) return clime_rows(gamma_hat, lambda2, targets).M;
  const Eigen::PartialPivLU<Matrix> lu(gamma_hat.transpose());
  Eigen::JacobiSVD<Matrix> svd(gamma_hat);
  const Vector sv = svd.singularValues();
  if (sv.size() == 0 || sv[sv.size() - 1] <= 1e-13 * sv[0])
    throw SingularSystemError("empirical score matrix is not invertible");
  Matrix E = Matrix::Zero(gamma_hat.rows(), static_cast<Index>(targets.size()));
  for (size_t l = 0; l < targets.size(); ++l) E(targets[l], static_cast<Index>(l)) = 1.0;
  return lu.solve(E).transpose();
}

EdgeEstimate debiased_edge(const ModelSpec& spec, const DataMatrix& half1,
                           const DataMatrix& half2, int a, int b, double lambda1, double lambda2,
                           DebiasMatrix m_source) {
  const EdgeScoreSystem sys1 = assemble(spec, half1, a, b);
  const EdgeScoreSystem sys2 = assemble(spec, half2, a, b, {.keep_per_sample = false});
  const EdgeIndexMap& map = sys1.map();
  const IndexSet& targets = map.target_indices();
  const Index L = static_cast<Index>(targets.size());

  EdgeEstimate est;
  est.a = a;
  est.b = b;
  est.method = Method::Debiased;
  est.n = sys1.n();
  est.targets = targets;

  QuadraticLassoProblem step1{sys1.gamma_hat(), sys1.g_hat(), lambda1, map.groups()};
  const SolveResult pilot = penalized_solve(step1);
  est.M1_hat = close_over_groups(pilot.support, map.groups());

  const Matrix M = debias_rows(sys2.gamma_hat(), targets, lambda2, m_source);
  const Vector grad = sys1.gamma_hat() * pilot.theta + sys1.g_hat();
  est.theta_full = pilot.theta;
  est.theta_tilde.resize(L);
  est.sigma_n.resize(L);
  for (Index l = 0; l < L; ++l) {
    const Index t = targets[static_cast<size_t>(l)];
    est.theta_tilde[l] = pilot.theta[t] - M.row(l).dot(grad);
    est.theta_full[t] = est.theta_tilde[l];
    est.sigma_n[l] = M.row(l).dot(sys1.gamma_hat().col(t));
  }
  est.U = M.transpose();
  for (Index l = 0; l < L; ++l) est.M2_hat = set_union(est.M2_hat, nonzero_support(M.row(l).transpose()));
  est.M_tilde = set_union(set_union(targets, est.M1_hat), est.M2_hat);

  Matrix infl = sys1.influence(est.U, pilot.theta);
  infl.rowwise() -= infl.colwise().mean();
  Matrix V = infl.transpose() * infl / static_cast<double>(sys1.n());
  est.V_hat = 0.5 * (V + V.transpose());
  return est;
}

ConfidenceInterval confidence_interval(const EdgeEstimate& est, double level) {
  if (!(level > 0.0 && level < 1.0)) throw InputError("confidence level must lie in (0, 1)");
  const double z = two_sided_z(level);
  ConfidenceInterval ci;
  ci.level = level;
  const Index L = est.theta_tilde.size();
  ci.lower.resize(L);
  ci.upper.resize(L);
  for (Index l = 0; l < L; ++l) {
    const double v = est.V_hat(l, l);
    if (!(v >= 0.0)) throw DegenerateVarianceError("variance estimate is negative or undefined");
    const double half = z * std::sqrt(v / static_cast<double>(est.n));
    ci.lower[l] = est.theta_tilde[l] - half;
    ci.upper[l] = est.theta_tilde[l] + half;
  }
  return ci;
}

double p_value(const EdgeEstimate& est, double null_value, int l) {
  const double v = est.V_hat(l, l);
  if (!(v >= 0.0)) throw DegenerateVarianceError("variance estimate is negative or undefined");
  const double diff = std::abs(est.theta_tilde[l] - null_value);
  if (diff == 0.0) return 1.0;
  if (v == 0.0) {
    std::cerr << "warning: zero variance estimate for edge (" << est.a + 1 << "," << est.b + 1
              << "); reporting p = 0\n";
    return 0.0;
  }
  return 2.0 * normal_sf(diff / std::sqrt(v / static_cast<double>(est.n)));
}

}  // namespace scoreinf
