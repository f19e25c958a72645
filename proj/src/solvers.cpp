#include "scoreinf/solvers.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "scoreinf/error.hpp"

namespace scoreinf {

namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

void check_problem(const QuadraticLassoProblem& prob) {
  const Index s = prob.A.rows();
  if (prob.A.cols() != s || prob.b.size() != s)
    throw DimensionMismatchError("quadratic problem has inconsistent dimensions");
  if (prob.lambda < 0.0 || !std::isfinite(prob.lambda))
    throw InputError("penalty must be a finite non-negative number");
  if (prob.max_iter < 1) throw InputError("max_iter must be positive");
  std::vector<char> seen(static_cast<size_t>(s), 0);
  for (const IndexSet& g : prob.groups) {
    if (g.empty()) throw InputError("empty group");
    for (Index j : g) {
      if (j < 0 || j >= s) throw InputError("group index out of range");
      if (seen[static_cast<size_t>(j)]) throw InputError("groups overlap");
      seen[static_cast<size_t>(j)] = 1;
    }
  }
}

// Coordinates not covered by any group.
IndexSet ungrouped_coordinates(const QuadraticLassoProblem& prob) {
  std::vector<char> in_group(static_cast<size_t>(prob.A.rows()), 0);
  for (const IndexSet& g : prob.groups)
    for (Index j : g) in_group[static_cast<size_t>(j)] = 1;
  IndexSet out;
  for (Index j = 0; j < prob.A.rows(); ++j)
    if (!in_group[static_cast<size_t>(j)]) out.push_back(j);
  return out;
}

double coordinate_kkt(double grad, double theta, double lambda) {
  if (theta != 0.0) return std::abs(grad + lambda * (theta > 0.0 ? 1.0 : -1.0));
  return std::max(0.0, std::abs(grad) - lambda);
}

double block_kkt(const Vector& grad_g, const Vector& theta_g, double lambda) {
  const double nrm = theta_g.norm();
  if (nrm > 0.0) return (grad_g + lambda * theta_g / nrm).norm();
  return std::max(0.0, grad_g.norm() - lambda);
}

// One exact coordinate minimization; returns the change of theta_j.
double update_coordinate(const Matrix& A, Vector& theta, Vector& grad, Index j, double lambda) {
  const double ajj = A(j, j);
  const double old = theta[j];
  double next;
  if (ajj > 0.0) {
    next = soft_threshold(ajj * old - grad[j], lambda) / ajj;
  } else {
    if (std::abs(grad[j]) > lambda)
      throw InfeasibleError("objective is unbounded below along coordinate " + std::to_string(j));
    next = 0.0;
  }
  const double delta = next - old;
  if (delta != 0.0) {
    theta[j] = next;
    grad.noalias() += A.col(j) * delta;
  }
  return delta;
}

// Minimizes 1/2 u^T A_GG u + c^T u + lambda ||u||_2.
Vector solve_block(const Matrix& agg, const Vector& c, double lambda) {
  const double cn = c.norm();
  if (cn <= lambda) return Vector::Zero(c.size());
  if (c.size() == 1) {
    const double a = agg(0, 0);
    if (a <= 0.0) throw InfeasibleError("objective is unbounded below along a group");
    return Vector::Constant(1, soft_threshold(-c[0], lambda) / a);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(agg);
  const Vector d = eig.eigenvalues().cwiseMax(0.0);
  const Vector ch = eig.eigenvectors().transpose() * c;
  if (lambda == 0.0) {
    if ((d.array() <= 0.0).any()) throw InfeasibleError("singular block without penalty");
    return -(eig.eigenvectors() * ch.cwiseQuotient(d));
  }
  // Radius t = ||u|| solves sum_k ch_k^2 / (d_k t + lambda)^2 = 1. The left
  // side is convex and decreasing in t, so Newton from t = 0 increases
  // monotonically to the root.
  double flat = 0.0;
  for (Index k = 0; k < d.size(); ++k)
    if (d[k] <= 0.0) flat += ch[k] * ch[k];
  if (flat > lambda * lambda * (1.0 + 1e-12))
    throw InfeasibleError("objective is unbounded below along a group");
  double t = 0.0;
  for (int it = 0; it < 200; ++it) {
    double h = -1.0;
    double dh = 0.0;
    for (Index k = 0; k < d.size(); ++k) {
      const double den = d[k] * t + lambda;
      const double q = ch[k] * ch[k] / (den * den);
      h += q;
      dh -= 2.0 * q * d[k] / den;
    }
    if (h <= 1e-15 || dh >= 0.0) break;
    const double step = -h / dh;
    t += step;
    if (step <= 1e-16 * std::max(1.0, t)) break;
  }
  Vector scale(d.size());
  for (Index k = 0; k < d.size(); ++k) scale[k] = t / (d[k] * t + lambda);
  return -(eig.eigenvectors() * scale.cwiseProduct(ch));
}

SolveResult finish(const QuadraticLassoProblem& prob, Vector theta, int iterations) {
  SolveResult out;
  out.kkt_residual = lasso_kkt_residual(prob, theta);
  out.converged = out.kkt_residual <= prob.tol;
  out.iterations = iterations;
  out.support = nonzero_support(theta);
  out.theta = std::move(theta);
  return out;
}

// Exact solve on a fixed active set with fixed signs. Accepted only when the
// signs survive and the KKT residual improves.
bool polish_lasso(const QuadraticLassoProblem& prob, Vector& theta, Vector& grad) {
  const IndexSet active = nonzero_support(theta);
  if (active.empty()) return false;
  const Index m = static_cast<Index>(active.size());
  Matrix aa = submatrix(prob.A, active, active);
  Vector rhs(m);
  for (Index k = 0; k < m; ++k) {
    const Index j = active[static_cast<size_t>(k)];
    rhs[k] = -prob.b[j] - prob.lambda * (theta[j] > 0.0 ? 1.0 : -1.0);
  }
  Eigen::LDLT<Matrix> ldlt(aa);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
  const Vector sol = ldlt.solve(rhs);
  if (!sol.allFinite()) return false;
  Vector candidate = Vector::Zero(theta.size());
  for (Index k = 0; k < m; ++k) {
    const Index j = active[static_cast<size_t>(k)];
    if (sol[k] * theta[j] <= 0.0) return false;
    candidate[j] = sol[k];
  }
  const double before = lasso_kkt_residual(prob, theta);
  const double after = lasso_kkt_residual(prob, candidate);
  if (!(after < before)) return false;
  theta = std::move(candidate);
  grad = prob.A * theta + prob.b;
  return true;
}

}  // namespace

double lasso_objective(const QuadraticLassoProblem& prob, const Vector& theta) {
  double pen = 0.0;
  for (const IndexSet& g : prob.groups) pen += subvector(theta, g).norm();
  for (Index j : ungrouped_coordinates(prob)) pen += std::abs(theta[j]);
  return 0.5 * theta.dot(prob.A * theta) + prob.b.dot(theta) + prob.lambda * pen;
}

double lasso_kkt_residual(const QuadraticLassoProblem& prob, const Vector& theta) {
  const Vector grad = prob.A * theta + prob.b;
  double worst = 0.0;
  for (const IndexSet& g : prob.groups)
    worst = std::max(worst, block_kkt(subvector(grad, g), subvector(theta, g), prob.lambda));
  for (Index j : ungrouped_coordinates(prob))
    worst = std::max(worst, coordinate_kkt(grad[j], theta[j], prob.lambda));
  return worst;
}

SolveResult lasso_cd(const QuadraticLassoProblem& prob) {
  check_problem(prob);
  if (!prob.groups.empty()) throw InputError("lasso_cd does not take groups");
  const Index s = prob.A.rows();
  const double lambda = prob.lambda;
  Vector theta = Vector::Zero(s);
  Vector grad = prob.b;
  int sweeps = 0;
#ifndef NDEBUG
  double last = 0.0;
#endif

  while (sweeps < prob.max_iter) {
    // Full sweep, ascending order.
    for (Index j = 0; j < s; ++j) update_coordinate(prob.A, theta, grad, j, lambda);
    ++sweeps;
#ifndef NDEBUG
    {
      const double obj = lasso_objective(prob, theta);
      assert(obj <= last + 1e-10 * (1.0 + std::abs(last)));
      last = obj;
    }
#endif
    double worst = 0.0;
    for (Index j = 0; j < s; ++j) worst = std::max(worst, coordinate_kkt(grad[j], theta[j], lambda));
    if (worst <= prob.tol) break;

    // Sweeps restricted to the current active set.
    const IndexSet active = nonzero_support(theta);
    while (sweeps < prob.max_iter && !active.empty()) {
      double change = 0.0;
      for (Index j : active)
        change = std::max(change, std::abs(update_coordinate(prob.A, theta, grad, j, lambda)));
      ++sweeps;
      double active_kkt = 0.0;
      for (Index j : active) active_kkt = std::max(active_kkt, coordinate_kkt(grad[j], theta[j], lambda));
      if (active_kkt <= 0.1 * prob.tol || change == 0.0) break;
      if (sweeps % 50 == 0 && polish_lasso(prob, theta, grad)) break;
    }
    polish_lasso(prob, theta, grad);
  }
  return finish(prob, std::move(theta), sweeps);
}

SolveResult group_lasso_cd(const QuadraticLassoProblem& prob) {
  check_problem(prob);
  const Index s = prob.A.rows();
  const double lambda = prob.lambda;
  const IndexSet singles = ungrouped_coordinates(prob);
  std::vector<Matrix> blocks;
  blocks.reserve(prob.groups.size());
  for (const IndexSet& g : prob.groups) blocks.push_back(submatrix(prob.A, g, g));

  Vector theta = Vector::Zero(s);
  Vector grad = prob.b;
  int sweeps = 0;

  auto update_group = [&](size_t k) {
    const IndexSet& g = prob.groups[k];
    const Vector old = subvector(theta, g);
    const Vector c = subvector(grad, g) - blocks[k] * old;
    const Vector next = solve_block(blocks[k], c, lambda);
    const Vector delta = next - old;
    if (delta.cwiseAbs().maxCoeff() == 0.0) return 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
      const Index j = g[i];
      theta[j] = next[static_cast<Index>(i)];
      if (delta[static_cast<Index>(i)] != 0.0)
        grad.noalias() += prob.A.col(j) * delta[static_cast<Index>(i)];
    }
    return delta.cwiseAbs().maxCoeff();
  };

  while (sweeps < prob.max_iter) {
    // Blocks and single coordinates in ascending order of their first index.
    size_t gi = 0;
    size_t si = 0;
    while (gi < prob.groups.size() || si < singles.size()) {
      const bool take_group =
          si >= singles.size() || (gi < prob.groups.size() && prob.groups[gi].front() < singles[si]);
      if (take_group) {
        update_group(gi++);
      } else {
        update_coordinate(prob.A, theta, grad, singles[si++], lambda);
      }
    }
    ++sweeps;
    if (lasso_kkt_residual(prob, theta) <= prob.tol) break;

    // Active-set sweeps.
    std::vector<size_t> active_groups;
    for (size_t k = 0; k < prob.groups.size(); ++k)
      if (subvector(theta, prob.groups[k]).norm() > 0.0) active_groups.push_back(k);
    IndexSet active_singles;
    for (Index j : singles)
      if (theta[j] != 0.0) active_singles.push_back(j);
    while (sweeps < prob.max_iter) {
      double change = 0.0;
      for (size_t k : active_groups) change = std::max(change, update_group(k));
      for (Index j : active_singles)
        change = std::max(change, std::abs(update_coordinate(prob.A, theta, grad, j, lambda)));
      ++sweeps;
      if (change <= 1e-3 * prob.tol) break;
    }
  }
  return finish(prob, std::move(theta), sweeps);
}

Vector refit(const Matrix& A, const Vector& b, const IndexSet& support) {
  if (A.rows() != A.cols() || b.size() != A.rows())
    throw DimensionMismatchError("refit: inconsistent dimensions");
  if (support.empty()) throw InputError("refit: empty support");
  const Matrix ass = submatrix(A, support, support);
  const Vector rhs = -subvector(b, support);

  Eigen::LLT<Matrix> llt(ass);
  bool ok = llt.info() == Eigen::Success && llt.rcond() >= 1e-12;
  if (!ok) {
    const double ridge = 1e-10 * ass.trace() / static_cast<double>(support.size());
    Matrix ridged = ass;
    ridged.diagonal().array() += ridge;
    llt.compute(ridged);
    if (ridge <= 0.0 || llt.info() != Eigen::Success || llt.rcond() < 1e-15)
      throw SingularSystemError("restricted system on " + std::to_string(support.size()) +
                                " coordinates is singular");
  }
  Vector sol = llt.solve(rhs);
  // One refinement step against the unridged matrix.
  sol += llt.solve(rhs - ass * sol);
  if (!sol.allFinite()) throw SingularSystemError("restricted solve produced non-finite values");
  Vector theta = Vector::Zero(A.rows());
  for (size_t k = 0; k < support.size(); ++k) theta[support[k]] = sol[static_cast<Index>(k)];
  return theta;
}

}  // namespace scoreinf
