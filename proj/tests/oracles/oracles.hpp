#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of them share code with the library solvers.

#include <cstdint>
#include <vector>

#include "scoreinf/types.hpp"

namespace scoreinf::oracle {

// 1/2 t'At + b't + lambda * (sum_G ||t_G||_2 + sum_{j not grouped} |t_j|)
double penalized_objective(const Matrix& A, const Vector& b, double lambda,
                           const std::vector<IndexSet>& groups, const Vector& theta);

// Accelerated proximal gradient with adaptive restart.
Vector proximal_gradient(const Matrix& A, const Vector& b, double lambda,
                         const std::vector<IndexSet>& groups, int max_iter = 200000,
                         double tol = 1e-15);

struct LpSolution {
  Vector m;
  double objective = 0.0;
  bool feasible = false;
};

// min ||m||_1 s.t. ||e_j - A m||_inf <= lambda by enumerating vertices
// (sign pattern plus active constraints). Only for small dimensions.
LpSolution clime_vertex_enumeration(const Matrix& A, double lambda, Index j);

// Random symmetric positive definite matrix with eigenvalues in
// [min_eig, min_eig + spread].
Matrix random_spd(Index d, std::uint64_t seed, double min_eig = 0.2, double spread = 2.0);
Vector random_vector(Index d, std::uint64_t seed, double scale = 1.0);

// Partition of a random subset of 0..d-1 into groups of size 1..max_size.
std::vector<IndexSet> random_groups(Index d, std::uint64_t seed, int max_size = 3);

// Central finite difference of f at x along coordinate k.
template <class F>
double central_difference(F&& f, std::vector<double> x, std::size_t k, double h) {
  const double x0 = x[k];
  x[k] = x0 + h;
  const double up = f(x);
  x[k] = x0 - h;
  const double down = f(x);
  return (up - down) / (2.0 * h);
}

}  // namespace scoreinf::oracle
