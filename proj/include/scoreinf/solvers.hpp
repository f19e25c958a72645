#pragma once

#include <vector>

#include "scoreinf/types.hpp"

namespace scoreinf {

// minimize 1/2 theta^T A theta + b^T theta + lambda * penalty(theta)
//
// penalty = sum over groups G of ||theta_G||_2 + sum of |theta_j| over the
// coordinates in no group. Without groups this is the lasso.
struct QuadraticLassoProblem {
  Matrix A;
  Vector b;
  double lambda = 0.0;
  std::vector<IndexSet> groups;
  double tol = 1e-8;
  int max_iter = 100000;
};

struct SolveResult {
  Vector theta;
  IndexSet support;
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

double lasso_objective(const QuadraticLassoProblem& prob, const Vector& theta);
double lasso_kkt_residual(const QuadraticLassoProblem& prob, const Vector& theta);

SolveResult lasso_cd(const QuadraticLassoProblem& prob);
SolveResult group_lasso_cd(const QuadraticLassoProblem& prob);

// Solves A_SS theta_S = -b_S, zero elsewhere. A single ridge of
// 1e-10 tr(A_SS)/|S| is added when A_SS is numerically singular.
Vector refit(const Matrix& A, const Vector& b, const IndexSet& support);

struct ClimeRowInfo {
  Index row = 0;
  double l1_norm = 0.0;
  double constraint_violation = 0.0;  // max(0, ||e_j - A m||_inf - lambda)
  double dual_gap = 0.0;
  double dual_infeasibility = 0.0;    // max(0, ||A y||_inf - 1)
  int iterations = 0;
};

struct ClimeResult {
  Matrix M;  // |rows| x s, row k solves the program for rows[k]
  std::vector<ClimeRowInfo> info;
};

// Row-wise program: minimize ||m||_1 subject to ||e_j - A m||_inf <= lambda.
// Each row carries a primal-dual optimality certificate; rows that fail it
// raise NumericalError.
ClimeResult clime_rows(const Matrix& A, double lambda, const IndexSet& rows);

}  // namespace scoreinf
