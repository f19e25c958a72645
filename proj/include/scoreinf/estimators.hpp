#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "scoreinf/models.hpp"
#include "scoreinf/score_engine.hpp"
#include "scoreinf/solvers.hpp"
#include "scoreinf/types.hpp"

namespace scoreinf {

enum class Method { ThreeStep, Debiased, GroupL };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);

struct EdgeEstimate {
  int a = 0;
  int b = 0;
  Method method = Method::ThreeStep;
  Index n = 0;  // sample size the variance refers to
  Vector theta_tilde;       // length L
  Vector theta_full;        // length s'
  IndexSet targets;         // positions of theta_tilde inside theta_full
  IndexSet M1_hat, M2_hat, M_tilde;
  Vector sigma_n;           // length L
  Matrix V_hat;             // L x L
  std::vector<Vector> gamma_hat;    // Step-2 solutions, length s' with zero at the target
  std::vector<Vector> gamma_tilde;  // refitted nuisance directions, same layout
  Matrix U;                 // s' x L influence directions
};

struct ConfidenceInterval {
  double level = 0.95;
  Vector lower;
  Vector upper;
};

// lambda = c * sqrt(log(s') / n).
double default_lambda_constant(Domain domain);
double default_lambda(Index dim, Index n, double c);

// Even rows go to the first half, odd rows to the second.
std::pair<DataMatrix, DataMatrix> split_even_odd(const DataMatrix& data);

// Three-step estimate on an assembled system. With L > 1 the group penalties
// of the edge map are used in Steps 1 and 2.
EdgeEstimate three_step_from_system(const EdgeScoreSystem& system, double lambda1, double lambda2);

EdgeEstimate three_step_edge(const ModelSpec& spec, const DataMatrix& data, int a, int b,
                             double lambda1, double lambda2, AssembleOptions opts = {});
EdgeEstimate three_step_edge_groupL(const ModelSpec& spec, const DataMatrix& data, int a, int b,
                                    double lambda1, double lambda2, AssembleOptions opts = {});

enum class DebiasMatrix { Clime, ExactInverse };

EdgeEstimate debiased_edge(const ModelSpec& spec, const DataMatrix& half1,
                           const DataMatrix& half2, int a, int b, double lambda1, double lambda2,
                           DebiasMatrix m_source = DebiasMatrix::Clime);

// Target rows (L x s') of the debiasing matrix built from gamma_hat.
Matrix debias_rows(const Matrix& gamma_hat, const IndexSet& targets, double lambda2,
                   DebiasMatrix m_source);

// e_T^T H^{-1} Z H^{-1} e_T for target positions T inside H.
Matrix sandwich_variance(const Matrix& H, const Matrix& Z, const IndexSet& targets);

// Variance of the refitted estimate restricted to `support`:
// Z = E_n[r_i r_i^T] with r_i = (Gamma(x_i) theta + g(x_i)) restricted to support.
Matrix variance_hat(const EdgeScoreSystem& system, const IndexSet& support, const Vector& theta,
                    const IndexSet& targets);

ConfidenceInterval confidence_interval(const EdgeEstimate& est, double level);

// Two-sided normal p-value of coordinate l against `null_value`.
double p_value(const EdgeEstimate& est, double null_value, int l = 0);

}  // namespace scoreinf
