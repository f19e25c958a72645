#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "scoreinf/estimators.hpp"
#include "scoreinf/kernels.hpp"
#include "scoreinf/models.hpp"
#include "scoreinf/score_engine.hpp"

namespace scoreinf {

// Tuning shared by the neighborhood and two-sample tests. Penalty constants
// that are NaN fall back to default_lambda_constant.
struct TestOptions {
  double alpha = 0.05;
  int B = 2000;
  std::uint64_t seed = 0;
  double lambda1_c = std::numeric_limits<double>::quiet_NaN();
  double lambda2_c = std::numeric_limits<double>::quiet_NaN();
  AssembleOptions assemble;
  bool keep_influence = false;
};

// Column k holds z_i for edge edges[k] and interaction statistic stats[k].
struct InfluenceMatrix {
  std::vector<std::pair<int, int>> edges;
  std::vector<int> stats;
  Matrix z;  // n x columns
};

struct BootstrapTestResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  double p_value = 1.0;
  int B = 0;
  double alpha = 0.05;
  bool reject = false;
  // One-sided variant: max of sqrt(n)(theta_tilde - theta_null).
  double statistic_one_sided = 0.0;
  double critical_value_one_sided = 0.0;
  bool reject_one_sided = false;
  Vector per_edge_stats;  // sqrt(n)|theta_tilde - theta_null| per column
  std::vector<std::pair<int, int>> edges;
  std::vector<int> stats;
  std::vector<EdgeEstimate> estimates;
  std::optional<InfluenceMatrix> influence;
};

struct Chi2TestResult {
  double statistic = 0.0;  // max over b of T^2
  double critical_value = 0.0;
  double p_value = 1.0;
  double alpha = 0.05;
  bool reject = false;
  Vector per_node_stats;
  std::vector<int> nodes;
};

struct XiaResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Order statistic ceil((1 - alpha) B) of the draws (1-based).
double bootstrap_quantile(std::vector<double> draws, double alpha);
// (1 + #{draws >= statistic}) / (B + 1).
double bootstrap_p_value(const std::vector<double>& draws, double statistic);

// Three-step estimates of every edge (a, b), b != a, sharing one node cache.
std::vector<EdgeEstimate> neighborhood_estimates(const NodeScoreCache& cache, int a,
                                                 double lambda1_c, double lambda2_c);

// H0: theta_ab^(l) = null(b, l) for every b != a. `null` is p x L; row a is ignored.
BootstrapTestResult simultaneous_test(const ModelSpec& spec, const DataMatrix& data, int a,
                                      const Matrix& null, const TestOptions& opts);
BootstrapTestResult isolated_node_test(const ModelSpec& spec, const DataMatrix& data, int a,
                                       const TestOptions& opts);

struct SupportResult {
  IndexSet nodes;  // recovered neighbours of a (0-based)
  Vector thresholds;
  std::vector<EdgeEstimate> estimates;
};
// Keeps b when |theta_tilde_ab| > sqrt(2 V_ab log p / n) for some statistic.
SupportResult support_recovery(const ModelSpec& spec, const DataMatrix& data, int a,
                               const TestOptions& opts = {});

// Two-sample test of equal edge parameters over every pair of nodes.
BootstrapTestResult diff_test(const ModelSpec& spec, const DataMatrix& data1,
                              const DataMatrix& data2, const TestOptions& opts);

// Extreme-value test on two lists of estimates of the same edges.
XiaResult xia_test(const std::vector<EdgeEstimate>& est1, const std::vector<EdgeEstimate>& est2,
                   int p);
double xia_limit_cdf(double t);

// y_alpha with (p - 1) P(chi2_L >= y) = -log(1 - alpha).
double chi2_critical_value(double alpha, int p, int L);
// Chi-square decision from already fitted neighbourhood estimates.
Chi2TestResult chi2_from_estimates(const std::vector<EdgeEstimate>& estimates, int a,
                                   const Matrix& null, double alpha, int p);
Chi2TestResult chi2_simultaneous(const ModelSpec& spec, const DataMatrix& data, int a,
                                 const Matrix& null, const TestOptions& opts);

}  // namespace scoreinf
