#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scoreinf/estimators.hpp"
#include "scoreinf/io.hpp"
#include "scoreinf/models.hpp"
#include "scoreinf/samplers.hpp"

namespace scoreinf {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
  std::string scenario = "custom";
  // Model: banded graph with k neighbours.
  Family family = Family::Gaussian;
  int p = 50;
  int k = 4;
  std::vector<std::vector<double>> bands{{0.5, 0.3}};
  std::vector<double> node;  // empty: family defaults
  std::optional<WeightFn> weight_fn;
  // Sampling.
  Index n = 300;
  int reps = 100;
  std::uint64_t seed = 1;
  int burn_in = -1;  // negative: family default
  int thinning = -1;
  // Estimation.
  Method method = Method::ThreeStep;
  std::vector<std::pair<int, int>> edges{{0, 1}};  // 0-based
  double lambda1_c = std::numeric_limits<double>::quiet_NaN();
  double lambda2_c = std::numeric_limits<double>::quiet_NaN();
  double level = 0.95;
  bool center = false;
  // Tests.
  int node_a = 0;
  double alpha = 0.05;
  int B = 2000;
  std::string test = "bootstrap";  // bootstrap | chi2 | both
  // Diagnostics.
  std::string diagnostic = "m_norm";  // m_norm | gamma_small
  std::vector<Index> n_list;
  int large_components = -1;  // negative: family default
  // Output.
  std::string out;

  void validate() const;
  ModelSpec model() const;
  GibbsConfig gibbs(std::uint64_t seed) const;
  double c1() const;
  double c2() const;
};

ExperimentConfig config_from_json(const Json& j);
Json to_json(const ExperimentConfig& cfg);
// FNV-1a over the canonical JSON dump.
std::string config_hash(const ExperimentConfig& cfg);

DataMatrix simulate(const ExperimentConfig& cfg, std::uint64_t seed);

struct ReplicationRecord {
  int rep = 0;
  std::uint64_t seed = 0;
  int a = 0, b = 0;  // edge, or tested node in a
  Vector estimate;
  Vector lower, upper;
  Vector truth;
  Vector variance;
  bool covered = false;
  bool reject = false;       // bootstrap
  bool reject_chi2 = false;
  double statistic = 0.0;
  double critical_value = 0.0;
  double p_value = 1.0;
  double value = 0.0;        // diagnostics
  bool failed = false;
  std::string error;
};

struct ExperimentReport {
  std::string kind;
  ExperimentConfig config;
  std::vector<ReplicationRecord> records;
  Json aggregates;

  Json to_json() const;
  std::string records_csv() const;
};

ExperimentReport run_coverage(const ExperimentConfig& cfg);
ExperimentReport run_type1(const ExperimentConfig& cfg);
ExperimentReport run_diagnostics(const ExperimentConfig& cfg);

// Recomputes the aggregates of a report from its records.
Json aggregate_coverage(const std::vector<ReplicationRecord>& records,
                        const std::vector<std::pair<int, int>>& edges, int reps);
Json aggregate_type1(const std::vector<ReplicationRecord>& records, int reps);

struct GraphReport {
  std::vector<std::string> names;
  std::vector<EdgeEstimate> estimates;
  std::vector<double> p_values;
  std::vector<std::pair<int, int>> edges;  // passing the threshold
  std::vector<int> degree;

  Json to_json() const;
  std::string edges_csv() const;
  std::string estimates_csv() const;
};

GraphReport analyze_dataset(const std::string& csv_path, Family family, double threshold,
                            double lambda1_c = std::numeric_limits<double>::quiet_NaN(),
                            double lambda2_c = std::numeric_limits<double>::quiet_NaN());
GraphReport analyze_dataset(const DataMatrix& data, std::vector<std::string> names, Family family,
                            double threshold, double lambda1_c, double lambda2_c);

// Rows (lower edge, upper edge, count) over equal-width bins.
Matrix emit_histogram(const std::vector<double>& values, int bins);
std::string histogram_csv(const Matrix& hist);

}  // namespace scoreinf
