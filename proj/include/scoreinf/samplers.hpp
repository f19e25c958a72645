#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "scoreinf/models.hpp"
#include "scoreinf/random.hpp"
#include "scoreinf/score_engine.hpp"

namespace scoreinf {

struct GibbsConfig {
  int burn_in = 500;
  int thinning = 3;
  std::uint64_t seed = 0;

  void validate() const;
  // 1000/5 for the truncated Gaussian, 500/3 otherwise.
  static GibbsConfig defaults_for(Family family, std::uint64_t seed);
};

// Banded ("k nearest neighbour") parameters: nodes j and j +- d are joined for
// d = 1..k/2 with weight bands[l][d-1] on interaction statistic l. Node
// parameters are constant across nodes.
struct GraphSpecOptions {
  std::vector<std::vector<double>> bands;  // one list per interaction statistic
  std::vector<double> node;                // K values; empty selects family defaults
  std::optional<WeightFn> weight_fn;
};

// Family defaults for node parameters: Gaussian families 1, normal
// conditionals (0.4, -2), exponential 2.
std::vector<double> default_node_values(Family family);

ModelSpec knn_graph_spec(Family family, int p, int k, const std::vector<double>& weights);
ModelSpec knn_graph_spec(Family family, int p, int k, const GraphSpecOptions& opts);

DataMatrix sample_gaussian(const ModelSpec& spec, Index n, std::uint64_t seed);
DataMatrix sample_nonneg_gaussian_gibbs(const ModelSpec& spec, Index n, const GibbsConfig& cfg);
DataMatrix sample_normal_conditionals_gibbs(const ModelSpec& spec, Index n, const GibbsConfig& cfg);
DataMatrix sample_exponential_gibbs(const ModelSpec& spec, Index n, const GibbsConfig& cfg);

// Dispatches on the family with default chain settings.
DataMatrix sample(const ModelSpec& spec, Index n, std::uint64_t seed);

// Standard normal conditioned on Z >= alpha.
double truncated_normal_tail(Rng& rng, double alpha);

}  // namespace scoreinf
