#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scoreinf/types.hpp"

namespace scoreinf {

enum class Family {
  Gaussian,
  NonNegGaussian,
  NormalConditionalsL1,
  NormalConditionalsL2,
  ExponentialGM,
};

enum class Domain { Reals, NonNegReals };

// Gradient weighting of generalized score matching. Identity is the
// classical Hyvarinen score used on the whole real line.
enum class WeightFn { Identity, Square, LogPlusOne };

std::string_view to_string(Family f);
std::string_view to_string(WeightFn w);
std::string_view to_string(Domain d);
Family family_from_string(std::string_view s);
WeightFn weight_fn_from_string(std::string_view s);

int interaction_count(Family f);  // L
int node_stat_count(Family f);    // K
Domain family_domain(Family f);
WeightFn default_weight_fn(Family f);

// Weight function value and derivative at a single coordinate (x >= 0 unless
// the weight is Identity).
double weight_value(WeightFn w, double x);
double weight_derivative(WeightFn w, double x);

// A pairwise exponential-family model on p nodes.
//
// Statistics (each pair counted once):
//   Gaussian / NonNegGaussian   node  -x_j^2/2        edge  -x_j x_c
//   NormalConditionalsL1        node  (x_j, x_j^2)     edge  x_j^2 x_c^2
//   NormalConditionalsL2        node  (x_j, x_j^2)     edge  (x_j x_c, x_j^2 x_c^2)
//   ExponentialGM               node  -x_j             edge  -x_j x_c
//
// For the Gaussian families node_params(0) holds the precision diagonal and
// edge_params(0) its off-diagonal part. No normalizing constant is ever
// evaluated.
class ModelSpec {
 public:
  ModelSpec(Family family, int p, std::vector<Matrix> edge_params,
            std::vector<Vector> node_params, WeightFn weight_fn);

  // Zero-parameter spec carrying only the statistic structure; what the
  // estimators need when working from data alone.
  static ModelSpec structure(Family family, int p);
  static ModelSpec structure(Family family, int p, WeightFn weight_fn);

  Family family() const { return family_; }
  int p() const { return p_; }
  int L() const { return interaction_count(family_); }
  int K() const { return node_stat_count(family_); }
  Domain domain() const { return family_domain(family_); }
  WeightFn weight_fn() const { return weight_fn_; }

  const Matrix& edge_params(int l) const { return edge_params_.at(l); }
  const Vector& node_params(int k) const { return node_params_.at(k); }
  const std::vector<Matrix>& all_edge_params() const { return edge_params_; }
  const std::vector<Vector>& all_node_params() const { return node_params_; }

  // Precision matrix of the (truncated) Gaussian families.
  Matrix precision() const;

 private:
  Family family_;
  int p_;
  std::vector<Matrix> edge_params_;
  std::vector<Vector> node_params_;
  WeightFn weight_fn_;
};

// Semantic role of one coordinate of the edge-conditional parameter vector.
struct SlotRole {
  enum class Kind { NodeA, NodeB, CrossA, CrossB, Target };
  Kind kind;
  int other;  // the node c of a cross term (or b for Target, -1 for nodes)
  int stat;   // k for node slots, l for edge slots
};

// Coordinate layout of the parameter block theta^{ab} of edge (a, b), a < b,
// nodes 0-based.
//
// Layout: the "row" of a, then the row of b with the shared edge removed.
//   [ a-row: K node stats of a, then for every c != a ascending the L stats of (a,c) ]
//   [ b-row: K node stats of b, then for every c not in {a,b} ascending the L stats of (b,c) ]
// The target block (a,b) therefore sits inside the a-row at the position of
// c = b. For the Gaussian family and edge (1,2) this is
// (theta_11, theta_12, ..., theta_1p, theta_22, ..., theta_2p).
class EdgeIndexMap {
 public:
  EdgeIndexMap(int p, int K, int L, int a, int b);

  int a() const { return a_; }
  int b() const { return b_; }
  int p() const { return p_; }
  int K() const { return K_; }
  int L() const { return L_; }
  Index dim() const { return dim_; }
  // Length K + (p-1)L of a node row.
  Index row_length() const { return row_len_; }

  const std::vector<SlotRole>& slots() const { return slots_; }
  const IndexSet& target_indices() const { return targets_; }
  // Blocks E(a,c), E(b,c) of size L for c not in {a,b}; empty when L == 1.
  const std::vector<IndexSet>& groups() const { return groups_; }
  // Node stats of a and b plus the target block (every coordinate when L == 1).
  const IndexSet& ungrouped() const { return ungrouped_; }

  // Position in theta^{ab} of coordinate r of the a-row / b-row.
  Index a_position(Index r) const { return r; }
  Index b_position(Index r) const { return b_pos_[static_cast<size_t>(r)]; }

 private:
  int p_, K_, L_, a_, b_;
  Index dim_, row_len_;
  std::vector<SlotRole> slots_;
  IndexSet targets_;
  std::vector<IndexSet> groups_;
  IndexSet ungrouped_;
  std::vector<Index> b_pos_;
};

EdgeIndexMap edge_index_map(const ModelSpec& spec, int a, int b);

// Position of the statistic (j,c,l) inside node j's row.
Index row_slot(int K, int L, int j, int c, int l);

// Per-node score pieces at one sample: d1 = l_j^{1/2}(x_j) d/dx_j of the
// statistics involving x_j, and g = l_j psi'' + l'_j psi (the contribution of
// node j to g or g_l). Both have length K + (p-1)L.
void node_row(const ModelSpec& spec, std::span<const double> x, int j,
              std::span<double> d1, std::span<double> g);

struct ScoreComponents {
  Vector phi1;  // d phi / d x_a (weighted)
  Vector phi2;  // d phi / d x_b (weighted)
  Vector g;
};

ScoreComponents score_components(const ModelSpec& spec, std::span<const double> x,
                                 const EdgeIndexMap& map);

// Values of the statistics phi(x) in the layout of `map` (used for
// finite-difference checks).
Vector sufficient_statistics(const ModelSpec& spec, std::span<const double> x,
                             const EdgeIndexMap& map);

// True theta^*_{ab} (length L), read from the stored parameters.
Vector true_edge_value(const ModelSpec& spec, int a, int b);

// Every coordinate of theta^{ab} read from the stored parameters.
Vector true_edge_block(const ModelSpec& spec, const EdgeIndexMap& map);

void check_domain(const ModelSpec& spec, std::span<const double> x);

}  // namespace scoreinf
