#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "scoreinf/models.hpp"
#include "scoreinf/types.hpp"

namespace scoreinf {

// n x p sample matrix tagged with its domain.
class DataMatrix {
 public:
  DataMatrix(Matrix values, Domain domain);

  Index n() const { return values_.rows(); }
  Index p() const { return values_.cols(); }
  Domain domain() const { return domain_; }
  const Matrix& values() const { return values_; }

  DataMatrix rows(const std::vector<Index>& idx) const;

 private:
  Matrix values_;
  Domain domain_;
};

struct AssembleOptions {
  // Keep the per-sample score pieces. Needed for variances and the bootstrap.
  bool keep_per_sample = true;
  // Subtract column means before assembling (Gaussian family only).
  bool center = false;
};

// Per-node score rows over all samples. For node j, d1 and g are n x R with
// R = K + (p-1)L, the layout of a node row (see EdgeIndexMap). Everything an
// edge system needs is a scatter of two node blocks, so a node's Gram matrix
// is computed once and reused by all p-1 edges touching it.
struct NodeBlock {
  Matrix d1;     // n x R, empty in streaming mode
  Matrix g;      // n x R, empty in streaming mode
  Matrix gram;   // R x R, (1/n) d1^T d1
  Vector g_mean; // R
};

class NodeScoreCache {
 public:
  NodeScoreCache(const ModelSpec& spec, const DataMatrix& data, AssembleOptions opts = {});

  const ModelSpec& spec() const { return spec_; }
  Index n() const { return n_; }
  const AssembleOptions& options() const { return opts_; }

  // Computed on first use; safe to call concurrently.
  std::shared_ptr<const NodeBlock> node(int j) const;

 private:
  ModelSpec spec_;
  Matrix x_;
  Index n_;
  AssembleOptions opts_;
  mutable std::vector<std::once_flag> once_;
  mutable std::vector<std::shared_ptr<const NodeBlock>> blocks_;
};

// Empirical quadratic score system of one edge:
//   gamma_hat = E_n[phi1 phi1^T + phi2 phi2^T],  g_hat = E_n[g].
class EdgeScoreSystem {
 public:
  EdgeScoreSystem(EdgeIndexMap map, Matrix gamma_hat, Vector g_hat, Index n,
                  std::shared_ptr<const NodeBlock> node_a, std::shared_ptr<const NodeBlock> node_b);

  const EdgeIndexMap& map() const { return map_; }
  const Matrix& gamma_hat() const { return gamma_; }
  const Vector& g_hat() const { return g_; }
  Index n() const { return n_; }
  Index dim() const { return map_.dim(); }
  bool has_per_sample() const;

  // Per-sample products, each an n-vector: phi1_i^T v, phi2_i^T v, g_i^T v.
  Vector phi1_dot(const Vector& v) const;
  Vector phi2_dot(const Vector& v) const;
  Vector g_dot(const Vector& v) const;

  // u_i = v^T (Gamma(x_i) theta + g(x_i)) for every sample.
  Vector influence(const Vector& v, const Vector& theta) const;
  // Same for several directions at once; column l uses V.col(l).
  Matrix influence(const Matrix& V, const Vector& theta) const;

  // Dense n x s' per-sample arrays.
  Matrix phi1_rows() const;
  Matrix phi2_rows() const;
  Matrix g_rows() const;

 private:
  Vector gather_a(const Vector& v) const;
  Vector gather_b(const Vector& v) const;
  void require_per_sample() const;

  EdgeIndexMap map_;
  Matrix gamma_;
  Vector g_;
  Index n_;
  std::shared_ptr<const NodeBlock> a_;
  std::shared_ptr<const NodeBlock> b_;
};

EdgeScoreSystem assemble(const NodeScoreCache& cache, int a, int b);
EdgeScoreSystem assemble(const ModelSpec& spec, const DataMatrix& data, int a, int b,
                         AssembleOptions opts = {});

// Straight per-sample accumulation through score_components. Used to check
// the cached path.
struct ReferenceSystem {
  Matrix gamma_hat;
  Vector g_hat;
  Matrix phi1;  // n x s'
  Matrix phi2;
  Matrix g;
};
ReferenceSystem assemble_reference(const ModelSpec& spec, const DataMatrix& data, int a, int b);

double objective(const EdgeScoreSystem& system, const Vector& theta);
Vector gradient(const EdgeScoreSystem& system, const Vector& theta);

// Step-2 design for target coordinate l: A is gamma_hat without row/column l,
// b its column l without entry l. `kept` lists the retained coordinates.
struct NuisanceSystem {
  Matrix A;
  Vector b;
  IndexSet kept;
};
NuisanceSystem nuisance_regression_system(const EdgeScoreSystem& system, Index l);

}  // namespace scoreinf
