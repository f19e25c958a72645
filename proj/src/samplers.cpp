#include "scoreinf/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scoreinf/distributions.hpp"
#include "scoreinf/error.hpp"

namespace scoreinf {

void GibbsConfig::validate() const {
  if (burn_in < 0) throw InputError("burn_in must be non-negative");
  if (thinning < 1) throw InputError("thinning must be at least 1");
}

GibbsConfig GibbsConfig::defaults_for(Family family, std::uint64_t seed) {
  if (family == Family::NonNegGaussian) return {1000, 5, seed};
  return {500, 3, seed};
}

std::vector<double> default_node_values(Family family) {
  switch (family) {
    case Family::Gaussian:
    case Family::NonNegGaussian: return {1.0};
    case Family::NormalConditionalsL1:
    case Family::NormalConditionalsL2: return {0.4, -2.0};
    case Family::ExponentialGM: return {2.0};
  }
  return {};
}

ModelSpec knn_graph_spec(Family family, int p, int k, const std::vector<double>& weights) {
  GraphSpecOptions opts;
  opts.bands.push_back(weights);
  for (int l = 1; l < interaction_count(family); ++l) opts.bands.emplace_back();
  return knn_graph_spec(family, p, k, opts);
}

ModelSpec knn_graph_spec(Family family, int p, int k, const GraphSpecOptions& opts) {
  if (k < 0 || k % 2 != 0) throw InvalidSpecError("neighbourhood size k must be even");
  if (p < 2) throw InvalidSpecError("a model needs at least two nodes");
  const int L = interaction_count(family);
  const int K = node_stat_count(family);
  if (static_cast<int>(opts.bands.size()) > L)
    throw InvalidSpecError("more band lists than interaction statistics");
  std::vector<Matrix> edges(static_cast<size_t>(L), Matrix::Zero(p, p));
  for (size_t l = 0; l < opts.bands.size(); ++l) {
    const auto& w = opts.bands[l];
    if (static_cast<int>(w.size()) > k / 2) throw InvalidSpecError("more band weights than k/2");
    for (int d = 1; d <= k / 2 && d <= static_cast<int>(w.size()); ++d)
      for (int j = 0; j + d < p; ++j) {
        edges[l](j, j + d) = w[static_cast<size_t>(d - 1)];
        edges[l](j + d, j) = w[static_cast<size_t>(d - 1)];
      }
  }
  std::vector<double> node = opts.node.empty() ? default_node_values(family) : opts.node;
  if (static_cast<int>(node.size()) != K)
    throw InvalidSpecError("expected " + std::to_string(K) + " node values");
  std::vector<Vector> nodes;
  for (double v : node) nodes.push_back(Vector::Constant(p, v));
  return ModelSpec(family, p, std::move(edges), std::move(nodes),
                   opts.weight_fn.value_or(default_weight_fn(family)));
}

namespace {

// Non-zero off-diagonal pattern of a parameter matrix, per row.
std::vector<std::vector<std::pair<int, double>>> neighbours(const Matrix& m) {
  std::vector<std::vector<std::pair<int, double>>> out(static_cast<size_t>(m.rows()));
  for (Index j = 0; j < m.rows(); ++j)
    for (Index c = 0; c < m.cols(); ++c)
      if (c != j && m(j, c) != 0.0) out[static_cast<size_t>(j)].emplace_back(static_cast<int>(c), m(j, c));
  return out;
}

template <class Update>
DataMatrix run_chain(int p, Index n, const GibbsConfig& cfg, Domain domain, Vector state,
                     Update update) {
  cfg.validate();
  if (n < 1) throw InputError("sample size must be positive");
  Rng rng(cfg.seed);
  Matrix out(n, p);
  for (int it = 0; it < cfg.burn_in; ++it)
    for (int j = 0; j < p; ++j) state[j] = update(rng, state, j);
  for (Index i = 0; i < n; ++i) {
    for (int t = 0; t < cfg.thinning; ++t)
      for (int j = 0; j < p; ++j) state[j] = update(rng, state, j);
    out.row(i) = state.transpose();
  }
  return DataMatrix(std::move(out), domain);
}

}  // namespace

double truncated_normal_tail(Rng& rng, double alpha) {
  if (alpha < 8.0) {
    const double tail = normal_sf(alpha);
    const double z = normal_isf(rng.uniform() * tail);
    return std::max(z, alpha);
  }
  // Exponential proposal shifted to alpha.
  const double rate = 0.5 * (alpha + std::sqrt(alpha * alpha + 4.0));
  for (;;) {
    const double z = alpha + rng.exponential(rate);
    const double d = z - rate;
    if (rng.uniform() <= std::exp(-0.5 * d * d)) return z;
  }
}

DataMatrix sample_gaussian(const ModelSpec& spec, Index n, std::uint64_t seed) {
  if (spec.family() != Family::Gaussian) throw InvalidSpecError("sample_gaussian needs the Gaussian family");
  if (n < 1) throw InputError("sample size must be positive");
  Eigen::LLT<Matrix> llt(spec.precision());
  if (llt.info() != Eigen::Success) throw InvalidSpecError("precision matrix is not positive definite");
  const int p = spec.p();
  Rng rng(seed);
  Matrix z(p, n);
  for (Index i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) z(j, i) = rng.normal();
  // Omega = L L^T, so x = L^{-T} z has covariance Omega^{-1}.
  const Matrix x = llt.matrixU().solve(z);
  return DataMatrix(x.transpose(), Domain::Reals);
}

DataMatrix sample_nonneg_gaussian_gibbs(const ModelSpec& spec, Index n, const GibbsConfig& cfg) {
  if (spec.family() != Family::NonNegGaussian)
    throw InvalidSpecError("sampler needs the non-negative Gaussian family");
  const Matrix omega = spec.precision();
  if (Eigen::LLT<Matrix>(omega).info() != Eigen::Success)
    throw InvalidSpecError("precision matrix is not positive definite");
  const auto nb = neighbours(spec.edge_params(0));
  const Vector diag = spec.node_params(0);
  auto update = [&](Rng& rng, const Vector& x, int j) {
    double lin = 0.0;
    for (const auto& [c, w] : nb[static_cast<size_t>(j)]) lin += w * x[c];
    const double sd = 1.0 / std::sqrt(diag[j]);
    const double mean = -lin / diag[j];
    return std::max(0.0, mean + sd * truncated_normal_tail(rng, -mean / sd));
  };
  return run_chain(spec.p(), n, cfg, Domain::NonNegReals, Vector::Zero(spec.p()), update);
}

DataMatrix sample_normal_conditionals_gibbs(const ModelSpec& spec, Index n, const GibbsConfig& cfg) {
  const bool l2 = spec.family() == Family::NormalConditionalsL2;
  if (!l2 && spec.family() != Family::NormalConditionalsL1)
    throw InvalidSpecError("sampler needs a normal-conditionals family");
  const auto quad = neighbours(spec.edge_params(l2 ? 1 : 0));
  const auto lin_nb = l2 ? neighbours(spec.edge_params(0)) : decltype(quad)(spec.p());
  const Vector b1 = spec.node_params(0);
  const Vector b2 = spec.node_params(1);
  auto update = [&](Rng& rng, const Vector& x, int j) {
    double q = b2[j];
    for (const auto& [c, w] : quad[static_cast<size_t>(j)]) q += w * x[c] * x[c];
    double lin = b1[j];
    for (const auto& [c, w] : lin_nb[static_cast<size_t>(j)]) lin += w * x[c];
    if (!(q < 0.0))
      throw InvalidSpecError("conditional of node " + std::to_string(j + 1) +
                             " is not normalizable (non-negative quadratic coefficient)");
    const double var = -0.5 / q;
    return var * lin + std::sqrt(var) * rng.normal();
  };
  return run_chain(spec.p(), n, cfg, Domain::Reals, Vector::Zero(spec.p()), update);
}

DataMatrix sample_exponential_gibbs(const ModelSpec& spec, Index n, const GibbsConfig& cfg) {
  if (spec.family() != Family::ExponentialGM)
    throw InvalidSpecError("sampler needs the exponential family");
  const auto nb = neighbours(spec.edge_params(0));
  const Vector node = spec.node_params(0);
  auto update = [&](Rng& rng, const Vector& x, int j) {
    double rate = node[j];
    for (const auto& [c, w] : nb[static_cast<size_t>(j)]) rate += w * x[c];
    if (!(rate > 0.0))
      throw InvalidSpecError("conditional rate of node " + std::to_string(j + 1) + " is not positive");
    return rng.exponential(rate);
  };
  return run_chain(spec.p(), n, cfg, Domain::NonNegReals, Vector::Ones(spec.p()), update);
}

DataMatrix sample(const ModelSpec& spec, Index n, std::uint64_t seed) {
  const GibbsConfig cfg = GibbsConfig::defaults_for(spec.family(), seed);
  switch (spec.family()) {
    case Family::Gaussian: return sample_gaussian(spec, n, seed);
    case Family::NonNegGaussian: return sample_nonneg_gaussian_gibbs(spec, n, cfg);
    case Family::NormalConditionalsL1:
    case Family::NormalConditionalsL2: return sample_normal_conditionals_gibbs(spec, n, cfg);
    case Family::ExponentialGM: return sample_exponential_gibbs(spec, n, cfg);
  }
  throw InvalidSpecError("unsupported family");
}

}  // namespace scoreinf
