#include "scoreinf/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "scoreinf/distributions.hpp"
#include "scoreinf/error.hpp"

namespace scoreinf {

namespace {

double resolve_constant(double c, Domain domain) {
  return std::isnan(c) ? default_lambda_constant(domain) : c;
}

void check_test_options(const TestOptions& opts) {
  if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  if (opts.B < 1) throw InputError("the number of bootstrap draws must be positive");
}

struct FittedEdge {
  EdgeScoreSystem system;
  EdgeEstimate estimate;
};

FittedEdge fit_edge(const NodeScoreCache& cache, int u, int v, double c1, double c2) {
  const int a = std::min(u, v);
  const int b = std::max(u, v);
  EdgeScoreSystem system = assemble(cache, a, b);
  const Index n = system.n();
  const double l1 = default_lambda(system.dim(), n, c1);
  const double l2 = default_lambda(system.dim(), n, c2);
  try {
    EdgeEstimate est = three_step_from_system(system, l1, l2);
    return {std::move(system), std::move(est)};
  } catch (const Error& e) {
    throw NumericalError("edge (" + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                         "): " + e.what());
  }
}

// Influence rows -u_l^T (Gamma(x_i) theta + g(x_i)) for each target l.
Matrix influence_columns(const FittedEdge& f, const Vector& theta) {
  return -f.system.influence(f.estimate.U, theta);
}

BootstrapTestResult bootstrap_decision(double statistic, double one_sided, const Matrix& z,
                                       double scale, const TestOptions& opts) {
  const kernels::BootstrapMaxima draws = kernels::bootstrap_maxima(z, opts.B, opts.seed, scale);
  BootstrapTestResult res;
  res.B = opts.B;
  res.alpha = opts.alpha;
  res.statistic = statistic;
  res.critical_value = bootstrap_quantile(draws.two_sided, opts.alpha);
  res.p_value = bootstrap_p_value(draws.two_sided, statistic);
  res.reject = statistic >= res.critical_value;
  res.statistic_one_sided = one_sided;
  res.critical_value_one_sided = bootstrap_quantile(draws.one_sided, opts.alpha);
  res.reject_one_sided = one_sided >= res.critical_value_one_sided;
  return res;
}

}  // namespace

double bootstrap_quantile(std::vector<double> draws, double alpha) {
  if (draws.empty()) throw InputError("no bootstrap draws");
  const auto B = static_cast<double>(draws.size());
  auto k = static_cast<size_t>(std::ceil((1.0 - alpha) * B - 1e-9));
  k = std::clamp<size_t>(k, 1, draws.size());
  std::nth_element(draws.begin(), draws.begin() + static_cast<std::ptrdiff_t>(k - 1), draws.end());
  return draws[k - 1];
}

double bootstrap_p_value(const std::vector<double>& draws, double statistic) {
  const auto exceed = std::count_if(draws.begin(), draws.end(),
                                    [&](double w) { return w >= statistic; });
  return (1.0 + static_cast<double>(exceed)) / (static_cast<double>(draws.size()) + 1.0);
}

std::vector<EdgeEstimate> neighborhood_estimates(const NodeScoreCache& cache, int a,
                                                 double lambda1_c, double lambda2_c) {
  const Domain dom = cache.spec().domain();
  const double c1 = resolve_constant(lambda1_c, dom);
  const double c2 = resolve_constant(lambda2_c, dom);
  std::vector<EdgeEstimate> out;
  for (int b = 0; b < cache.spec().p(); ++b)
    if (b != a) out.push_back(fit_edge(cache, a, b, c1, c2).estimate);
  return out;
}

BootstrapTestResult simultaneous_test(const ModelSpec& spec, const DataMatrix& data, int a,
                                      const Matrix& null, const TestOptions& opts) {
  check_test_options(opts);
  const int p = spec.p();
  const int L = spec.L();
  if (a < 0 || a >= p) throw InvalidEdgeError("node out of range");
  if (null.rows() != p || null.cols() != L)
    throw DimensionMismatchError("null values must be a p x L matrix");
  const NodeScoreCache cache(spec, data, opts.assemble);
  const double c1 = resolve_constant(opts.lambda1_c, spec.domain());
  const double c2 = resolve_constant(opts.lambda2_c, spec.domain());
  const Index n = data.n();
  const double rn = std::sqrt(static_cast<double>(n));

  const Index cols = static_cast<Index>(p - 1) * L;
  Matrix z(n, cols);
  BootstrapTestResult tmp;
  Vector per_edge(cols);
  double stat = 0.0;
  double one = -std::numeric_limits<double>::infinity();
  Index col = 0;
  for (int b = 0; b < p; ++b) {
    if (b == a) continue;
    FittedEdge f = fit_edge(cache, a, b, c1, c2);
    Vector theta_null = f.estimate.theta_full;
    for (int l = 0; l < L; ++l) theta_null[f.estimate.targets[static_cast<size_t>(l)]] = null(b, l);
    z.middleCols(col, L) = influence_columns(f, theta_null);
    for (int l = 0; l < L; ++l) {
      const double d = f.estimate.theta_tilde[l] - null(b, l);
      per_edge[col + l] = rn * std::abs(d);
      stat = std::max(stat, rn * std::abs(d));
      one = std::max(one, rn * d);
      tmp.edges.emplace_back(std::min(a, b), std::max(a, b));
      tmp.stats.push_back(l);
    }
    tmp.estimates.push_back(std::move(f.estimate));
    col += L;
  }

  BootstrapTestResult res = bootstrap_decision(stat, one, z, 1.0 / rn, opts);
  res.per_edge_stats = std::move(per_edge);
  res.edges = std::move(tmp.edges);
  res.stats = std::move(tmp.stats);
  res.estimates = std::move(tmp.estimates);
  if (opts.keep_influence) res.influence = InfluenceMatrix{res.edges, res.stats, std::move(z)};
  return res;
}

BootstrapTestResult isolated_node_test(const ModelSpec& spec, const DataMatrix& data, int a,
                                       const TestOptions& opts) {
  return simultaneous_test(spec, data, a, Matrix::Zero(spec.p(), spec.L()), opts);
}

SupportResult support_recovery(const ModelSpec& spec, const DataMatrix& data, int a,
                               const TestOptions& opts) {
  if (a < 0 || a >= spec.p()) throw InvalidEdgeError("node out of range");
  const NodeScoreCache cache(spec, data, opts.assemble);
  SupportResult out;
  out.estimates = neighborhood_estimates(cache, a, opts.lambda1_c, opts.lambda2_c);
  const double logp = std::log(static_cast<double>(spec.p()));
  out.thresholds.resize(static_cast<Index>(out.estimates.size()) * spec.L());
  Index k = 0;
  for (const EdgeEstimate& est : out.estimates) {
    bool keep = false;
    for (int l = 0; l < spec.L(); ++l) {
      const double tau = std::sqrt(2.0 * est.V_hat(l, l) * logp / static_cast<double>(est.n));
      out.thresholds[k++] = tau;
      if (std::abs(est.theta_tilde[l]) > tau) keep = true;
    }
    if (keep) out.nodes.push_back(est.a == a ? est.b : est.a);
  }
  return out;
}

BootstrapTestResult diff_test(const ModelSpec& spec, const DataMatrix& data1,
                              const DataMatrix& data2, const TestOptions& opts) {
  check_test_options(opts);
  if (data1.p() != data2.p() || data1.p() != spec.p())
    throw DimensionMismatchError("both groups must have p columns");
  const int p = spec.p();
  const int L = spec.L();
  const NodeScoreCache cache1(spec, data1, opts.assemble);
  const NodeScoreCache cache2(spec, data2, opts.assemble);
  const double c1 = resolve_constant(opts.lambda1_c, spec.domain());
  const double c2 = resolve_constant(opts.lambda2_c, spec.domain());
  const Index n1 = data1.n();
  const Index n2 = data2.n();
  const double w1 = 1.0 + static_cast<double>(n2) / static_cast<double>(n1);
  const double w2 = 1.0 + static_cast<double>(n1) / static_cast<double>(n2);
  const double rn = std::sqrt(static_cast<double>(n1 + n2));

  const Index cols = static_cast<Index>(p) * (p - 1) / 2 * L;
  Matrix z(n1 + n2, cols);
  Vector per_edge(cols);
  BootstrapTestResult tmp;
  double stat = 0.0;
  double one = -std::numeric_limits<double>::infinity();
  Index col = 0;
  for (int a = 0; a < p; ++a) {
    for (int b = a + 1; b < p; ++b) {
      FittedEdge f1 = fit_edge(cache1, a, b, c1, c2);
      FittedEdge f2 = fit_edge(cache2, a, b, c1, c2);
      z.block(0, col, n1, L) = w1 * influence_columns(f1, f1.estimate.theta_full);
      z.block(n1, col, n2, L) = -w2 * influence_columns(f2, f2.estimate.theta_full);
      for (int l = 0; l < L; ++l) {
        const double d = f1.estimate.theta_tilde[l] - f2.estimate.theta_tilde[l];
        per_edge[col + l] = rn * std::abs(d);
        stat = std::max(stat, rn * std::abs(d));
        one = std::max(one, rn * d);
        tmp.edges.emplace_back(a, b);
        tmp.stats.push_back(l);
      }
      tmp.estimates.push_back(std::move(f1.estimate));
      tmp.estimates.push_back(std::move(f2.estimate));
      col += L;
    }
  }
  BootstrapTestResult res = bootstrap_decision(stat, one, z, 1.0 / rn, opts);
  res.per_edge_stats = std::move(per_edge);
  res.edges = std::move(tmp.edges);
  res.stats = std::move(tmp.stats);
  res.estimates = std::move(tmp.estimates);
  if (opts.keep_influence) res.influence = InfluenceMatrix{res.edges, res.stats, std::move(z)};
  return res;
}

double xia_limit_cdf(double t) {
  return std::exp(-std::exp(-0.5 * t) / std::sqrt(2.0 * std::numbers::pi));
}

XiaResult xia_test(const std::vector<EdgeEstimate>& est1, const std::vector<EdgeEstimate>& est2,
                   int p) {
  if (est1.size() != est2.size() || est1.empty())
    throw DimensionMismatchError("both groups need estimates of the same edges");
  if (p < 3) throw InputError("the extreme-value limit needs p >= 3");
  XiaResult res;
  for (size_t k = 0; k < est1.size(); ++k) {
    const EdgeEstimate& e1 = est1[k];
    const EdgeEstimate& e2 = est2[k];
    if (e1.a != e2.a || e1.b != e2.b) throw InputError("estimate lists are not aligned by edge");
    for (Index l = 0; l < e1.theta_tilde.size(); ++l) {
      const double var = e1.V_hat(l, l) / static_cast<double>(e1.n) +
                         e2.V_hat(l, l) / static_cast<double>(e2.n);
      const double d = e1.theta_tilde[l] - e2.theta_tilde[l];
      if (!(var > 0.0)) {
        if (d == 0.0) continue;
        throw DegenerateVarianceError("zero variance for edge (" + std::to_string(e1.a + 1) + "," +
                                      std::to_string(e1.b + 1) + ")");
      }
      res.statistic = std::max(res.statistic, d * d / var);
    }
  }
  const double lp = std::log(static_cast<double>(p));
  res.p_value = 1.0 - xia_limit_cdf(res.statistic - 2.0 * lp + std::log(lp));
  return res;
}

double chi2_critical_value(double alpha, int p, int L) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  if (p < 2 || L < 1) throw InputError("need p >= 2 and L >= 1");
  const double tail = -std::log1p(-alpha) / static_cast<double>(p - 1);
  if (tail >= 1.0) return 0.0;
  return chi2_isf(tail, static_cast<double>(L));
}

Chi2TestResult chi2_from_estimates(const std::vector<EdgeEstimate>& estimates, int a,
                                   const Matrix& null, double alpha, int p) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  if (estimates.empty()) throw InputError("no estimates");
  const int L = static_cast<int>(estimates.front().theta_tilde.size());
  if (null.rows() != p || null.cols() != L)
    throw DimensionMismatchError("null values must be a p x L matrix");
  Chi2TestResult res;
  res.alpha = alpha;
  res.per_node_stats.resize(static_cast<Index>(estimates.size()));
  for (size_t k = 0; k < estimates.size(); ++k) {
    const EdgeEstimate& est = estimates[k];
    const int b = est.a == a ? est.b : est.a;
    Vector d = est.theta_tilde;
    for (int l = 0; l < L; ++l) d[l] -= null(b, l);
    Eigen::LDLT<Matrix> ldlt(est.V_hat);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().minCoeff() <= 1e-14 * std::max(1.0, ldlt.vectorD().maxCoeff()))
      throw SingularSystemError("variance matrix of edge (" + std::to_string(est.a + 1) + "," +
                                std::to_string(est.b + 1) + ") is singular");
    const double t2 = static_cast<double>(est.n) * d.dot(ldlt.solve(d));
    res.per_node_stats[static_cast<Index>(k)] = t2;
    res.nodes.push_back(b);
    res.statistic = std::max(res.statistic, t2);
  }
  res.critical_value = chi2_critical_value(alpha, p, L);
  res.reject = res.statistic >= res.critical_value;
  const double tail = static_cast<double>(p - 1) * chi2_sf(res.statistic, static_cast<double>(L));
  res.p_value = -std::expm1(-tail);
  return res;
}

Chi2TestResult chi2_simultaneous(const ModelSpec& spec, const DataMatrix& data, int a,
                                 const Matrix& null, const TestOptions& opts) {
  if (a < 0 || a >= spec.p()) throw InvalidEdgeError("node out of range");
  const NodeScoreCache cache(spec, data, opts.assemble);
  return chi2_from_estimates(neighborhood_estimates(cache, a, opts.lambda1_c, opts.lambda2_c), a,
                             null, opts.alpha, spec.p());
}

}  // namespace scoreinf
