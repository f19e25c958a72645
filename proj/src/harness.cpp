#include "scoreinf/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "scoreinf/distributions.hpp"
#include "scoreinf/error.hpp"
#include "scoreinf/inference.hpp"
#include "scoreinf/random.hpp"

namespace scoreinf {

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
  if (reps < 1) throw InputError("reps must be at least 1");
  if (p < 2) throw InputError("p must be at least 2");
  if (n < 2) throw InputError("n must be at least 2");
  if (!(level > 0.0 && level < 1.0)) throw InputError("level must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  if (B < 1) throw InputError("B must be positive");
  if (node_a < 0 || node_a >= p) throw InvalidEdgeError("tested node is out of range");
  for (const auto& [a, b] : edges)
    if (a < 0 || b < 0 || a >= p || b >= p || a == b)
      throw InvalidEdgeError("edge (" + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                             ") is invalid for p=" + std::to_string(p));
  if (test != "bootstrap" && test != "chi2" && test != "both")
    throw InputError("test must be bootstrap, chi2 or both");
  if (diagnostic != "m_norm" && diagnostic != "gamma_small")
    throw InputError("diagnostic must be m_norm or gamma_small");
  model();
}

ModelSpec ExperimentConfig::model() const {
  GraphSpecOptions opts;
  opts.bands = bands;
  opts.node = node;
  opts.weight_fn = weight_fn;
  return knn_graph_spec(family, p, k, opts);
}

GibbsConfig ExperimentConfig::gibbs(std::uint64_t s) const {
  GibbsConfig g = GibbsConfig::defaults_for(family, s);
  if (burn_in >= 0) g.burn_in = burn_in;
  if (thinning >= 1) g.thinning = thinning;
  return g;
}

double ExperimentConfig::c1() const {
  return std::isnan(lambda1_c) ? default_lambda_constant(family_domain(family)) : lambda1_c;
}

double ExperimentConfig::c2() const {
  return std::isnan(lambda2_c) ? default_lambda_constant(family_domain(family)) : lambda2_c;
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("scenario")) c.scenario = j["scenario"].get<std::string>();
    if (j.contains("family")) c.family = family_from_string(j["family"].get<std::string>());
    if (j.contains("p")) c.p = j["p"].get<int>();
    if (j.contains("k")) c.k = j["k"].get<int>();
    if (j.contains("bands")) c.bands = j["bands"].get<std::vector<std::vector<double>>>();
    if (j.contains("node")) c.node = j["node"].get<std::vector<double>>();
    if (j.contains("weight_fn")) c.weight_fn = weight_fn_from_string(j["weight_fn"].get<std::string>());
    if (j.contains("n")) c.n = j["n"].get<Index>();
    if (j.contains("reps")) c.reps = j["reps"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("burn_in")) c.burn_in = j["burn_in"].get<int>();
    if (j.contains("thinning")) c.thinning = j["thinning"].get<int>();
    if (j.contains("method")) c.method = method_from_string(j["method"].get<std::string>());
    if (j.contains("edges")) {
      c.edges.clear();
      for (const Json& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2) throw InputError("edges must be pairs of node indices");
        const int a = e[0].get<int>() - 1;
        const int b = e[1].get<int>() - 1;
        c.edges.emplace_back(std::min(a, b), std::max(a, b));
      }
    }
    if (j.contains("lambda1_c")) c.lambda1_c = j["lambda1_c"].get<double>();
    if (j.contains("lambda2_c")) c.lambda2_c = j["lambda2_c"].get<double>();
    if (j.contains("level")) c.level = j["level"].get<double>();
    if (j.contains("center")) c.center = j["center"].get<bool>();
    if (j.contains("node_a")) c.node_a = j["node_a"].get<int>() - 1;
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("B")) c.B = j["B"].get<int>();
    if (j.contains("test")) c.test = j["test"].get<std::string>();
    if (j.contains("diagnostic")) c.diagnostic = j["diagnostic"].get<std::string>();
    if (j.contains("n_list")) c.n_list = j["n_list"].get<std::vector<Index>>();
    if (j.contains("large_components")) c.large_components = j["large_components"].get<int>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed config: ") + e.what());
  }
  return c;
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["scenario"] = c.scenario;
  j["family"] = std::string(to_string(c.family));
  j["p"] = c.p;
  j["k"] = c.k;
  j["bands"] = c.bands;
  j["node"] = c.node.empty() ? default_node_values(c.family) : c.node;
  j["weight_fn"] = std::string(to_string(c.weight_fn.value_or(default_weight_fn(c.family))));
  j["n"] = c.n;
  j["reps"] = c.reps;
  j["seed"] = c.seed;
  const GibbsConfig g = c.gibbs(c.seed);
  j["burn_in"] = g.burn_in;
  j["thinning"] = g.thinning;
  j["method"] = std::string(to_string(c.method));
  Json edges = Json::array();
  for (const auto& [a, b] : c.edges) edges.push_back({a + 1, b + 1});
  j["edges"] = edges;
  j["lambda1_c"] = c.c1();
  j["lambda2_c"] = c.c2();
  j["level"] = c.level;
  j["center"] = c.center;
  j["node_a"] = c.node_a + 1;
  j["alpha"] = c.alpha;
  j["B"] = c.B;
  j["test"] = c.test;
  j["diagnostic"] = c.diagnostic;
  j["n_list"] = c.n_list;
  j["large_components"] = c.large_components;
  return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string dump = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

DataMatrix simulate_n(const ExperimentConfig& cfg, const ModelSpec& spec, Index n,
                      std::uint64_t seed) {
  switch (spec.family()) {
    case Family::Gaussian: return sample_gaussian(spec, n, seed);
    case Family::NonNegGaussian: return sample_nonneg_gaussian_gibbs(spec, n, cfg.gibbs(seed));
    case Family::NormalConditionalsL1:
    case Family::NormalConditionalsL2:
      return sample_normal_conditionals_gibbs(spec, n, cfg.gibbs(seed));
    case Family::ExponentialGM: return sample_exponential_gibbs(spec, n, cfg.gibbs(seed));
  }
  throw InvalidSpecError("unsupported family");
}

Matrix truth_row(const ModelSpec& spec, int a) {
  Matrix null = Matrix::Zero(spec.p(), spec.L());
  for (int b = 0; b < spec.p(); ++b)
    for (int l = 0; l < spec.L(); ++l) null(b, l) = spec.edge_params(l)(a, b);
  return null;
}

std::string join(const Vector& v) {
  std::ostringstream out;
  out.precision(17);
  for (Index i = 0; i < v.size(); ++i) out << (i ? ";" : "") << v[i];
  return out.str();
}

Json record_json(const ReplicationRecord& r) {
  Json j;
  j["rep"] = r.rep;
  j["seed"] = r.seed;
  j["edge"] = {r.a + 1, r.b + 1};
  j["estimate"] = vector_to_json(r.estimate);
  j["lower"] = vector_to_json(r.lower);
  j["upper"] = vector_to_json(r.upper);
  j["truth"] = vector_to_json(r.truth);
  j["variance"] = vector_to_json(r.variance);
  j["covered"] = r.covered;
  j["reject"] = r.reject;
  j["reject_chi2"] = r.reject_chi2;
  j["statistic"] = r.statistic;
  j["critical_value"] = r.critical_value;
  j["p_value"] = r.p_value;
  j["value"] = r.value;
  j["failed"] = r.failed;
  j["error"] = r.error;
  return j;
}

}  // namespace

DataMatrix simulate(const ExperimentConfig& cfg, std::uint64_t seed) {
  return simulate_n(cfg, cfg.model(), cfg.n, seed);
}

// ---------------------------------------------------------------------------
// Reports

Json ExperimentReport::to_json() const {
  Json j;
  j["kind"] = kind;
  j["scenario"] = config.scenario;
  j["config"] = scoreinf::to_json(config);
  j["provenance"] = {{"config_hash", config_hash(config)},
                     {"seed", config.seed},
                     {"version", kVersion}};
  j["aggregates"] = aggregates;
  Json recs = Json::array();
  for (const ReplicationRecord& r : records) recs.push_back(record_json(r));
  j["records"] = std::move(recs);
  return j;
}

std::string ExperimentReport::records_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "rep,seed,a,b,estimate,lower,upper,truth,variance,covered,reject,reject_chi2,statistic,"
         "critical_value,p_value,value,failed,error\n";
  for (const ReplicationRecord& r : records) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << r.rep << ',' << r.seed << ',' << r.a + 1 << ',' << r.b + 1 << ',' << join(r.estimate)
        << ',' << join(r.lower) << ',' << join(r.upper) << ',' << join(r.truth) << ','
        << join(r.variance) << ',' << r.covered << ',' << r.reject << ',' << r.reject_chi2 << ','
        << r.statistic << ',' << r.critical_value << ',' << r.p_value << ',' << r.value << ','
        << r.failed << ',' << err << '\n';
  }
  return out.str();
}

Json aggregate_coverage(const std::vector<ReplicationRecord>& records,
                        const std::vector<std::pair<int, int>>& edges, int reps) {
  Json out = Json::array();
  for (const auto& [a, b] : edges) {
    int covered = 0;
    int failures = 0;
    int ok = 0;
    double width = 0.0;
    double mean = 0.0;
    for (const ReplicationRecord& r : records) {
      if (r.a != a || r.b != b) continue;
      if (r.failed) {
        ++failures;
        continue;
      }
      ++ok;
      covered += r.covered ? 1 : 0;
      width += r.upper[0] - r.lower[0];
      mean += r.estimate[0];
    }
    out.push_back({{"edge", {a + 1, b + 1}},
                   {"covered", covered},
                   {"reps", reps},
                   {"coverage", static_cast<double>(covered) / reps},
                   {"failures", failures},
                   {"mean_width", ok ? width / ok : 0.0},
                   {"mean_estimate", ok ? mean / ok : 0.0}});
  }
  return out;
}

Json aggregate_type1(const std::vector<ReplicationRecord>& records, int reps) {
  int rej = 0;
  int rej_chi2 = 0;
  int failures = 0;
  for (const ReplicationRecord& r : records) {
    if (r.failed) {
      ++failures;
      continue;
    }
    rej += r.reject ? 1 : 0;
    rej_chi2 += r.reject_chi2 ? 1 : 0;
  }
  return {{"reps", reps},
          {"rejections", rej},
          {"rejection_rate", static_cast<double>(rej) / reps},
          {"rejections_chi2", rej_chi2},
          {"rejection_rate_chi2", static_cast<double>(rej_chi2) / reps},
          {"failures", failures}};
}

ExperimentReport run_coverage(const ExperimentConfig& cfg) {
  cfg.validate();
  const ModelSpec spec = cfg.model();
  const auto E = static_cast<int>(cfg.edges.size());
  std::vector<ReplicationRecord> records(static_cast<size_t>(cfg.reps) * E);

#pragma omp parallel for schedule(dynamic)
  for (int rep = 0; rep < cfg.reps; ++rep) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
    for (int e = 0; e < E; ++e) {
      ReplicationRecord& r = records[static_cast<size_t>(rep) * E + e];
      r.rep = rep;
      r.seed = seed;
      r.a = cfg.edges[static_cast<size_t>(e)].first;
      r.b = cfg.edges[static_cast<size_t>(e)].second;
      r.truth = true_edge_value(spec, r.a, r.b);
    }
    try {
      if (cfg.method == Method::Debiased) {
        const DataMatrix data = simulate_n(cfg, spec, 2 * cfg.n, seed);
        const auto [h1, h2] = split_even_odd(data);
        for (int e = 0; e < E; ++e) {
          ReplicationRecord& r = records[static_cast<size_t>(rep) * E + e];
          try {
            const EdgeIndexMap map = edge_index_map(spec, r.a, r.b);
            const EdgeEstimate est =
                debiased_edge(spec, h1, h2, r.a, r.b, default_lambda(map.dim(), h1.n(), cfg.c1()),
                              default_lambda(map.dim(), h2.n(), cfg.c2()));
            const ConfidenceInterval ci = confidence_interval(est, cfg.level);
            r.estimate = est.theta_tilde;
            r.lower = ci.lower;
            r.upper = ci.upper;
            r.variance = est.V_hat.diagonal();
          } catch (const Error& ex) {
            r.failed = true;
            r.error = ex.what();
          }
        }
      } else {
        const DataMatrix data = simulate_n(cfg, spec, cfg.n, seed);
        const NodeScoreCache cache(spec, data, {.keep_per_sample = true, .center = cfg.center});
        for (int e = 0; e < E; ++e) {
          ReplicationRecord& r = records[static_cast<size_t>(rep) * E + e];
          try {
            const EdgeScoreSystem sys = assemble(cache, r.a, r.b);
            const EdgeEstimate est =
                three_step_from_system(sys, default_lambda(sys.dim(), sys.n(), cfg.c1()),
                                       default_lambda(sys.dim(), sys.n(), cfg.c2()));
            const ConfidenceInterval ci = confidence_interval(est, cfg.level);
            r.estimate = est.theta_tilde;
            r.lower = ci.lower;
            r.upper = ci.upper;
            r.variance = est.V_hat.diagonal();
          } catch (const Error& ex) {
            r.failed = true;
            r.error = ex.what();
          }
        }
      }
    } catch (const Error& ex) {
      for (int e = 0; e < E; ++e) {
        ReplicationRecord& r = records[static_cast<size_t>(rep) * E + e];
        r.failed = true;
        r.error = ex.what();
      }
    }
    for (int e = 0; e < E; ++e) {
      ReplicationRecord& r = records[static_cast<size_t>(rep) * E + e];
      if (r.failed) continue;
      r.covered = true;
      for (Index l = 0; l < r.truth.size(); ++l)
        r.covered = r.covered && r.lower[l] <= r.truth[l] && r.truth[l] <= r.upper[l];
    }
  }

  ExperimentReport rep;
  rep.kind = "coverage";
  rep.config = cfg;
  rep.records = std::move(records);
  rep.aggregates = {{"edges", aggregate_coverage(rep.records, cfg.edges, cfg.reps)}};
  return rep;
}

ExperimentReport run_type1(const ExperimentConfig& cfg) {
  cfg.validate();
  const ModelSpec spec = cfg.model();
  const Matrix null = truth_row(spec, cfg.node_a);
  std::vector<ReplicationRecord> records(static_cast<size_t>(cfg.reps));
  const bool boot = cfg.test != "chi2";
  const bool chi2 = cfg.test != "bootstrap";

#pragma omp parallel for schedule(dynamic)
  for (int rep = 0; rep < cfg.reps; ++rep) {
    ReplicationRecord& r = records[static_cast<size_t>(rep)];
    r.rep = rep;
    r.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
    r.a = cfg.node_a;
    r.b = cfg.node_a;
    try {
      const DataMatrix data = simulate_n(cfg, spec, cfg.n, r.seed);
      TestOptions opts;
      opts.alpha = cfg.alpha;
      opts.B = cfg.B;
      opts.seed = splitmix64(r.seed);
      opts.lambda1_c = cfg.c1();
      opts.lambda2_c = cfg.c2();
      opts.assemble.center = cfg.center;
      std::vector<EdgeEstimate> ests;
      if (boot) {
        BootstrapTestResult res = simultaneous_test(spec, data, cfg.node_a, null, opts);
        r.reject = res.reject;
        r.statistic = res.statistic;
        r.critical_value = res.critical_value;
        r.p_value = res.p_value;
        ests = std::move(res.estimates);
      }
      if (chi2) {
        if (ests.empty()) {
          const NodeScoreCache cache(spec, data, opts.assemble);
          ests = neighborhood_estimates(cache, cfg.node_a, opts.lambda1_c, opts.lambda2_c);
        }
        const Chi2TestResult c = chi2_from_estimates(ests, cfg.node_a, null, cfg.alpha, spec.p());
        r.reject_chi2 = c.reject;
        if (!boot) {
          r.statistic = c.statistic;
          r.critical_value = c.critical_value;
          r.p_value = c.p_value;
        }
        r.value = c.statistic;
      }
    } catch (const Error& ex) {
      r.failed = true;
      r.error = ex.what();
    }
  }

  ExperimentReport rep;
  rep.kind = "type1";
  rep.config = cfg;
  rep.records = std::move(records);
  rep.aggregates = aggregate_type1(rep.records, cfg.reps);
  return rep;
}

ExperimentReport run_diagnostics(const ExperimentConfig& cfg) {
  cfg.validate();
  const ModelSpec spec = cfg.model();
  const std::vector<Index> ns = cfg.n_list.empty() ? std::vector<Index>{cfg.n} : cfg.n_list;
  const auto [a, b] = cfg.edges.front();
  int large = cfg.large_components;
  if (large < 0) large = (cfg.family == Family::ExponentialGM) ? 4 : 5;
  const bool m_norm = cfg.diagnostic == "m_norm";
  const auto R = static_cast<size_t>(cfg.reps);
  std::vector<ReplicationRecord> records(ns.size() * R);

#pragma omp parallel for schedule(dynamic) collapse(2)
  for (size_t ni = 0; ni < ns.size(); ++ni) {
    for (int rep = 0; rep < cfg.reps; ++rep) {
      ReplicationRecord& r = records[ni * R + static_cast<size_t>(rep)];
      r.rep = rep;
      r.seed = derive_seed(derive_seed(cfg.seed, ni), static_cast<std::uint64_t>(rep));
      r.a = a;
      r.b = b;
      try {
        const DataMatrix data = simulate_n(cfg, spec, ns[ni], r.seed);
        const EdgeScoreSystem sys = assemble(spec, data, a, b, {.keep_per_sample = false});
        const IndexSet& targets = sys.map().target_indices();
        if (m_norm) {
          const Matrix M = debias_rows(sys.gamma_hat(), targets, 0.0, DebiasMatrix::ExactInverse);
          r.value = M.row(0).lpNorm<1>();
          r.statistic = r.value;
        } else {
          const NuisanceSystem ns_sys = nuisance_regression_system(sys, targets.front());
          Eigen::LDLT<Matrix> ldlt(ns_sys.A);
          const Vector gamma = ldlt.solve(ns_sys.b);
          std::vector<double> mags(static_cast<size_t>(gamma.size()));
          for (Index k = 0; k < gamma.size(); ++k) mags[static_cast<size_t>(k)] = std::abs(gamma[k]);
          std::sort(mags.begin(), mags.end(), std::greater<>());
          const auto skip = std::min<size_t>(static_cast<size_t>(large), mags.size());
          double sum = 0.0;
          double mx = 0.0;
          for (size_t k = skip; k < mags.size(); ++k) {
            sum += mags[k];
            mx = std::max(mx, mags[k]);
          }
          const size_t cnt = mags.size() - skip;
          r.value = cnt ? sum / static_cast<double>(cnt) : 0.0;
          r.statistic = mx;
        }
        r.estimate = Vector::Constant(1, static_cast<double>(ns[ni]));
      } catch (const Error& ex) {
        r.failed = true;
        r.error = ex.what();
      }
    }
  }

  Json agg = Json::array();
  for (size_t ni = 0; ni < ns.size(); ++ni) {
    double mean = 0.0;
    double max_of_values = 0.0;
    double mean_of_max = 0.0;
    int ok = 0;
    for (size_t rep = 0; rep < R; ++rep) {
      const ReplicationRecord& r = records[ni * R + rep];
      if (r.failed) continue;
      ++ok;
      mean += r.value;
      mean_of_max += r.statistic;
      max_of_values = std::max(max_of_values, r.value);
    }
    agg.push_back({{"n", ns[ni]},
                   {"reps", cfg.reps},
                   {"failures", cfg.reps - ok},
                   {"mean", ok ? mean / ok : 0.0},
                   {"max", m_norm ? max_of_values : (ok ? mean_of_max / ok : 0.0)}});
  }

  ExperimentReport rep;
  rep.kind = "diagnostics";
  rep.config = cfg;
  rep.records = std::move(records);
  rep.aggregates = {{"diagnostic", cfg.diagnostic}, {"by_n", agg}};
  return rep;
}

// ---------------------------------------------------------------------------
// Real data

GraphReport analyze_dataset(const std::string& csv_path, Family family, double threshold,
                            double lambda1_c, double lambda2_c) {
  CsvTable t = read_csv(csv_path);
  DataMatrix data(std::move(t.values), family_domain(family));
  return analyze_dataset(data, std::move(t.header), family, threshold, lambda1_c, lambda2_c);
}

GraphReport analyze_dataset(const DataMatrix& data, std::vector<std::string> names, Family family,
                            double threshold, double lambda1_c, double lambda2_c) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw InputError("threshold must lie in [0, 1]");
  const int p = static_cast<int>(data.p());
  if (names.empty())
    for (int j = 0; j < p; ++j) names.push_back("X" + std::to_string(j + 1));
  const ModelSpec spec = ModelSpec::structure(family, p);
  const NodeScoreCache cache(spec, data);
  const Domain dom = family_domain(family);
  const double c1 = std::isnan(lambda1_c) ? default_lambda_constant(dom) : lambda1_c;
  const double c2 = std::isnan(lambda2_c) ? default_lambda_constant(dom) : lambda2_c;

  GraphReport rep;
  rep.names = std::move(names);
  rep.degree.assign(static_cast<size_t>(p), 0);
  for (int a = 0; a < p; ++a) {
    for (int b = a + 1; b < p; ++b) {
      const EdgeScoreSystem sys = assemble(cache, a, b);
      EdgeEstimate est = three_step_from_system(sys, default_lambda(sys.dim(), sys.n(), c1),
                                                default_lambda(sys.dim(), sys.n(), c2));
      double pv = 1.0;
      if (spec.L() == 1) {
        pv = p_value(est, 0.0);
      } else {
        Eigen::LDLT<Matrix> ldlt(est.V_hat);
        const double t2 = static_cast<double>(est.n) * est.theta_tilde.dot(ldlt.solve(est.theta_tilde));
        pv = chi2_sf(t2, spec.L());
      }
      if (pv < threshold) {
        rep.edges.emplace_back(a, b);
        ++rep.degree[static_cast<size_t>(a)];
        ++rep.degree[static_cast<size_t>(b)];
      }
      rep.estimates.push_back(std::move(est));
      rep.p_values.push_back(pv);
    }
  }
  return rep;
}

Json GraphReport::to_json() const {
  Json j;
  j["nodes"] = names;
  j["degree"] = degree;
  Json e = Json::array();
  for (const auto& [a, b] : edges) e.push_back({names[static_cast<size_t>(a)], names[static_cast<size_t>(b)]});
  j["edges"] = e;
  Json est = Json::array();
  for (size_t k = 0; k < estimates.size(); ++k) {
    Json x = scoreinf::to_json(estimates[k]);
    x["p_value"] = p_values[k];
    est.push_back(std::move(x));
  }
  j["estimates"] = est;
  return j;
}

std::string GraphReport::edges_csv() const {
  std::ostringstream out;
  out << "from,to\n";
  for (const auto& [a, b] : edges)
    out << names[static_cast<size_t>(a)] << ',' << names[static_cast<size_t>(b)] << '\n';
  return out.str();
}

std::string GraphReport::estimates_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "a,b,name_a,name_b,estimate,variance,p_value\n";
  for (size_t k = 0; k < estimates.size(); ++k) {
    const EdgeEstimate& e = estimates[k];
    out << e.a + 1 << ',' << e.b + 1 << ',' << names[static_cast<size_t>(e.a)] << ','
        << names[static_cast<size_t>(e.b)] << ',' << join(e.theta_tilde) << ','
        << join(e.V_hat.diagonal()) << ',' << p_values[k] << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Histogram

Matrix emit_histogram(const std::vector<double>& values, int bins) {
  if (bins < 1) throw InputError("bins must be positive");
  std::vector<double> v;
  for (double x : values)
    if (std::isfinite(x)) v.push_back(x);
  Matrix out = Matrix::Zero(bins, 3);
  if (v.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double width = (hi - lo) / bins;
  for (int k = 0; k < bins; ++k) {
    out(k, 0) = lo + width * k;
    out(k, 1) = k + 1 == bins ? hi : lo + width * (k + 1);
  }
  for (double x : v) {
    int k = width > 0.0 ? static_cast<int>((x - lo) / width) : 0;
    k = std::clamp(k, 0, bins - 1);
    out(k, 2) += 1.0;
  }
  return out;
}

std::string histogram_csv(const Matrix& hist) {
  std::ostringstream out;
  out.precision(17);
  out << "lower,upper,count\n";
  for (Index k = 0; k < hist.rows(); ++k)
    out << hist(k, 0) << ',' << hist(k, 1) << ',' << static_cast<long long>(hist(k, 2)) << '\n';
  return out.str();
}

}  // namespace scoreinf
