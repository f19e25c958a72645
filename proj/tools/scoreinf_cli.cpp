// Command-line front end. Node indices on the command line and in every
// output file are 1-based.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "scoreinf/error.hpp"
#include "scoreinf/estimators.hpp"
#include "scoreinf/harness.hpp"
#include "scoreinf/inference.hpp"
#include "scoreinf/io.hpp"

using namespace scoreinf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string config;
  std::optional<Index> n;
  std::optional<int> p;
  std::optional<int> reps;
  std::optional<double> alpha;
  std::optional<int> b_boot;
  std::optional<double> lambda1_c;
  std::optional<double> lambda2_c;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> method;
  std::optional<std::string> family;
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON experiment config");
  app->add_option("--n", c.n, "sample size");
  app->add_option("--p", c.p, "number of nodes");
  app->add_option("--reps", c.reps, "replications");
  app->add_option("--alpha", c.alpha, "test level");
  app->add_option("--b-boot", c.b_boot, "bootstrap draws");
  app->add_option("--lambda1-c", c.lambda1_c, "Step-1 penalty constant");
  app->add_option("--lambda2-c", c.lambda2_c, "Step-2 penalty constant");
  app->add_option("--seed", c.seed, "master seed");
  app->add_option("--method", c.method, "three_step | debiased | group_l");
  app->add_option("--family", c.family, "gaussian | nng | nc_l1 | nc_l2 | egm");
  app->add_option("--out", c.out, "output path");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : config_from_json(read_json(c.config));
  if (c.family) cfg.family = family_from_string(*c.family);
  if (c.n) cfg.n = *c.n;
  if (c.p) cfg.p = *c.p;
  if (c.reps) cfg.reps = *c.reps;
  if (c.alpha) cfg.alpha = *c.alpha;
  if (c.b_boot) cfg.B = *c.b_boot;
  if (c.lambda1_c) cfg.lambda1_c = *c.lambda1_c;
  if (c.lambda2_c) cfg.lambda2_c = *c.lambda2_c;
  if (c.seed) cfg.seed = *c.seed;
  if (c.method) cfg.method = method_from_string(*c.method);
  if (!c.out.empty()) cfg.out = c.out;
  return cfg;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_text(out, text);
  }
}

DataMatrix load_data(const std::string& path, Family family) {
  if (path.empty()) throw InputError("--data is required");
  return DataMatrix(read_csv(path).values, family_domain(family));
}

std::pair<int, int> parse_edge(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw InputError("edge must be written as a,b");
  int a = 0;
  int b = 0;
  try {
    a = std::stoi(s.substr(0, comma)) - 1;
    b = std::stoi(s.substr(comma + 1)) - 1;
  } catch (const std::exception&) {
    throw InputError("edge must be written as a,b");
  }
  if (a == b) throw InvalidEdgeError("edge endpoints must differ");
  return {std::min(a, b), std::max(a, b)};
}

TestOptions test_options(const ExperimentConfig& cfg) {
  TestOptions o;
  o.alpha = cfg.alpha;
  o.B = cfg.B;
  o.seed = cfg.seed;
  o.lambda1_c = cfg.c1();
  o.lambda2_c = cfg.c2();
  o.assemble.center = cfg.center;
  return o;
}

void write_report(const ExperimentReport& rep, const std::string& out) {
  const std::string json = rep.to_json().dump(2);
  if (out.empty() || out == "-") {
    std::cout << rep.aggregates.dump(2) << '\n';
    return;
  }
  write_text(out, json + "\n");
  write_text(out + ".records.csv", rep.records_csv());
  std::cout << rep.aggregates.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Score-matching inference for pairwise graphical models"};
  app.require_subcommand(1);

  Common common;
  std::string data_path, data2_path, edge_str = "1,2", report_path, weight;
  int node = 1;
  int bins = 20;
  double level = 0.95;
  double threshold = 0.01;
  bool exact_inverse = false;

  auto* simulate_cmd = app.add_subcommand("simulate", "draw a data set from a banded model");
  auto* estimate_cmd = app.add_subcommand("estimate", "estimate one edge");
  auto* ci_cmd = app.add_subcommand("ci", "confidence interval for one edge");
  auto* simtest_cmd = app.add_subcommand("simtest", "simultaneous test of a node's edges at the model values");
  auto* isotest_cmd = app.add_subcommand("isotest", "test that a node is isolated");
  auto* support_cmd = app.add_subcommand("support", "recover the neighbourhood of a node");
  auto* diff_cmd = app.add_subcommand("difftest", "two-sample test of equal edge parameters");
  auto* coverage_cmd = app.add_subcommand("coverage", "coverage experiment");
  auto* type1_cmd = app.add_subcommand("type1", "type I error experiment");
  auto* diag_cmd = app.add_subcommand("diagnostics", "assumption diagnostics");
  auto* analyze_cmd = app.add_subcommand("analyze", "edge p-values for a data set");
  auto* hist_cmd = app.add_subcommand("hist", "histogram of estimates from a coverage report");

  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) add_common(sub, common);
  for (CLI::App* sub : {estimate_cmd, ci_cmd, simtest_cmd, isotest_cmd, support_cmd, diff_cmd, analyze_cmd}) {
    sub->add_option("--data", data_path, "headerless CSV, one sample per row");
    sub->add_option("--weight", weight, "identity | square | log_plus_one");
  }
  for (CLI::App* sub : {estimate_cmd, ci_cmd}) sub->add_option("--edge", edge_str, "edge a,b");
  for (CLI::App* sub : {simtest_cmd, isotest_cmd, support_cmd}) sub->add_option("--node", node, "node a");
  estimate_cmd->add_flag("--exact-inverse", exact_inverse, "debiased method: exact inverse instead of CLIME rows");
  ci_cmd->add_flag("--exact-inverse", exact_inverse, "debiased method: exact inverse instead of CLIME rows");
  ci_cmd->add_option("--level", level, "confidence level");
  diff_cmd->add_option("--data2", data2_path, "second group CSV");
  analyze_cmd->add_option("--threshold", threshold, "p-value threshold");
  hist_cmd->add_option("--report", report_path, "coverage report JSON")->required();
  hist_cmd->add_option("--bins", bins, "number of bins");
  hist_cmd->add_option("--edge", edge_str, "edge a,b");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    const ExperimentConfig cfg = resolve(common);
    auto data_spec = [&](const DataMatrix& d) {
      return weight.empty() ? ModelSpec::structure(cfg.family, static_cast<int>(d.p()))
                            : ModelSpec::structure(cfg.family, static_cast<int>(d.p()),
                                                   weight_fn_from_string(weight));
    };
    auto estimate_edge = [&](const ModelSpec& spec, const DataMatrix& d, int a, int b) {
      const EdgeIndexMap map = edge_index_map(spec, a, b);
      if (cfg.method == Method::Debiased) {
        const auto [h1, h2] = split_even_odd(d);
        return debiased_edge(spec, h1, h2, a, b, default_lambda(map.dim(), h1.n(), cfg.c1()),
                             default_lambda(map.dim(), h2.n(), cfg.c2()),
                             exact_inverse ? DebiasMatrix::ExactInverse : DebiasMatrix::Clime);
      }
      return three_step_edge(spec, d, a, b, default_lambda(map.dim(), d.n(), cfg.c1()),
                             default_lambda(map.dim(), d.n(), cfg.c2()), {.center = cfg.center});
    };

    if (*simulate_cmd) {
      cfg.validate();
      const DataMatrix d = simulate(cfg, cfg.seed);
      if (cfg.out.empty()) {
        std::ostringstream s;
        s.precision(17);
        for (Index i = 0; i < d.n(); ++i) {
          for (Index j = 0; j < d.p(); ++j) s << (j ? "," : "") << d.values()(i, j);
          s << '\n';
        }
        std::cout << s.str();
      } else {
        write_csv(cfg.out, d.values());
      }
    } else if (*estimate_cmd || *ci_cmd) {
      const DataMatrix d = load_data(data_path, cfg.family);
      const ModelSpec spec = data_spec(d);
      const auto [a, b] = parse_edge(edge_str);
      const EdgeEstimate est = estimate_edge(spec, d, a, b);
      Json j = to_json(est);
      if (*ci_cmd) {
        j = {{"edge", {a + 1, b + 1}},
             {"estimate", vector_to_json(est.theta_tilde)},
             {"V_hat", matrix_to_json(est.V_hat)},
             {"n", est.n},
             {"ci", to_json(confidence_interval(est, level))},
             {"p_value_zero", p_value(est, 0.0)}};
      }
      emit(cfg.out, j.dump(2));
    } else if (*simtest_cmd || *isotest_cmd) {
      const DataMatrix d = load_data(data_path, cfg.family);
      const ModelSpec spec = data_spec(d);
      const int a = node - 1;
      BootstrapTestResult res;
      if (*isotest_cmd) {
        res = isolated_node_test(spec, d, a, test_options(cfg));
      } else {
        // Null values come from the banded model of the config.
        if (cfg.p != spec.p()) throw InputError("config p does not match the data");
        const ModelSpec truth = cfg.model();
        Matrix null = Matrix::Zero(spec.p(), spec.L());
        for (int b = 0; b < spec.p(); ++b)
          for (int l = 0; l < spec.L(); ++l) null(b, l) = truth.edge_params(l)(a, b);
        res = simultaneous_test(spec, d, a, null, test_options(cfg));
      }
      emit(cfg.out, to_json(res).dump(2));
    } else if (*support_cmd) {
      const DataMatrix d = load_data(data_path, cfg.family);
      const ModelSpec spec = data_spec(d);
      const SupportResult s = support_recovery(spec, d, node - 1, test_options(cfg));
      Json nodes = Json::array();
      for (Index b : s.nodes) nodes.push_back(b + 1);
      emit(cfg.out, Json{{"node", node}, {"support", nodes}, {"thresholds", vector_to_json(s.thresholds)}}.dump(2));
    } else if (*diff_cmd) {
      const DataMatrix d1 = load_data(data_path, cfg.family);
      const DataMatrix d2 = load_data(data2_path, cfg.family);
      const ModelSpec spec = data_spec(d1);
      const BootstrapTestResult res = diff_test(spec, d1, d2, test_options(cfg));
      std::vector<EdgeEstimate> e1, e2;
      for (size_t k = 0; k + 1 < res.estimates.size(); k += 2) {
        e1.push_back(res.estimates[k]);
        e2.push_back(res.estimates[k + 1]);
      }
      Json j = to_json(res);
      j["xia"] = to_json(xia_test(e1, e2, spec.p()));
      emit(cfg.out, j.dump(2));
    } else if (*coverage_cmd) {
      write_report(run_coverage(cfg), cfg.out);
    } else if (*type1_cmd) {
      write_report(run_type1(cfg), cfg.out);
    } else if (*diag_cmd) {
      write_report(run_diagnostics(cfg), cfg.out);
    } else if (*analyze_cmd) {
      if (data_path.empty()) throw InputError("--data is required");
      const GraphReport rep = analyze_dataset(data_path, cfg.family, threshold, cfg.lambda1_c, cfg.lambda2_c);
      if (cfg.out.empty()) {
        std::cout << rep.to_json().dump(2) << '\n';
      } else {
        write_text(cfg.out, rep.to_json().dump(2) + "\n");
        write_text(cfg.out + ".edges.csv", rep.edges_csv());
        write_text(cfg.out + ".estimates.csv", rep.estimates_csv());
      }
    } else if (*hist_cmd) {
      const Json rep = read_json(report_path);
      const auto [a, b] = parse_edge(edge_str);
      std::vector<double> values;
      for (const Json& r : rep.at("records")) {
        if (r.at("failed").get<bool>()) continue;
        if (r.at("edge")[0].get<int>() != a + 1 || r.at("edge")[1].get<int>() != b + 1) continue;
        values.push_back(r.at("estimate")[0].get<double>());
      }
      emit(cfg.out, histogram_csv(emit_histogram(values, bins)));
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
