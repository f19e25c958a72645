#include "scoreinf/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "scoreinf/error.hpp"

namespace scoreinf {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r\"");
    const auto last = field.find_last_not_of(" \t\r\"");
    out.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (size_t k = 0; k < fields.size() && numeric; ++k) numeric = parse_double(fields[k], row[k]);
    if (!numeric) {
      if (rows.empty() && table.header.empty()) {
        table.header = fields;
        continue;
      }
      throw InputError(path + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw InputError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(rows.front().size()) + " fields");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptyDataError("'" + path + "' contains no data rows");
  if (!table.header.empty() && table.header.size() != rows.front().size())
    throw InputError(path + ": header and data widths differ");
  table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      table.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return table;
}

void write_csv(const std::string& path, const Matrix& m, const std::vector<std::string>& header) {
  std::ostringstream out;
  out.precision(17);
  for (size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  if (!header.empty()) out << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
    out << '\n';
  }
  write_text(path, out.str());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError("invalid JSON in '" + path + "': " + e.what());
  }
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected a matrix (array of rows)");
  const auto rows = static_cast<Index>(j.size());
  const Index cols = rows ? static_cast<Index>(j.at(0).size()) : 0;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j.at(static_cast<size_t>(i));
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw InputError("matrix rows have unequal length");
    for (Index c = 0; c < cols; ++c) m(i, c) = row.at(static_cast<size_t>(c)).get<double>();
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = j[i].get<double>();
  return v;
}

namespace {

Json index_set_json(const IndexSet& s) {
  Json out = Json::array();
  for (Index i : s) out.push_back(i);
  return out;
}

}  // namespace

Json to_json(const ModelSpec& spec) {
  Json j;
  j["family"] = std::string(to_string(spec.family()));
  j["p"] = spec.p();
  j["L"] = spec.L();
  j["K"] = spec.K();
  j["domain"] = std::string(to_string(spec.domain()));
  j["weight_fn"] = std::string(to_string(spec.weight_fn()));
  j["edge_params"] = Json::array();
  for (const Matrix& m : spec.all_edge_params()) j["edge_params"].push_back(matrix_to_json(m));
  j["node_params"] = Json::array();
  for (const Vector& v : spec.all_node_params()) j["node_params"].push_back(vector_to_json(v));
  return j;
}

ModelSpec model_spec_from_json(const Json& j) {
  try {
    const Family family = family_from_string(j.at("family").get<std::string>());
    const int p = j.at("p").get<int>();
    const WeightFn w = j.contains("weight_fn")
                           ? weight_fn_from_string(j["weight_fn"].get<std::string>())
                           : default_weight_fn(family);
    std::vector<Matrix> edges;
    for (const Json& m : j.at("edge_params")) edges.push_back(matrix_from_json(m));
    std::vector<Vector> nodes;
    for (const Json& v : j.at("node_params")) nodes.push_back(vector_from_json(v));
    return ModelSpec(family, p, std::move(edges), std::move(nodes), w);
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed model spec: ") + e.what());
  }
}

Json to_json(const EdgeEstimate& est) {
  Json j;
  j["edge"] = {est.a + 1, est.b + 1};
  j["method"] = std::string(to_string(est.method));
  j["n"] = est.n;
  j["theta_tilde"] = vector_to_json(est.theta_tilde);
  j["theta_full"] = vector_to_json(est.theta_full);
  j["target_indices"] = index_set_json(est.targets);
  j["M1_hat"] = index_set_json(est.M1_hat);
  j["M2_hat"] = index_set_json(est.M2_hat);
  j["M_tilde"] = index_set_json(est.M_tilde);
  j["sigma_n"] = vector_to_json(est.sigma_n);
  j["V_hat"] = matrix_to_json(est.V_hat);
  j["gamma_hat"] = Json::array();
  for (const Vector& g : est.gamma_hat) j["gamma_hat"].push_back(vector_to_json(g));
  j["gamma_tilde"] = Json::array();
  for (const Vector& g : est.gamma_tilde) j["gamma_tilde"].push_back(vector_to_json(g));
  return j;
}

Json to_json(const ConfidenceInterval& ci) {
  return {{"level", ci.level}, {"lower", vector_to_json(ci.lower)}, {"upper", vector_to_json(ci.upper)}};
}

Json to_json(const BootstrapTestResult& res) {
  Json j;
  j["statistic"] = res.statistic;
  j["critical_value"] = res.critical_value;
  j["p_value"] = res.p_value;
  j["B"] = res.B;
  j["alpha"] = res.alpha;
  j["reject"] = res.reject;
  j["statistic_one_sided"] = res.statistic_one_sided;
  j["critical_value_one_sided"] = res.critical_value_one_sided;
  j["reject_one_sided"] = res.reject_one_sided;
  Json per = Json::array();
  for (size_t k = 0; k < res.edges.size(); ++k)
    per.push_back({{"edge", {res.edges[k].first + 1, res.edges[k].second + 1}},
                   {"stat", res.stats[k] + 1},
                   {"value", res.per_edge_stats[static_cast<Index>(k)]}});
  j["per_edge_stats"] = std::move(per);
  return j;
}

Json to_json(const Chi2TestResult& res) {
  Json per = Json::array();
  for (size_t k = 0; k < res.nodes.size(); ++k)
    per.push_back({{"node", res.nodes[k] + 1}, {"value", res.per_node_stats[static_cast<Index>(k)]}});
  return {{"statistic", res.statistic},
          {"critical_value", res.critical_value},
          {"p_value", res.p_value},
          {"alpha", res.alpha},
          {"reject", res.reject},
          {"per_node_stats", per}};
}

Json to_json(const XiaResult& res) {
  return {{"statistic", res.statistic}, {"p_value", res.p_value}};
}

}  // namespace scoreinf
