#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "scoreinf/estimators.hpp"
#include "scoreinf/inference.hpp"
#include "scoreinf/models.hpp"
#include "scoreinf/types.hpp"

namespace scoreinf {

using Json = nlohmann::json;

struct CsvTable {
  Matrix values;
  std::vector<std::string> header;  // empty for headerless files
};

// Comma-separated numbers, one sample per line. A first line that does not
// parse as numbers is taken as a header.
CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const Matrix& m,
               const std::vector<std::string>& header = {});

void write_text(const std::string& path, const std::string& text);
Json read_json(const std::string& path);

// Node indices are 1-based in every serialized form.
Json to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const Json& j);

Json to_json(const EdgeEstimate& est);
Json to_json(const ConfidenceInterval& ci);
Json to_json(const BootstrapTestResult& res);
Json to_json(const Chi2TestResult& res);
Json to_json(const XiaResult& res);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

}  // namespace scoreinf
