#include "adamant/report.hpp"

#include <stdexcept>

namespace adamant {

using nlohmann::json;

void to_json(json& j, const TestConfig& c) {
  j = json{{"x_path", c.x_path},
           {"y_path", c.y_path},
           {"lambda_x", c.lambda_x},
           {"lambda_y", c.lambda_y},
           {"heritability_x", c.heritability_x},
           {"heritability_y", c.heritability_y},
           {"pairs", c.pairs},
           {"permutations", c.permutations},
           {"seed", c.seed},
           {"standardize_x", c.standardize_x},
           {"standardize_y", c.standardize_y},
           {"covariates_path", c.covariates_path},
           {"literal_indicator", c.literal_indicator},
           {"output_path", c.output_path}};
}

void from_json(const json& j, TestConfig& c) {
  j.at("x_path").get_to(c.x_path);
  j.at("y_path").get_to(c.y_path);
  j.at("lambda_x").get_to(c.lambda_x);
  j.at("lambda_y").get_to(c.lambda_y);
  j.at("heritability_x").get_to(c.heritability_x);
  j.at("heritability_y").get_to(c.heritability_y);
  j.at("pairs").get_to(c.pairs);
  j.at("permutations").get_to(c.permutations);
  j.at("seed").get_to(c.seed);
  j.at("standardize_x").get_to(c.standardize_x);
  j.at("standardize_y").get_to(c.standardize_y);
  j.at("covariates_path").get_to(c.covariates_path);
  j.at("literal_indicator").get_to(c.literal_indicator);
  j.at("output_path").get_to(c.output_path);
}

void to_json(json& j, const PairResult& r) {
  j = json{{"lambda_x", r.lambda_x},
           {"lambda_y", r.lambda_y},
           {"statistic", r.statistic},
           {"p_value", r.p_value}};
}

void from_json(const json& j, PairResult& r) {
  j.at("lambda_x").get_to(r.lambda_x);
  j.at("lambda_y").get_to(r.lambda_y);
  j.at("statistic").get_to(r.statistic);
  j.at("p_value").get_to(r.p_value);
}

void to_json(json& j, const TestReport& r) {
  j = json{{"schema_version", r.schema_version},
           {"config", r.config},
           {"pairs", r.pairs},
           {"adaptive_p", r.adaptive_p},
           {"selected_pair", r.selected_pair},
           {"n", r.n},
           {"p", r.p},
           {"q", r.q},
           {"runtime_ms", r.runtime_ms}};
}

void from_json(const json& j, TestReport& r) {
  j.at("schema_version").get_to(r.schema_version);
  if (r.schema_version != kReportSchemaVersion) {
    throw std::invalid_argument("unsupported report schema version " +
                                std::to_string(r.schema_version));
  }
  j.at("config").get_to(r.config);
  j.at("pairs").get_to(r.pairs);
  j.at("adaptive_p").get_to(r.adaptive_p);
  j.at("selected_pair").get_to(r.selected_pair);
  j.at("n").get_to(r.n);
  j.at("p").get_to(r.p);
  j.at("q").get_to(r.q);
  j.at("runtime_ms").get_to(r.runtime_ms);
}

std::string serialize_report(const TestReport& report) {
  return json(report).dump(2) + "\n";
}

TestReport parse_report(const std::string& text) {
  try {
    return json::parse(text).get<TestReport>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

}  // namespace adamant
