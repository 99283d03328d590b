#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace adamant {

inline constexpr int kReportSchemaVersion = 1;

/// Everything needed to rerun `adamant test` and reproduce its p-values.
struct TestConfig {
  std::string x_path;
  std::string y_path;
  std::vector<std::string> lambda_x{"inf"};
  std::vector<std::string> lambda_y{"inf"};
  // Heritabilities turned into extra penalties p (1 - h2) / h2 per side.
  std::vector<double> heritability_x;
  std::vector<double> heritability_y;
  // Explicit "lx:ly" pairs; replaces the cross product when non-empty.
  std::vector<std::string> pairs;
  std::size_t permutations = 1000;
  std::uint64_t seed = 42;
  bool standardize_x = false;
  bool standardize_y = false;
  std::string covariates_path;
  bool literal_indicator = false;
  std::string output_path;

  friend bool operator==(const TestConfig&, const TestConfig&) = default;
};

struct PairResult {
  std::string lambda_x;
  std::string lambda_y;
  double statistic = 0.0;
  double p_value = 1.0;

  friend bool operator==(const PairResult&, const PairResult&) = default;
};

struct TestReport {
  int schema_version = kReportSchemaVersion;
  TestConfig config;
  std::vector<PairResult> pairs;
  double adaptive_p = 1.0;
  std::size_t selected_pair = 0;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t q = 0;
  double runtime_ms = 0.0;

  friend bool operator==(const TestReport&, const TestReport&) = default;
};

void to_json(nlohmann::json& j, const TestConfig& c);
void from_json(const nlohmann::json& j, TestConfig& c);
void to_json(nlohmann::json& j, const PairResult& r);
void from_json(const nlohmann::json& j, PairResult& r);
void to_json(nlohmann::json& j, const TestReport& r);
void from_json(const nlohmann::json& j, TestReport& r);

std::string serialize_report(const TestReport& report);
// Throws std::invalid_argument on malformed input or an unknown schema.
TestReport parse_report(const std::string& text);

}  // namespace adamant
