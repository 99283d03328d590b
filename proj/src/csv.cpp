#include "adamant/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace adamant {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table read_numeric_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CsvError(path.string(), 0, 0, "cannot open file");
  Table table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    for (auto& c : cells) c = trim(c);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw CsvError(path.string(), line_no, 0,
                     "ragged row: expected " + std::to_string(table.header.size()) +
                         " cells, found " + std::to_string(cells.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (!parse_double(cells[j], row[j])) {
        throw CsvError(path.string(), line_no, j + 1,
                       "non-numeric cell '" + cells[j] + "'");
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw CsvError(path.string(), 0, 0, "empty file");
  if (table.rows.empty()) throw CsvError(path.string(), line_no, 0, "no data rows");
  return table;
}

}  // namespace

CsvError::CsvError(const std::string& path, std::size_t row, std::size_t column,
                   const std::string& what)
    : std::runtime_error(path + (row ? ": row " + std::to_string(row) : std::string()) +
                         (column ? ", column " + std::to_string(column) : std::string()) +
                         ": " + what),
      row_(row),
      column_(column) {}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvMatrix read_matrix_csv(const std::filesystem::path& path) {
  Table t = read_numeric_table(path);
  CsvMatrix out;
  out.names = std::move(t.header);
  out.values.resize(static_cast<Eigen::Index>(t.rows.size()),
                    static_cast<Eigen::Index>(out.names.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t j = 0; j < out.names.size(); ++j) {
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t.rows[i][j];
    }
  }
  return out;
}

DataMatrix load_matrix(const std::filesystem::path& path) {
  return DataMatrix(read_matrix_csv(path).values, ColumnState::raw);
}

std::vector<std::string> default_column_names(std::string_view prefix, std::size_t count) {
  std::vector<std::string> names;
  names.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    names.push_back(std::string(prefix) + std::to_string(j + 1));
  }
  return names;
}

void write_matrix_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& names,
                      const Eigen::MatrixXd& values) {
  if (names.size() != static_cast<std::size_t>(values.cols())) {
    throw std::invalid_argument("column name count does not match matrix width");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  out << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      out << (j ? "," : "") << format_double(values(i, j));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<TrialEpoch> read_epoch_file(const std::filesystem::path& path,
                                        double sample_rate_hz) {
  const Table t = read_numeric_table(path);
  if (t.header.size() < 4) {
    throw CsvError(path.string(), 1, 0, "epoch rows need trial, channel and >= 2 samples");
  }
  const std::size_t length = t.header.size() - 2;
  std::vector<long long> trial_order;
  std::map<long long, std::map<long long, std::size_t>> rows_by_trial;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double trial = t.rows[r][0];
    const double channel = t.rows[r][1];
    if (trial != std::floor(trial) || channel != std::floor(channel)) {
      throw CsvError(path.string(), r + 2, trial != std::floor(trial) ? 1 : 2,
                     "trial and channel ids must be integers");
    }
    const auto tid = static_cast<long long>(trial);
    const auto cid = static_cast<long long>(channel);
    if (!rows_by_trial.contains(tid)) trial_order.push_back(tid);
    if (!rows_by_trial[tid].emplace(cid, r).second) {
      throw CsvError(path.string(), r + 2, 2, "duplicate channel within trial");
    }
  }
  std::vector<TrialEpoch> trials;
  const auto& reference = rows_by_trial[trial_order.front()];
  for (long long tid : trial_order) {
    const auto& channels = rows_by_trial[tid];
    if (channels.size() != reference.size() ||
        !std::equal(channels.begin(), channels.end(), reference.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; })) {
      throw CsvError(path.string(), 0, 0,
                     "trial " + std::to_string(tid) + " has a different channel set");
    }
    Eigen::MatrixXd samples(static_cast<Eigen::Index>(channels.size()),
                            static_cast<Eigen::Index>(length));
    Eigen::Index q = 0;
    for (const auto& [cid, row] : channels) {
      for (std::size_t s = 0; s < length; ++s) {
        samples(q, static_cast<Eigen::Index>(s)) = t.rows[row][s + 2];
      }
      ++q;
    }
    trials.emplace_back(std::move(samples), sample_rate_hz);
  }
  return trials;
}

void write_epoch_file(const std::filesystem::path& path,
                      const std::vector<TrialEpoch>& trials) {
  if (trials.empty()) throw std::invalid_argument("no trials to write");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const auto length = trials.front().length();
  out << "trial,channel";
  for (Eigen::Index s = 0; s < length; ++s) out << ",t" << (s + 1);
  out << '\n';
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const auto& samples = trials[t].samples();
    for (Eigen::Index c = 0; c < samples.rows(); ++c) {
      out << (t + 1) << ',' << (c + 1);
      for (Eigen::Index s = 0; s < samples.cols(); ++s) out << ',' << format_double(samples(c, s));
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace adamant
