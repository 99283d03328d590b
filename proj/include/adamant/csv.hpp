#pragma once

#include "adamant/data_matrix.hpp"
#include "adamant/spectral.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace adamant {

/// Parse failure carrying the 1-based file position of the offending cell
/// (column 0 when the whole row is at fault).
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& path, std::size_t row, std::size_t column,
           const std::string& what);
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

struct CsvMatrix {
  std::vector<std::string> names;
  Eigen::MatrixXd values;
};

// Header row of feature names, then one numeric row per observation.
CsvMatrix read_matrix_csv(const std::filesystem::path& path);
DataMatrix load_matrix(const std::filesystem::path& path);

// Doubles are written with 17 significant digits so values reload exactly.
void write_matrix_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& names,
                      const Eigen::MatrixXd& values);
std::vector<std::string> default_column_names(std::string_view prefix,
                                              std::size_t count);

std::string format_double(double value);

// Epoch file: header, then rows "trial,channel,x_1,...,x_T". Trials keep the
// order of first appearance; channels are ordered by channel id.
std::vector<TrialEpoch> read_epoch_file(const std::filesystem::path& path,
                                        double sample_rate_hz);
void write_epoch_file(const std::filesystem::path& path,
                      const std::vector<TrialEpoch>& trials);

}  // namespace adamant
