#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>

namespace adamant {

enum class ColumnState { raw, centered, standardized };

std::string_view to_string(ColumnState state);

/// Observations-by-features matrix (rows are subjects) tagged with how its
/// columns have been normalized. Operations that need centered data check the
/// tag instead of silently centering.
class DataMatrix {
 public:
  DataMatrix() = default;
  explicit DataMatrix(Eigen::MatrixXd values,
                      ColumnState state = ColumnState::raw);

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  ColumnState column_state() const noexcept { return state_; }
  bool is_centered() const noexcept { return state_ != ColumnState::raw; }

  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index cols() const noexcept { return values_.cols(); }

  // Throws std::invalid_argument naming `what` when the matrix is raw.
  void require_centered(std::string_view what) const;

 private:
  Eigen::MatrixXd values_;
  ColumnState state_ = ColumnState::raw;
};

DataMatrix center_columns(const DataMatrix& x);

// Columns scaled to unit sample variance (n - 1 denominator). Constant columns
// stay at zero.
DataMatrix standardize_columns(const DataMatrix& x);

// X - C (C^T C)^- C^T X. The result is tagged centered when the intercept lies
// in the column space of C, raw otherwise.
DataMatrix residualize(const DataMatrix& x, const DataMatrix& covariates,
                       double rank_tolerance = 1e-12);

}  // namespace adamant
