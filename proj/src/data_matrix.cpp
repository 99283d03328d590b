#include "adamant/data_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adamant {

std::string_view to_string(ColumnState state) {
  switch (state) {
    case ColumnState::raw: return "raw";
    case ColumnState::centered: return "centered";
    case ColumnState::standardized: return "standardized";
  }
  return "unknown";
}

DataMatrix::DataMatrix(Eigen::MatrixXd values, ColumnState state)
    : values_(std::move(values)), state_(state) {
  if (!values_.allFinite()) {
    throw std::invalid_argument("data matrix contains non-finite values");
  }
}

void DataMatrix::require_centered(std::string_view what) const {
  if (!is_centered()) {
    throw std::invalid_argument(std::string(what) +
                                " requires column-centered data");
  }
}

DataMatrix center_columns(const DataMatrix& x) {
  if (x.rows() < 2) throw std::invalid_argument("insufficient observations");
  if (x.is_centered()) return x;
  Eigen::MatrixXd v = x.values();
  v.rowwise() -= v.colwise().mean();
  return DataMatrix(std::move(v), ColumnState::centered);
}

DataMatrix standardize_columns(const DataMatrix& x) {
  if (x.column_state() == ColumnState::standardized) return x;
  Eigen::MatrixXd v = center_columns(x).values();
  const double denom = static_cast<double>(v.rows() - 1);
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    const double scale = v.col(j).cwiseAbs().maxCoeff();
    const double var = v.col(j).squaredNorm() / denom;
    // Constant column: after centering it is zero up to rounding.
    if (scale == 0.0 || var <= 1e-24 * scale * scale) {
      v.col(j).setZero();
      continue;
    }
    v.col(j) /= std::sqrt(var);
  }
  return DataMatrix(std::move(v), ColumnState::standardized);
}

DataMatrix residualize(const DataMatrix& x, const DataMatrix& covariates,
                       double rank_tolerance) {
  if (covariates.rows() != x.rows()) {
    throw std::invalid_argument("residualize: covariate row count " +
                                std::to_string(covariates.rows()) +
                                " does not match " + std::to_string(x.rows()));
  }
  if (covariates.cols() >= x.rows()) {
    throw std::invalid_argument(
        "residualize: covariate count must be below the number of "
        "observations");
  }
  const Eigen::MatrixXd& c = covariates.values();
  if (c.cols() == 0) return x;

  Eigen::BDCSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeThinU);
  const auto& d = svd.singularValues();
  Eigen::Index rank = 0;
  if (d.size() > 0 && d(0) > 0.0) {
    while (rank < d.size() && d(rank) > rank_tolerance * d(0)) ++rank;
  }
  const Eigen::MatrixXd basis = svd.matrixU().leftCols(rank);
  Eigen::MatrixXd resid = x.values() - basis * (basis.transpose() * x.values());

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(x.rows());
  const Eigen::VectorXd ones_resid = ones - basis * (basis.transpose() * ones);
  const bool intercept_in_span =
      ones_resid.norm() <= 1e-8 * std::sqrt(static_cast<double>(x.rows()));
  return DataMatrix(std::move(resid), intercept_in_span ? ColumnState::centered
                                                        : ColumnState::raw);
}

}  // namespace adamant
