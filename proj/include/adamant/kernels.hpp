#pragma once

#include "adamant/data_matrix.hpp"

#include <Eigen/Dense>

#include <string>

namespace adamant {

/// One member of the ridge similarity family X (X^T X + lambda I)^-1 X^T.
/// The two endpoints are separate cases rather than special lambda values:
/// Projection is the lambda -> 0 limit (Mahalanobis weighting) and Linear is
/// the lambda -> infinity limit (Euclidean weighting, up to scale).
class KernelSpec {
 public:
  enum class Family { projection, ridge, linear };

  static KernelSpec projection() { return KernelSpec(Family::projection, 0.0); }
  static KernelSpec linear() { return KernelSpec(Family::linear, 0.0); }
  // Throws std::invalid_argument unless lambda is finite and > 0.
  static KernelSpec ridge(double lambda);

  // "0" -> projection, "inf" -> linear, any other number -> ridge.
  static KernelSpec parse(const std::string& token);

  Family family() const noexcept { return family_; }
  // Meaningful for ridge only.
  double lambda() const noexcept { return lambda_; }

  // Spectral weight applied to the squared singular value d2.
  double weight(double d2) const noexcept;

  // Inverse of parse(): "0", "inf", or the lambda with 17 significant digits.
  std::string token() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  KernelSpec(Family family, double lambda) : family_(family), lambda_(lambda) {}
  Family family_;
  double lambda_;
};

/// Symmetric positive semi-definite n x n similarity matrix.
class GramMatrix {
 public:
  GramMatrix() = default;
  explicit GramMatrix(Eigen::MatrixXd values);

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.rows(); }

 private:
  Eigen::MatrixXd values_;
};

/// Weighted squared distances between observations; symmetric, zero diagonal.
class SquaredDistanceMatrix {
 public:
  explicit SquaredDistanceMatrix(Eigen::MatrixXd values);

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.rows(); }

 private:
  Eigen::MatrixXd values_;
};

/// Thin SVD X = U diag(d) V^T truncated to the numerical rank.
struct SvdFactor {
  Eigen::MatrixXd u;
  Eigen::VectorXd d;
  Eigen::MatrixXd v;
  double rank_tolerance = 1e-12;

  Eigen::Index rank() const noexcept { return d.size(); }
};

inline constexpr double kDefaultRankTolerance = 1e-12;

// Keeps singular values strictly above rank_tolerance * d_1. Throws
// std::domain_error("rank zero") for an all-zero matrix.
SvdFactor svd_thin(const DataMatrix& x,
                   double rank_tolerance = kDefaultRankTolerance);

enum class GramPath { automatic, direct, svd, dual };

// direct: the closed form with an explicit p x p (pseudo)inverse.
// svd:    U diag(w_j) U^T with w_j from KernelSpec::weight.
// dual:   (X X^T + lambda I_n)^-1 X X^T, ridge only.
// automatic picks svd for n >= p, dual for p > n ridge, direct otherwise.
GramMatrix gram(const DataMatrix& x, const KernelSpec& spec,
                GramPath path = GramPath::automatic,
                double rank_tolerance = kDefaultRankTolerance);

// Gram matrix from an existing factorization; shares work across a lambda grid.
GramMatrix gram_from_svd(const SvdFactor& factor, const KernelSpec& spec);

GramPath resolve_path(Eigen::Index n, Eigen::Index p, const KernelSpec& spec);

// (X_i - X_j)^T W (X_i - X_j) with W the weight matrix matching spec,
// evaluated through a square-root factor of W.
SquaredDistanceMatrix squared_distance_matrix(
    const DataMatrix& x, const KernelSpec& spec,
    double rank_tolerance = kDefaultRankTolerance);

// -1/2 C D2 C with C = I - 11^T / n.
GramMatrix double_center(const SquaredDistanceMatrix& d2);

}  // namespace adamant
