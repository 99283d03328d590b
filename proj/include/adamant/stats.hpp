#pragma once

#include "adamant/data_matrix.hpp"
#include "adamant/kernels.hpp"

#include <Eigen/Dense>

namespace adamant {

enum class StatisticKind {
  mantel_trace,
  rv,
  fixed_score,
  random_score,
  ridge_score
};

struct AssociationValue {
  double statistic = 0.0;
  StatisticKind kind = StatisticKind::mantel_trace;
};

/// Principal correlation vector z = U^T y paired with the singular values.
struct PrincipalCorrelation {
  Eigen::VectorXd z;
  Eigen::VectorXd d;
};

// sum_ij H_ij K_ij, which equals tr(HK) for symmetric inputs.
AssociationValue mantel_trace(const GramMatrix& h, const GramMatrix& k);

// tr(HK) / sqrt(tr(H^2) tr(K^2)). Throws std::domain_error on a zero input.
AssociationValue rv_coefficient(const GramMatrix& h, const GramMatrix& k);

// tr(H_0 K_0) with projection kernels on both sides (Pillai's trace).
AssociationValue fixed_effects_score(const DataMatrix& x, const DataMatrix& y);

// tr(X X^T Y Y^T), evaluated as ||X^T Y||_F^2.
AssociationValue random_effects_score(const DataMatrix& x,
                                      const DataMatrix& y);

PrincipalCorrelation principal_correlations(const SvdFactor& factor,
                                            const Eigen::VectorXd& y);

// sum_j w_j z_j^2 = tr(gram(X, spec) y y^T) without forming any n x n matrix.
AssociationValue ridge_score_univariate(const SvdFactor& factor,
                                        const Eigen::VectorXd& y,
                                        const KernelSpec& spec);

}  // namespace adamant
