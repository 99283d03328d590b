#include "adamant/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adamant {
namespace {

void require_same_size(const GramMatrix& h, const GramMatrix& k) {
  if (h.size() != k.size()) {
    throw std::invalid_argument("dimension mismatch: " +
                                std::to_string(h.size()) + " vs " +
                                std::to_string(k.size()) + " observations");
  }
}

}  // namespace

AssociationValue mantel_trace(const GramMatrix& h, const GramMatrix& k) {
  require_same_size(h, k);
  return {h.values().cwiseProduct(k.values()).sum(),
          StatisticKind::mantel_trace};
}

AssociationValue rv_coefficient(const GramMatrix& h, const GramMatrix& k) {
  require_same_size(h, k);
  const double hh = h.values().squaredNorm();
  const double kk = k.values().squaredNorm();
  if (!(hh > 0.0) || !(kk > 0.0)) {
    throw std::domain_error("degenerate similarity");
  }
  const double hk = h.values().cwiseProduct(k.values()).sum();
  return {hk / std::sqrt(hh * kk), StatisticKind::rv};
}

AssociationValue fixed_effects_score(const DataMatrix& x,
                                     const DataMatrix& y) {
  if (x.rows() != y.rows()) throw std::invalid_argument("dimension mismatch");
  const GramMatrix hx = gram(x, KernelSpec::projection());
  const GramMatrix ky = gram(y, KernelSpec::projection());
  return {mantel_trace(hx, ky).statistic, StatisticKind::fixed_score};
}

AssociationValue random_effects_score(const DataMatrix& x,
                                      const DataMatrix& y) {
  if (x.rows() != y.rows()) throw std::invalid_argument("dimension mismatch");
  x.require_centered("random_effects_score");
  y.require_centered("random_effects_score");
  return {(x.values().transpose() * y.values()).squaredNorm(),
          StatisticKind::random_score};
}

PrincipalCorrelation principal_correlations(const SvdFactor& factor,
                                            const Eigen::VectorXd& y) {
  if (y.size() != factor.u.rows()) {
    throw std::invalid_argument("principal_correlations: length mismatch");
  }
  return {factor.u.transpose() * y, factor.d};
}

AssociationValue ridge_score_univariate(const SvdFactor& factor,
                                        const Eigen::VectorXd& y,
                                        const KernelSpec& spec) {
  const PrincipalCorrelation pc = principal_correlations(factor, y);
  double s = 0.0;
  for (Eigen::Index j = 0; j < pc.z.size(); ++j) {
    s += spec.weight(pc.d(j) * pc.d(j)) * pc.z(j) * pc.z(j);
  }
  return {s, StatisticKind::ridge_score};
}

}  // namespace adamant
