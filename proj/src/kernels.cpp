#include "adamant/kernels.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace adamant {
namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a) {
  return 0.5 * (a + a.transpose());
}

void require_ridge_lambda(double lambda) {
  if (!std::isfinite(lambda) || !(lambda > 0.0)) {
    throw std::invalid_argument(
        "ridge penalty must be finite and > 0; use the projection or linear "
        "kernel for the endpoints");
  }
}

// Pseudoinverse-based projection onto col(X) through the eigenvalues of
// X^T X. Eigenvalue noise is of order p * eps * ev_max, so the cutoff cannot
// go below that even when the singular value tolerance squared would.
Eigen::MatrixXd direct_projection(const Eigen::MatrixXd& x,
                                  double rank_tolerance) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x.transpose() * x);
  const Eigen::VectorXd& ev = eig.eigenvalues();  // ascending
  const double ev_max = ev.size() > 0 ? ev(ev.size() - 1) : 0.0;
  if (!(ev_max > 0.0)) throw std::domain_error("rank zero");
  const double floor_rel =
      std::max(rank_tolerance * rank_tolerance,
               64.0 * std::numeric_limits<double>::epsilon() *
                   static_cast<double>(x.cols()));
  Eigen::Index keep = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > floor_rel * ev_max) ++keep;
  }
  const Eigen::MatrixXd basis = eig.eigenvectors().rightCols(keep);
  const Eigen::VectorXd inv_sqrt =
      ev.tail(keep).cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd z = (x * basis) * inv_sqrt.asDiagonal();
  return z * z.transpose();
}

Eigen::MatrixXd direct_gram(const Eigen::MatrixXd& x, const KernelSpec& spec,
                            double rank_tolerance) {
  switch (spec.family()) {
    case KernelSpec::Family::linear:
      return x * x.transpose();
    case KernelSpec::Family::projection:
      return direct_projection(x, rank_tolerance);
    case KernelSpec::Family::ridge: {
      Eigen::MatrixXd a = x.transpose() * x;
      a.diagonal().array() += spec.lambda();
      Eigen::LLT<Eigen::MatrixXd> llt(a);
      const Eigen::MatrixXd solved = llt.solve(x.transpose());
      return x * solved;
    }
  }
  throw std::logic_error("unknown kernel family");
}

Eigen::MatrixXd dual_gram(const Eigen::MatrixXd& x, const KernelSpec& spec) {
  if (spec.family() != KernelSpec::Family::ridge) {
    throw std::invalid_argument("dual path is defined for ridge kernels only");
  }
  const Eigen::MatrixXd outer = x * x.transpose();
  Eigen::MatrixXd a = outer;
  a.diagonal().array() += spec.lambda();
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  return llt.solve(outer);
}

}  // namespace

KernelSpec KernelSpec::ridge(double lambda) {
  require_ridge_lambda(lambda);
  return KernelSpec(Family::ridge, lambda);
}

KernelSpec KernelSpec::parse(const std::string& token) {
  if (token == "inf" || token == "Inf" || token == "INF") return linear();
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument("invalid penalty token '" + token + "'");
  }
  if (value == 0.0) return projection();
  if (std::isinf(value) && value > 0.0) return linear();
  return ridge(value);
}

double KernelSpec::weight(double d2) const noexcept {
  switch (family_) {
    case Family::projection: return 1.0;
    case Family::ridge: return d2 / (d2 + lambda_);
    case Family::linear: return d2;
  }
  return 0.0;
}

std::string KernelSpec::token() const {
  switch (family_) {
    case Family::projection: return "0";
    case Family::linear: return "inf";
    case Family::ridge: break;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", lambda_);
  return buf;
}

GramMatrix::GramMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) {
    throw std::invalid_argument("gram matrix must be square");
  }
  const double scale = values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0;
  if ((values_ - values_.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(scale, 1e-300)) {
    throw std::invalid_argument("gram matrix must be symmetric");
  }
}

SquaredDistanceMatrix::SquaredDistanceMatrix(Eigen::MatrixXd values)
    : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) {
    throw std::invalid_argument("distance matrix must be square");
  }
}

SvdFactor svd_thin(const DataMatrix& x, double rank_tolerance) {
  x.require_centered("svd_thin");
  if (x.rows() == 0 || x.cols() == 0) throw std::domain_error("rank zero");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x.values(),
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (!(s(0) > 0.0)) throw std::domain_error("rank zero");
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > rank_tolerance * s(0)) ++r;
  SvdFactor f;
  f.u = svd.matrixU().leftCols(r);
  f.d = s.head(r);
  f.v = svd.matrixV().leftCols(r);
  f.rank_tolerance = rank_tolerance;
  return f;
}

GramMatrix gram_from_svd(const SvdFactor& factor, const KernelSpec& spec) {
  Eigen::VectorXd w(factor.rank());
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    w(j) = spec.weight(factor.d(j) * factor.d(j));
  }
  const Eigen::MatrixXd scaled = factor.u * w.cwiseSqrt().asDiagonal();
  return GramMatrix(symmetrized(scaled * scaled.transpose()));
}

GramPath resolve_path(Eigen::Index n, Eigen::Index p, const KernelSpec& spec) {
  if (n >= p) return GramPath::svd;
  if (spec.family() == KernelSpec::Family::ridge) return GramPath::dual;
  return GramPath::direct;
}

GramMatrix gram(const DataMatrix& x, const KernelSpec& spec, GramPath path,
                double rank_tolerance) {
  x.require_centered("gram");
  if (path == GramPath::automatic) path = resolve_path(x.rows(), x.cols(), spec);
  switch (path) {
    case GramPath::svd:
      return gram_from_svd(svd_thin(x, rank_tolerance), spec);
    case GramPath::dual:
      return GramMatrix(symmetrized(dual_gram(x.values(), spec)));
    case GramPath::direct:
    case GramPath::automatic:
      break;
  }
  return GramMatrix(symmetrized(direct_gram(x.values(), spec, rank_tolerance)));
}

SquaredDistanceMatrix squared_distance_matrix(const DataMatrix& x,
                                              const KernelSpec& spec,
                                              double rank_tolerance) {
  x.require_centered("squared_distance_matrix");
  // Rows of z are the observations mapped through a factor F with W = F F^T.
  Eigen::MatrixXd z;
  switch (spec.family()) {
    case KernelSpec::Family::linear:
      z = x.values();
      break;
    case KernelSpec::Family::projection: {
      const SvdFactor f = svd_thin(x, rank_tolerance);
      z = x.values() * (f.v * f.d.cwiseInverse().asDiagonal());
      break;
    }
    case KernelSpec::Family::ridge: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
          x.values().transpose() * x.values());
      const Eigen::VectorXd scale =
          (eig.eigenvalues().array().max(0.0) + spec.lambda()).rsqrt();
      z = x.values() * (eig.eigenvectors() * scale.asDiagonal());
      break;
    }
  }
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = (z.row(i) - z.row(j)).squaredNorm();
      d2(i, j) = v;
      d2(j, i) = v;
    }
  }
  return SquaredDistanceMatrix(std::move(d2));
}

GramMatrix double_center(const SquaredDistanceMatrix& d2) {
  const Eigen::MatrixXd& d = d2.values();
  const Eigen::VectorXd row_mean = d.rowwise().mean();
  const Eigen::RowVectorXd col_mean = d.colwise().mean();
  const double grand = d.mean();
  Eigen::MatrixXd b = d;
  b.colwise() -= row_mean;
  b.rowwise() -= col_mean;
  b.array() += grand;
  b *= -0.5;
  return GramMatrix(symmetrized(b));
}

}  // namespace adamant
