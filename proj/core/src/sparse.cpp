#include "rproj/sparse.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rproj {
namespace {

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double kappa) {
  return v.unaryExpr([kappa](double a) {
    const double m = std::abs(a) - kappa;
    return m > 0.0 ? (a > 0.0 ? m : -m) : 0.0;
  });
}

/// Projection of v onto {w : |D w - y| <= sigma} in the cached SVD frame.
/// c = Sigma V^T v - U^T y is the in-range residual in U-coordinates and
/// off_range2 = |y - U U^T y|^2 the part no w can reduce. For sigma = 0 this
/// reduces to the affine projection v - V V^T v + pinv(D) y.
Eigen::VectorXd project_residual_ball(const Dictionary& dict, const Eigen::VectorXd& v,
                                      const Eigen::VectorXd& uty, double off_range2,
                                      double sigma) {
  const Eigen::MatrixXd& vmat = dict.row_basis();
  const Eigen::VectorXd& s = dict.singular_values();
  const Eigen::VectorXd vtv = vmat.transpose() * v;
  const Eigen::VectorXd c = s.cwiseProduct(vtv) - uty;

  if (sigma <= 0.0) {
    // w = v - V V^T v + V Sigma^{-1} U^T y
    return v - vmat * (vtv - uty.cwiseQuotient(s));
  }
  const double budget2 = sigma * sigma - off_range2;
  if (c.squaredNorm() + off_range2 <= sigma * sigma || budget2 <= 0.0) {
    if (budget2 <= 0.0) {
      // target ball unreachable; fall back to the affine projection
      return v - vmat * (vtv - uty.cwiseQuotient(s));
    }
    return v;
  }
  // Solve sum_i c_i^2 / (1 + mu s_i^2)^2 = budget2 for mu > 0 (decreasing in mu).
  double lo = 0.0, hi = 1.0;
  auto g = [&](double mu) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      const double t = 1.0 + mu * s(i) * s(i);
      acc += c(i) * c(i) / (t * t);
    }
    return acc;
  };
  while (g(hi) > budget2) {
    hi *= 2.0;
    if (hi > 1e18) break;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > budget2)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-15 * (1.0 + hi)) break;
  }
  const double mu = 0.5 * (lo + hi);
  Eigen::VectorXd a(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) a(i) = mu * c(i) / (1.0 + mu * s(i) * s(i));
  return v - vmat * s.cwiseProduct(a);
}

}  // namespace

Dictionary::Dictionary(Eigen::MatrixXd columns, std::vector<int> labels)
    : columns_(std::move(columns)), labels_(std::move(labels)) {
  if (columns_.cols() < 1 || columns_.rows() < 1)
    throw std::invalid_argument("Dictionary: empty matrix");
  if (static_cast<std::size_t>(columns_.cols()) != labels_.size())
    throw std::invalid_argument("Dictionary: column/label count mismatch");
  for (int l : labels_) {
    if (l < 1) throw std::invalid_argument("Dictionary: labels must be >= 1");
    num_classes_ = std::max(num_classes_, l);
  }
  for (int c = 1; c <= num_classes_; ++c)
    if (std::find(labels_.begin(), labels_.end(), c) == labels_.end())
      throw std::invalid_argument("Dictionary: class " + std::to_string(c) + " has no column");
  for (Eigen::Index j = 0; j < columns_.cols(); ++j) {
    const double n = columns_.col(j).norm();
    if (n == 0.0)
      throw std::invalid_argument("Dictionary: column " + std::to_string(j) + " is zero");
    columns_.col(j) /= n;
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(columns_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = static_cast<double>(std::max(columns_.rows(), columns_.cols())) *
                        std::numeric_limits<double>::epsilon() * sv(0);
  rank_ = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank_;
  u_ = svd.matrixU().leftCols(rank_);
  v_ = svd.matrixV().leftCols(rank_);
  s_ = sv.head(rank_);
}

SparseCode basis_pursuit(const Dictionary& dict, const Eigen::VectorXd& y,
                         const BasisPursuitOptions& opts) {
  if (y.size() != dict.sample_dim())
    throw std::invalid_argument("basis_pursuit: expected length " +
                                std::to_string(dict.sample_dim()) + ", got " +
                                std::to_string(y.size()));
  if (!(opts.tol > 0.0)) throw std::invalid_argument("basis_pursuit: tolerance must be positive");
  if (opts.max_iter < 1) throw std::invalid_argument("basis_pursuit: max_iter must be positive");
  if (!(opts.rho > 0.0)) throw std::invalid_argument("basis_pursuit: rho must be positive");
  if (opts.noise < 0.0) throw std::invalid_argument("basis_pursuit: noise must be nonnegative");

  const int t = dict.size();
  SparseCode code;
  code.coefficients = Eigen::VectorXd::Zero(t);

  auto finish = [&](SolverStatus status, int iters) {
    code.status = status;
    code.iterations = iters;
    code.feasibility_gap = (y - dict.columns() * code.coefficients).norm();
    code.class_residuals.resize(dict.num_classes());
    for (int c = 1; c <= dict.num_classes(); ++c) {
      Eigen::VectorXd masked = code.coefficients;
      for (int j = 0; j < t; ++j)
        if (dict.labels()[static_cast<std::size_t>(j)] != c) masked(j) = 0.0;
      code.class_residuals(c - 1) = (y - dict.columns() * masked).norm();
    }
    return code;
  };

  const double y_norm = y.norm();
  if (y_norm == 0.0) return finish(SolverStatus::converged, 0);

  // Solve on the normalized right-hand side; rescale at the end.
  const Eigen::VectorXd ys = y / y_norm;
  const double sigma = opts.noise / y_norm;
  const Eigen::VectorXd uty = dict.range_basis().transpose() * ys;
  const double off_range2 = std::max(0.0, ys.squaredNorm() - uty.squaredNorm());
  const double off_range = std::sqrt(off_range2);
  const Eigen::VectorXd w_pinv = dict.row_basis() * uty.cwiseQuotient(dict.singular_values());

  if (off_range > sigma + opts.tol) {
    // y has a component outside the column space: no feasible w exists.
    code.coefficients = w_pinv * y_norm;
    return finish(SolverStatus::infeasible, 0);
  }

  const double kappa = 1.0 / opts.rho;
  Eigen::VectorXd z = w_pinv;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(t);
  Eigen::VectorXd w(t), z_old(t);

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    w = project_residual_ball(dict, z - u, uty, off_range2, sigma);
    z_old = z;
    z = soft_threshold(w + u, kappa);
    u += w - z;

    // Feasibility of z in the SVD frame: |ys - D z|^2 = |U^T ys - S V^T z|^2 + off_range2.
    const Eigen::VectorXd rz = uty - dict.singular_values().cwiseProduct(dict.row_basis().transpose() * z);
    const double feas = std::sqrt(rz.squaredNorm() + off_range2);
    const double dual = opts.rho * (z - z_old).norm();
    if (feas <= sigma + opts.tol && dual <= opts.tol) {
      code.coefficients = z * y_norm;
      return finish(SolverStatus::converged, iter);
    }
  }
  code.coefficients = z * y_norm;
  return finish(SolverStatus::not_converged, opts.max_iter);
}

bool ssc_support_check(const SparseCode& code, const std::vector<int>& labels, int true_class,
                       std::optional<double> support_tol) {
  if (static_cast<std::size_t>(code.coefficients.size()) != labels.size())
    throw std::invalid_argument("ssc_support_check: coefficient/label count mismatch");
  const double peak = code.coefficients.cwiseAbs().maxCoeff();
  if (peak == 0.0) return true;  // vacuous
  const double threshold = support_tol.value_or(1e-4 * peak);
  for (Eigen::Index j = 0; j < code.coefficients.size(); ++j)
    if (std::abs(code.coefficients(j)) > threshold &&
        labels[static_cast<std::size_t>(j)] != true_class)
      return false;
  return true;
}

Classification src_classify(const Dictionary& dict, const Eigen::VectorXd& y,
                            const BasisPursuitOptions& opts) {
  Classification out;
  out.code = basis_pursuit(dict, y, opts);
  out.residuals = out.code.class_residuals;
  int best = 1;
  for (int c = 2; c <= dict.num_classes(); ++c)
    if (out.residuals(c - 1) < out.residuals(best - 1)) best = c;
  out.predicted = best;
  return out;
}

}  // namespace rproj
