#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

namespace rproj {

/// Training samples as unit-normalized columns of an m x T matrix, with a
/// class label per column. Immutable; the thin SVD used by the solver is
/// computed once at construction.
class Dictionary {
 public:
  Dictionary(Eigen::MatrixXd columns, std::vector<int> labels);

  int sample_dim() const { return static_cast<int>(columns_.rows()); }   ///< m
  int size() const { return static_cast<int>(columns_.cols()); }         ///< T
  int num_classes() const { return num_classes_; }
  const Eigen::MatrixXd& columns() const { return columns_; }
  const std::vector<int>& labels() const { return labels_; }

  int rank() const { return rank_; }
  const Eigen::MatrixXd& range_basis() const { return u_; }      ///< m x r
  const Eigen::MatrixXd& row_basis() const { return v_; }        ///< T x r
  const Eigen::VectorXd& singular_values() const { return s_; }  ///< length r

 private:
  Eigen::MatrixXd columns_;
  std::vector<int> labels_;
  int num_classes_ = 0;
  Eigen::MatrixXd u_, v_;
  Eigen::VectorXd s_;
  int rank_ = 0;
};

enum class SolverStatus { converged, not_converged, infeasible };

struct SparseCode {
  Eigen::VectorXd coefficients;     ///< w, length T
  SolverStatus status = SolverStatus::converged;
  int iterations = 0;
  double feasibility_gap = 0.0;     ///< |y - D w|_2 of the returned iterate
  Eigen::VectorXd class_residuals;  ///< r_i = |y - D delta_i(w)|_2, length K
};

struct BasisPursuitOptions {
  double tol = 1e-6;
  int max_iter = 5000;
  double rho = 1.0;     ///< ADMM penalty parameter
  double noise = 0.0;   ///< sigma > 0 relaxes the constraint to |Dw - y| <= sigma
};

/// min |w|_1 subject to D w = y, solved by ADMM splitting between the affine
/// constraint set and the l1 prox. The problem is solved on y/|y| so the
/// result is exactly scale-covariant; tolerances act on that normalized
/// problem. Non-convergence and infeasible right-hand sides are reported in
/// the status, never thrown.
SparseCode basis_pursuit(const Dictionary& dict, const Eigen::VectorXd& y,
                         const BasisPursuitOptions& opts = {});

/// True iff every coefficient above the support threshold belongs to
/// true_class. Default threshold: 1e-4 * max|w_j|.
bool ssc_support_check(const SparseCode& code, const std::vector<int>& labels, int true_class,
                       std::optional<double> support_tol = std::nullopt);

struct Classification {
  int predicted = 0;               ///< argmin_i r_i, ties to the smallest class id
  Eigen::VectorXd residuals;       ///< per-class reconstruction residuals
  SparseCode code;
};

Classification src_classify(const Dictionary& dict, const Eigen::VectorXd& y,
                            const BasisPursuitOptions& opts = {});

}  // namespace rproj
