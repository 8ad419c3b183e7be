#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace rproj {

class LabeledDataset;

/// A linear subspace of R^n spanned by the columns of an n x d matrix.
/// Construction rejects rank-deficient column sets; an orthonormal basis of
/// the span is computed once and cached.
class SubspaceBasis {
 public:
  explicit SubspaceBasis(Eigen::MatrixXd columns);

  int ambient_dim() const { return static_cast<int>(columns_.rows()); }
  int dim() const { return static_cast<int>(columns_.cols()); }
  const Eigen::MatrixXd& columns() const { return columns_; }

  /// Orthonormal basis U of the span (U^T U = I).
  const Eigen::MatrixXd& orthonormal() const { return orthonormal_; }

 private:
  Eigen::MatrixXd columns_;
  Eigen::MatrixXd orthonormal_;
};

/// Cosine of the angle between two nonzero vectors, clamped to [-1, 1].
double cosine(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Largest cosine achieved by unit vectors drawn from a pair of subspaces,
/// together with the vector pair achieving it.
struct PrincipalPair {
  double margin = 0.0;      ///< cosine of the principal angle, in [0, 1]
  double angle = 0.0;       ///< principal angle in radians, acos(margin)
  Eigen::VectorXd u;        ///< attaining unit vector in the first subspace
  Eigen::VectorXd v;        ///< attaining unit vector in the second subspace
};

PrincipalPair subspace_margin(const SubspaceBasis& a, const SubspaceBasis& b);

/// Largest cross-class cosine between samples of class `class_id` and all
/// samples of every other class.
double dataset_margin(const LabeledDataset& data, int class_id);

/// True iff the sum of the given subspaces is a direct sum, i.e. the
/// concatenated bases have rank equal to the sum of the dimensions.
bool check_independence(std::span<const SubspaceBasis> bases);

/// Pairwise subspace margins and per-class dataset margins. Class positions
/// here are 0-based (class id k lives at position k - 1).
struct MarginReport {
  Eigen::MatrixXd pairwise;               ///< K x K, symmetric, unit diagonal; empty if no bases
  std::vector<PrincipalPair> pairs;       ///< upper triangle (i < j), row-major order
  std::vector<double> dataset_margins;    ///< per class, empty if computed from bases only
  std::vector<bool> degenerate;           ///< per class: margin reached 1 (duplicated cross-class direction)

  const PrincipalPair& pair(int i, int j) const;
  int num_classes() const { return static_cast<int>(pairwise.rows()); }
};

/// Report over explicit subspaces only.
MarginReport margin_report(std::span<const SubspaceBasis> bases);

/// Report over a dataset: per-class dataset margins, plus pairwise subspace
/// margins when the dataset carries ground-truth bases.
MarginReport margin_report(const LabeledDataset& data);

/// Numerical rank with the max(rows, cols) * eps * sigma_max cutoff.
int numerical_rank(const Eigen::MatrixXd& m);

}  // namespace rproj
