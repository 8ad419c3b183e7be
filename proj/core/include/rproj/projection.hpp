#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "rproj/dataset.hpp"

namespace rproj {

enum class Recipe { dense_gaussian, sparse_achlioptas };

/// An m x n random projection matrix. Entries are a pure function of
/// (m, n, recipe, seed): regenerating with the same arguments is bit-identical
/// and disjoint entries may be produced in parallel in any order.
///
/// dense_gaussian:    R_ij ~ N(0, 1/m) i.i.d.
/// sparse_achlioptas: R_ij = sqrt(3/m) * s, s in {+1, 0, -1} with
///                    probabilities {1/6, 2/3, 1/6}.
class ProjectionMatrix {
 public:
  static ProjectionMatrix generate(int ambient_dim, int target_dim, Recipe recipe,
                                   std::uint64_t seed);

  /// Wraps an explicit matrix (interop and tests); no generation recipe applies.
  static ProjectionMatrix from_entries(Eigen::MatrixXd entries);

  int rows() const { return static_cast<int>(entries_.rows()); }  ///< m
  int cols() const { return static_cast<int>(entries_.cols()); }  ///< n
  Recipe recipe() const { return recipe_; }
  std::uint64_t seed() const { return seed_; }
  const Eigen::MatrixXd& entries() const { return entries_; }

  /// R * x; x must have length n.
  Eigen::VectorXd project(const Eigen::VectorXd& x) const;

 private:
  ProjectionMatrix() = default;
  Eigen::MatrixXd entries_;
  Recipe recipe_ = Recipe::dense_gaussian;
  std::uint64_t seed_ = 0;
};

/// Single standard-normal matrix entry as the generator produces it, before
/// the 1/sqrt(m) scaling. Exposed for streaming evaluation.
double gaussian_matrix_entry(std::uint64_t seed, int row, int col);

/// Projects every sample; labels are unchanged and ground-truth bases are
/// mapped through R when the target dimension can still support them.
LabeledDataset project_dataset(const ProjectionMatrix& r, const LabeledDataset& data);

/// A revocable projected feature vector. The projection matrix is not stored;
/// it is regenerated on demand from the seed.
struct CancelableTemplate {
  Eigen::VectorXd projected;  ///< R(seed) * x
  std::uint64_t seed = 0;
  std::string subject_id;
};

/// Projects x with the dense Gaussian matrix R(seed) of shape m x len(x).
CancelableTemplate issue_template(const Eigen::VectorXd& x, const std::string& subject,
                                  std::uint64_t seed, int target_dim);

/// Replacement template under a fresh seed; the old template stops matching.
CancelableTemplate reissue_template(const Eigen::VectorXd& x, const std::string& subject,
                                    std::uint64_t new_seed, int target_dim);

/// Cosine between two templates of equal target dimension.
double match_templates(const CancelableTemplate& a, const CancelableTemplate& b);

}  // namespace rproj
