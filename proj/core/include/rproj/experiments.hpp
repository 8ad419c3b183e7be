#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "rproj/dataset.hpp"
#include "rproj/projection.hpp"
#include "rproj/report.hpp"
#include "rproj/sparse.hpp"

namespace rproj {

/// Random pair (x, y) with an exact prescribed cosine and prescribed lengths,
/// uniformly random orientation.
std::pair<Eigen::VectorXd, Eigen::VectorXd> make_pair_with_cosine(int ambient_dim, double gamma,
                                                                  double length_x, double length_y,
                                                                  std::uint64_t seed);

enum class RejectionMode { cosine, inner_product };

/// Rejection-probability sweep: for each target cosine gamma and each m in
/// the grid, the fraction of fresh projections whose preservation ratio falls
/// outside [1-eps, 1+eps].
///   cosine mode ratio: <Rx,Ry> |x| |y| / (|Rx| |Ry| <x,y>)
///   inner  mode ratio: <Rx,Ry> / <x,y>
/// Trial t of cell (gamma_index, m) projects with seed
/// derive_seed(master_seed, gamma_index, m, t), so results do not depend on
/// the execution schedule.
struct RejectionConfig {
  int ambient_dim = 300;
  std::vector<int> m_grid = {30, 60, 90, 120, 150, 180, 210, 240, 270, 300};
  int trials = 2000;
  double eps = 0.1;
  std::vector<double> gamma_targets;
  RejectionMode mode = RejectionMode::cosine;
  std::uint64_t master_seed = 0;
  Recipe recipe = Recipe::dense_gaussian;
  /// Vector lengths are drawn uniformly from [length_min, length_max] per
  /// gamma target and recorded in the report metadata.
  double length_min = 1.0;
  double length_max = 10.0;
  int threads = 1;
};

ExperimentReport rejection_curve(const RejectionConfig& config);

enum class ReductionMethod { rp, pca };

/// Dimensionality-reduction comparison on one dataset: per (method, dim),
/// the reduction time (construction of the map plus projection of the whole
/// dataset; median of 5 repetitions after a warm-up pass) and the accuracy of
/// sparse-representation classification on a stratified split.
struct BenchmarkConfig {
  std::vector<int> dims;
  std::vector<ReductionMethod> methods = {ReductionMethod::rp, ReductionMethod::pca};
  double split_fraction = 0.5;
  std::uint64_t seed = 0;
  BasisPursuitOptions solver;
  bool with_accuracy = true;   ///< accuracy column reads 0 when disabled
  bool with_timing = true;     ///< time_ms column reads 0 when disabled (reports become byte-reproducible)
  int threads = 1;
};

ExperimentReport structure_benchmark(const LabeledDataset& data, const BenchmarkConfig& config);

/// SRC accuracy of one method/dimension on a stratified split. dim <= 0
/// classifies in the original space. Returns accuracy in percent; non_converged
/// counts solver statuses other than `converged` across test points.
struct ClassifyResult {
  double accuracy = 0.0;
  int correct = 0;
  int total = 0;
  int non_converged = 0;
};

ClassifyResult src_accuracy(const LabeledDataset& train, const LabeledDataset& test,
                            const BasisPursuitOptions& opts = {}, int threads = 1);

/// Least-squares preimages of projected templates through pinv(R). When the
/// original vectors are supplied the report carries relative reconstruction
/// errors; when a subspace basis B is also supplied, the reconstruction
///B (R B)^+ x_bar constrained to that subspace is reported alongside.
ExperimentReport inversion_attack(const ProjectionMatrix& r,
                                  const std::vector<Eigen::VectorXd>& templates,
                                  const std::vector<Eigen::VectorXd>* originals = nullptr,
                                  const SubspaceBasis* basis = nullptr);

}  // namespace rproj
