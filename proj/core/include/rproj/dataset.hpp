#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rproj/geometry.hpp"

namespace rproj {

/// Thrown by the loaders; carries the offending file and 1-based line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// N samples in R^n (rows) with class labels in {1..K}.
class LabeledDataset {
 public:
  LabeledDataset(Eigen::MatrixXd vectors, std::vector<int> labels, std::string provenance = "");

  /// Empty dataset with a known ambient dimension.
  static LabeledDataset empty(int ambient_dim, std::string provenance = "");

  int size() const { return static_cast<int>(vectors_.rows()); }
  int ambient_dim() const { return ambient_dim_; }
  int num_classes() const { return num_classes_; }

  const Eigen::MatrixXd& vectors() const { return vectors_; }
  const std::vector<int>& labels() const { return labels_; }
  Eigen::VectorXd sample(int i) const { return vectors_.row(i).transpose(); }
  int label(int i) const { return labels_[static_cast<std::size_t>(i)]; }

  std::vector<int> class_indices(int class_id) const;
  int class_count(int class_id) const;

  const std::string& provenance() const { return provenance_; }

  /// Ground-truth subspace bases, present on generator output.
  const std::vector<SubspaceBasis>& bases() const { return bases_; }
  bool has_bases() const { return !bases_.empty(); }
  void attach_bases(std::vector<SubspaceBasis> bases) { bases_ = std::move(bases); }

  const std::optional<MarginReport>& margins() const { return margins_; }
  void attach_margins(MarginReport report) { margins_ = std::move(report); }

 private:
  LabeledDataset() = default;
  Eigen::MatrixXd vectors_;
  std::vector<int> labels_;
  int ambient_dim_ = 0;
  int num_classes_ = 0;
  std::string provenance_;
  std::vector<SubspaceBasis> bases_;
  std::optional<MarginReport> margins_;
};

/// Samples a K-class dataset from a union of independent linear subspaces:
/// per class an orthonormalized Gaussian n x d_i basis and counts[i] samples
/// B_i * w with w ~ N(0, coeff_scale^2 I). Ground-truth bases and a margin
/// report are attached to the result.
LabeledDataset generate_union(int ambient_dim, int num_classes, const std::vector<int>& dims,
                              const std::vector<int>& counts, std::uint64_t seed,
                              double coeff_scale = 1.0);

enum class MatrixFormat { csv, raw_f64 };

/// csv: one sample per line, comma separated, final column integer label,
/// optional header line. raw_f64: little-endian, three u64 (N, n, K), then
/// N*n doubles row-major, then N i64 labels.
LabeledDataset load_matrix(const std::filesystem::path& path, MatrixFormat format);
void save_matrix(const LabeledDataset& data, const std::filesystem::path& path, MatrixFormat format);

/// Stratified split; per class round(train_fraction * N_i) samples go to
/// train (clamped so both sides stay non-empty). Deterministic in seed.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& data, double train_fraction,
                                                std::uint64_t seed);

}  // namespace rproj
