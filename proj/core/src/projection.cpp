#include "rproj/projection.hpp"

#include <cmath>
#include <stdexcept>

#include "rproj/rng.hpp"

namespace rproj {
namespace {

constexpr std::uint64_t kMatrixTag = 0x6d61'7472'6978ULL;  // entry stream

std::uint64_t pair_key(std::uint64_t seed, int row, int col_base) {
  std::uint64_t k = rng::combine(seed, kMatrixTag);
  k = rng::combine(k, static_cast<std::uint64_t>(row) + 1);
  return rng::combine(k, static_cast<std::uint64_t>(col_base) + 1);
}

std::uint64_t entry_key(std::uint64_t seed, int row, int col) {
  std::uint64_t k = rng::combine(seed, kMatrixTag ^ 0x5350ULL);  // sparse stream
  k = rng::combine(k, static_cast<std::uint64_t>(row) + 1);
  return rng::combine(k, static_cast<std::uint64_t>(col) + 1);
}

}  // namespace

double gaussian_matrix_entry(std::uint64_t seed, int row, int col) {
  const int base = col & ~1;
  const rng::NormalPair p = rng::normal_pair(pair_key(seed, row, base));
  return (col & 1) ? p.z1 : p.z0;
}

ProjectionMatrix ProjectionMatrix::generate(int ambient_dim, int target_dim, Recipe recipe,
                                            std::uint64_t seed) {
  if (ambient_dim < 1 || target_dim < 1)
    throw std::invalid_argument("ProjectionMatrix::generate: dimensions must be positive");

  ProjectionMatrix r;
  r.recipe_ = recipe;
  r.seed_ = seed;
  r.entries_.resize(target_dim, ambient_dim);

  if (recipe == Recipe::dense_gaussian) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(target_dim));
    for (int i = 0; i < target_dim; ++i) {
      int j = 0;
      for (; j + 1 < ambient_dim; j += 2) {
        const rng::NormalPair p = rng::normal_pair(pair_key(seed, i, j));
        r.entries_(i, j) = scale * p.z0;
        r.entries_(i, j + 1) = scale * p.z1;
      }
      if (j < ambient_dim) r.entries_(i, j) = scale * rng::normal_pair(pair_key(seed, i, j)).z0;
    }
  } else {
    const double mag = std::sqrt(3.0 / static_cast<double>(target_dim));
    for (int i = 0; i < target_dim; ++i) {
      for (int j = 0; j < ambient_dim; ++j) {
        const double u = rng::uniform01(entry_key(seed, i, j));
        r.entries_(i, j) = u < 1.0 / 6.0 ? mag : (u >= 5.0 / 6.0 ? -mag : 0.0);
      }
    }
  }
  return r;
}

ProjectionMatrix ProjectionMatrix::from_entries(Eigen::MatrixXd entries) {
  if (entries.rows() < 1 || entries.cols() < 1)
    throw std::invalid_argument("ProjectionMatrix::from_entries: empty matrix");
  ProjectionMatrix r;
  r.entries_ = std::move(entries);
  return r;
}

Eigen::VectorXd ProjectionMatrix::project(const Eigen::VectorXd& x) const {
  if (x.size() != entries_.cols())
    throw std::invalid_argument("ProjectionMatrix::project: expected length " +
                                std::to_string(entries_.cols()) + ", got " +
                                std::to_string(x.size()));
  return entries_ * x;
}

LabeledDataset project_dataset(const ProjectionMatrix& r, const LabeledDataset& data) {
  if (data.ambient_dim() != r.cols())
    throw std::invalid_argument("project_dataset: dataset dimension " +
                                std::to_string(data.ambient_dim()) + " does not match matrix " +
                                std::to_string(r.cols()));
  Eigen::MatrixXd projected = data.vectors() * r.entries().transpose();  // N x m
  LabeledDataset out(std::move(projected), data.labels(), data.provenance());
  if (data.has_bases()) {
    std::vector<SubspaceBasis> mapped;
    mapped.reserve(data.bases().size());
    bool ok = true;
    for (const auto& b : data.bases()) {
      if (r.rows() < b.dim()) {
        ok = false;  // target space cannot carry a basis of this dimension
        break;
      }
      mapped.emplace_back(r.entries() * b.columns());
    }
    if (ok) out.attach_bases(std::move(mapped));
  }
  return out;
}

CancelableTemplate issue_template(const Eigen::VectorXd& x, const std::string& subject,
                                  std::uint64_t seed, int target_dim) {
  if (target_dim < 1) throw std::invalid_argument("issue_template: target dimension must be positive");
  if (x.size() < 1 || x.norm() == 0.0)
    throw std::invalid_argument("issue_template: zero vector has no cosine match");
  const auto r = ProjectionMatrix::generate(static_cast<int>(x.size()), target_dim,
                                            Recipe::dense_gaussian, seed);
  return {r.project(x), seed, subject};
}

CancelableTemplate reissue_template(const Eigen::VectorXd& x, const std::string& subject,
                                    std::uint64_t new_seed, int target_dim) {
  return issue_template(x, subject, new_seed, target_dim);
}

double match_templates(const CancelableTemplate& a, const CancelableTemplate& b) {
  if (a.projected.size() != b.projected.size())
    throw std::invalid_argument("match_templates: templates have different dimensions");
  const double na = a.projected.norm(), nb = b.projected.norm();
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("match_templates: zero template");
  const double c = a.projected.dot(b.projected) / (na * nb);
  return c < -1.0 ? -1.0 : (c > 1.0 ? 1.0 : c);
}

}  // namespace rproj
