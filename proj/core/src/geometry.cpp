#include "rproj/geometry.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rproj/dataset.hpp"

namespace rproj {
namespace {

double rank_cutoff(Eigen::Index rows, Eigen::Index cols, double sigma_max) {
  return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() *
         sigma_max;
}

double clamp_unit(double v) { return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace

int numerical_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double cutoff = rank_cutoff(m.rows(), m.cols(), sv(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

SubspaceBasis::SubspaceBasis(Eigen::MatrixXd columns) : columns_(std::move(columns)) {
  if (columns_.rows() < 1 || columns_.cols() < 1)
    throw std::invalid_argument("SubspaceBasis: empty matrix");
  if (columns_.cols() > columns_.rows())
    throw std::invalid_argument("SubspaceBasis: more columns than ambient dimensions");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(columns_, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = rank_cutoff(columns_.rows(), columns_.cols(), sv(0));
  if (sv(sv.size() - 1) <= cutoff)
    throw std::invalid_argument("SubspaceBasis: columns are rank deficient");
  orthonormal_ = svd.matrixU();
}

double cosine(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) throw std::invalid_argument("cosine: length mismatch");
  const double nx = x.norm(), ny = y.norm();
  if (nx == 0.0 || ny == 0.0) throw std::invalid_argument("cosine: zero vector");
  return clamp_unit(x.dot(y) / (nx * ny));
}

PrincipalPair subspace_margin(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw std::invalid_argument("subspace_margin: ambient dimensions differ");
  const Eigen::MatrixXd m = a.orthonormal().transpose() * b.orthonormal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  PrincipalPair out;
  out.margin = clamp_unit(svd.singularValues()(0));
  out.angle = std::acos(out.margin);
  out.u = a.orthonormal() * svd.matrixU().col(0);
  out.v = b.orthonormal() * svd.matrixV().col(0);
  return out;
}

double dataset_margin(const LabeledDataset& data, int class_id) {
  const auto own = data.class_indices(class_id);
  if (own.empty()) throw std::invalid_argument("dataset_margin: class is empty");
  if (static_cast<int>(own.size()) == data.size())
    throw std::invalid_argument("dataset_margin: no other class present");

  // Normalize once; margin is the max cross-class entry of the Gram matrix.
  Eigen::MatrixXd mine(own.size(), data.ambient_dim());
  for (std::size_t k = 0; k < own.size(); ++k) {
    Eigen::VectorXd v = data.sample(own[k]);
    const double n = v.norm();
    if (n == 0.0) throw std::invalid_argument("dataset_margin: zero vector in dataset");
    mine.row(static_cast<Eigen::Index>(k)) = v.transpose() / n;
  }
  Eigen::MatrixXd theirs(data.size() - static_cast<int>(own.size()), data.ambient_dim());
  Eigen::Index r = 0;
  for (int i = 0; i < data.size(); ++i) {
    if (data.label(i) == class_id) continue;
    Eigen::VectorXd v = data.sample(i);
    const double n = v.norm();
    if (n == 0.0) throw std::invalid_argument("dataset_margin: zero vector in dataset");
    theirs.row(r++) = v.transpose() / n;
  }
  return clamp_unit((mine * theirs.transpose()).maxCoeff());
}

bool check_independence(std::span<const SubspaceBasis> bases) {
  if (bases.empty()) return true;
  const int n = bases.front().ambient_dim();
  Eigen::Index total = 0;
  for (const auto& b : bases) {
    if (b.ambient_dim() != n)
      throw std::invalid_argument("check_independence: ambient dimensions differ");
    total += b.dim();
  }
  if (total > n) return false;
  Eigen::MatrixXd stacked(n, total);
  Eigen::Index col = 0;
  for (const auto& b : bases) {
    stacked.middleCols(col, b.dim()) = b.orthonormal();
    col += b.dim();
  }
  return numerical_rank(stacked) == static_cast<int>(total);
}

const PrincipalPair& MarginReport::pair(int i, int j) const {
  if (i == j) throw std::invalid_argument("MarginReport::pair: i == j has no principal pair");
  if (i > j) std::swap(i, j);
  const int k = num_classes();
  // index of (i, j), i < j, in row-major upper-triangle order
  const int idx = i * k - i * (i + 1) / 2 + (j - i - 1);
  return pairs.at(static_cast<std::size_t>(idx));
}

MarginReport margin_report(std::span<const SubspaceBasis> bases) {
  MarginReport report;
  const int k = static_cast<int>(bases.size());
  report.pairwise = Eigen::MatrixXd::Identity(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      PrincipalPair p = subspace_margin(bases[static_cast<std::size_t>(i)],
                                        bases[static_cast<std::size_t>(j)]);
      report.pairwise(i, j) = report.pairwise(j, i) = p.margin;
      report.pairs.push_back(std::move(p));
    }
  return report;
}

MarginReport margin_report(const LabeledDataset& data) {
  MarginReport report;
  if (data.has_bases()) report = margin_report(std::span(data.bases()));
  const int k = data.num_classes();
  report.dataset_margins.resize(static_cast<std::size_t>(k), 0.0);
  report.degenerate.assign(static_cast<std::size_t>(k), false);
  for (int c = 1; c <= k; ++c) {
    const double g = dataset_margin(data, c);
    report.dataset_margins[static_cast<std::size_t>(c - 1)] = g;
    report.degenerate[static_cast<std::size_t>(c - 1)] = g >= 1.0 - 1e-12;
  }
  return report;
}

}  // namespace rproj
