#include "rproj/pca.hpp"

#include <Eigen/SVD>
#include <limits>
#include <stdexcept>

namespace rproj {

PcaModel pca_fit(const Eigen::MatrixXd& rows, int k) {
  const Eigen::Index n_samples = rows.rows();
  const Eigen::Index dim = rows.cols();
  if (n_samples < 1) throw std::invalid_argument("pca_fit: no samples");
  if (k < 1 || k > std::min(n_samples, dim))
    throw std::invalid_argument("pca_fit: k must lie in [1, min(n, N)]");

  PcaModel model;
  model.mean = rows.colwise().mean().transpose();
  Eigen::MatrixXd centered = rows.rowwise() - model.mean.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = static_cast<double>(std::max(n_samples, dim)) *
                        std::numeric_limits<double>::epsilon() * (sv.size() ? sv(0) : 0.0);

  model.components = svd.matrixV().leftCols(k);
  model.explained_variance = Eigen::VectorXd::Zero(k);
  for (int i = 0; i < k; ++i) {
    if (sv(i) > cutoff && n_samples > 1)
      model.explained_variance(i) = sv(i) * sv(i) / static_cast<double>(n_samples - 1);
  }
  // Deterministic sign: largest-magnitude entry of each component positive.
  for (int i = 0; i < k; ++i) {
    Eigen::Index at = 0;
    model.components.col(i).cwiseAbs().maxCoeff(&at);
    if (model.components(at, i) < 0.0) model.components.col(i) = -model.components.col(i);
  }
  return model;
}

PcaModel pca_fit(const LabeledDataset& data, int k) { return pca_fit(data.vectors(), k); }

Eigen::VectorXd pca_project(const PcaModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.mean.size())
    throw std::invalid_argument("pca_project: expected length " +
                                std::to_string(model.mean.size()) + ", got " +
                                std::to_string(x.size()));
  return model.components.transpose() * (x - model.mean);
}

LabeledDataset pca_project(const PcaModel& model, const LabeledDataset& data) {
  if (data.ambient_dim() != model.mean.size())
    throw std::invalid_argument("pca_project: dataset dimension mismatch");
  Eigen::MatrixXd projected =
      (data.vectors().rowwise() - model.mean.transpose()) * model.components;
  return LabeledDataset(std::move(projected), data.labels(), data.provenance());
}

Eigen::VectorXd pca_reconstruct(const PcaModel& model, const Eigen::VectorXd& z) {
  if (z.size() != model.components.cols())
    throw std::invalid_argument("pca_reconstruct: expected length " +
                                std::to_string(model.components.cols()) + ", got " +
                                std::to_string(z.size()));
  return model.mean + model.components * z;
}

}  // namespace rproj
