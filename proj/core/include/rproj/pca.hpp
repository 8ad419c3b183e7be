#pragma once

#include <Eigen/Dense>

#include "rproj/dataset.hpp"

namespace rproj {

struct PcaModel {
  Eigen::VectorXd mean;              ///< length n
  Eigen::MatrixXd components;        ///< n x k, orthonormal columns
  Eigen::VectorXd explained_variance;  ///< length k, nonincreasing, zero past the data rank
};

/// Top-k principal directions of the mean-centered samples via SVD. Sign
/// convention: the largest-magnitude entry of each component is positive.
PcaModel pca_fit(const LabeledDataset& data, int k);
PcaModel pca_fit(const Eigen::MatrixXd& rows, int k);

Eigen::VectorXd pca_project(const PcaModel& model, const Eigen::VectorXd& x);
LabeledDataset pca_project(const PcaModel& model, const LabeledDataset& data);

/// mean + components * z.
Eigen::VectorXd pca_reconstruct(const PcaModel& model, const Eigen::VectorXd& z);

}  // namespace rproj
