#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "rproj/dataset.hpp"
#include "rproj/pca.hpp"
#include "rproj/rng.hpp"

using namespace rproj;

namespace {

Eigen::MatrixXd gaussian_cloud(int n_samples, const Eigen::VectorXd& scales, std::uint64_t seed) {
  rng::Stream s(seed);
  Eigen::MatrixXd rows(n_samples, scales.size());
  for (int i = 0; i < n_samples; ++i)
    for (int j = 0; j < scales.size(); ++j) rows(i, j) = scales(j) * s.next_normal();
  return rows;
}

}  // namespace

TEST_CASE("line through the origin recovers the axis and its variance") {
  const int n = 40;
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(n, 5);
  rng::Stream s(1);
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = 3.0 * s.next_normal();
    rows(i, 0) = t;
    sum += t;
    sum2 += t * t;
  }
  const auto model = pca_fit(rows, 1);
  CHECK(std::abs(model.components(0, 0)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(model.components(0, 0) > 0.0);  // sign convention
  const double sample_var = (sum2 - sum * sum / n) / (n - 1);
  CHECK(model.explained_variance(0) == doctest::Approx(sample_var).epsilon(1e-10));
}

TEST_CASE("full-rank fit reconstructs the data at k = n") {
  const Eigen::MatrixXd rows = gaussian_cloud(50, Eigen::Vector4d(3.0, 2.0, 1.0, 0.5), 2);
  const auto model = pca_fit(rows, 4);
  for (int i = 0; i < rows.rows(); ++i) {
    const Eigen::VectorXd x = rows.row(i).transpose();
    const Eigen::VectorXd back = pca_reconstruct(model, pca_project(model, x));
    CHECK((back - x).norm() <= 1e-6 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("component order matches a covariance eigendecomposition") {
  Eigen::VectorXd scales(3);
  scales << 5.0, 2.0, 0.3;
  const Eigen::MatrixXd rows = gaussian_cloud(400, scales, 3);
  const auto model = pca_fit(rows, 3);

  // independent oracle: dense eigensolver on the sample covariance
  const Eigen::MatrixXd centered = rows.rowwise() - rows.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / double(rows.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  for (int k = 0; k < 3; ++k) {
    const double oracle = eig.eigenvalues()(2 - k);  // descending
    CHECK(model.explained_variance(k) == doctest::Approx(oracle).epsilon(1e-8));
    const Eigen::VectorXd dir = eig.eigenvectors().col(2 - k);
    CHECK(std::abs(model.components.col(k).dot(dir)) == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK(model.explained_variance(0) >= model.explained_variance(1));
  CHECK(model.explained_variance(1) >= model.explained_variance(2));
}

TEST_CASE("components are orthonormal and the fit is sign-deterministic") {
  const Eigen::MatrixXd rows = gaussian_cloud(60, Eigen::Vector4d(4.0, 3.0, 2.0, 1.0), 4);
  const auto a = pca_fit(rows, 4);
  const auto b = pca_fit(rows, 4);
  CHECK(a.components == b.components);
  const Eigen::MatrixXd gram = a.components.transpose() * a.components;
  CHECK((gram - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-8);
  for (int k = 0; k < 4; ++k) {
    Eigen::Index at = 0;
    a.components.col(k).cwiseAbs().maxCoeff(&at);
    CHECK(a.components(at, k) > 0.0);
  }
}

TEST_CASE("rank-deficient data zero-pads the variances") {
  // 30 samples on a 2-plane inside R^6
  rng::Stream s(5);
  Eigen::MatrixXd plane(6, 2);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 6; ++i) plane(i, j) = s.next_normal();
  Eigen::MatrixXd rows(30, 6);
  for (int i = 0; i < 30; ++i)
    rows.row(i) = (plane * Eigen::Vector2d(s.next_normal(), s.next_normal())).transpose();
  const auto model = pca_fit(rows, 5);
  CHECK(model.explained_variance(0) > 0.0);
  CHECK(model.explained_variance(1) > 0.0);
  for (int k = 2; k < 5; ++k) CHECK(model.explained_variance(k) == 0.0);
}

TEST_CASE("projection basics") {
  const Eigen::MatrixXd rows = gaussian_cloud(25, Eigen::Vector3d(2.0, 1.0, 0.5), 6);
  const auto model = pca_fit(rows, 2);
  CHECK(pca_project(model, model.mean).isZero(1e-12));
  // a component direction maps to its unit coordinate
  const Eigen::VectorXd along = model.mean + model.components.col(1);
  const Eigen::VectorXd z = pca_project(model, along);
  CHECK(z(0) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(z(1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(pca_project(model, Eigen::VectorXd::Zero(4)), std::invalid_argument);
}

TEST_CASE("projection is an isometry on the retained span") {
  const Eigen::MatrixXd rows = gaussian_cloud(80, Eigen::Vector4d(3.0, 2.0, 1.0, 0.4), 7);
  const auto model = pca_fit(rows, 2);
  rng::Stream s(8);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::Vector2d a(s.next_normal(), s.next_normal());
    const Eigen::Vector2d b(s.next_normal(), s.next_normal());
    const Eigen::VectorXd xa = model.mean + model.components * a;
    const Eigen::VectorXd xb = model.mean + model.components * b;
    const double before = (xa - xb).norm();
    const double after = (pca_project(model, xa) - pca_project(model, xb)).norm();
    CHECK(after == doctest::Approx(before).epsilon(1e-8));
  }
}

TEST_CASE("fit validates k") {
  const Eigen::MatrixXd rows = gaussian_cloud(10, Eigen::Vector3d(1.0, 1.0, 1.0), 9);
  CHECK_THROWS_AS(pca_fit(rows, 0), std::invalid_argument);
  CHECK_THROWS_AS(pca_fit(rows, 4), std::invalid_argument);  // k > n
  const Eigen::MatrixXd few = gaussian_cloud(2, Eigen::Vector3d(1.0, 1.0, 1.0), 9);
  CHECK_THROWS_AS(pca_fit(few, 3), std::invalid_argument);   // k > N
}

TEST_CASE("dataset overload keeps labels through projection") {
  const auto data = generate_union(12, 2, {2, 2}, {8, 8}, 10);
  const auto model = pca_fit(data, 4);
  const auto projected = pca_project(model, data);
  CHECK(projected.ambient_dim() == 4);
  CHECK(projected.labels() == data.labels());
}
