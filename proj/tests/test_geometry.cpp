#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rproj/dataset.hpp"
#include "rproj/geometry.hpp"
#include "rproj/rng.hpp"

using namespace rproj;

namespace {

Eigen::VectorXd unit(int n, int axis) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v(axis) = 1.0;
  return v;
}

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
  rng::Stream s(seed);
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = s.next_normal();
  return m;
}

}  // namespace

TEST_CASE("cosine basics") {
  const Eigen::VectorXd e1 = unit(3, 0), e2 = unit(3, 1);
  CHECK(cosine(e1, e1) == doctest::Approx(1.0));
  CHECK(cosine(e1, e2) == doctest::Approx(0.0));
  CHECK(cosine(e1, -e1) == doctest::Approx(-1.0));
  CHECK(cosine(5.0 * e1, 0.25 * e1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(cosine(e1, Eigen::VectorXd::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(cosine(e1, unit(4, 0)), std::invalid_argument);
}

TEST_CASE("subspace basis rejects rank-deficient columns") {
  Eigen::MatrixXd cols(3, 2);
  cols.col(0) = unit(3, 0);
  cols.col(1) = 2.0 * unit(3, 0);
  CHECK_THROWS_AS(SubspaceBasis{cols}, std::invalid_argument);
  CHECK_THROWS_AS(SubspaceBasis{random_matrix(2, 3, 1)}, std::invalid_argument);
}

TEST_CASE("subspace margin on axis-aligned cases") {
  const SubspaceBasis a(unit(3, 0)), b(unit(3, 1));
  const auto ortho = subspace_margin(a, b);
  CHECK(ortho.margin == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ortho.angle == doctest::Approx(std::numbers::pi / 2));

  const auto same = subspace_margin(a, a);
  CHECK(same.margin == doctest::Approx(1.0));

  Eigen::VectorXd diag(3);
  diag << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0;
  const auto mid = subspace_margin(a, SubspaceBasis(diag));
  CHECK(mid.margin == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(mid.u.dot(mid.v)) == doctest::Approx(mid.margin));
}

TEST_CASE("subspace margin is symmetric and basis-invariant") {
  const SubspaceBasis a(random_matrix(20, 3, 2));
  const SubspaceBasis b(random_matrix(20, 4, 3));
  const auto ab = subspace_margin(a, b);
  const auto ba = subspace_margin(b, a);
  CHECK(ab.margin == doctest::Approx(ba.margin).epsilon(1e-10));

  // Reparameterize the columns by a random invertible matrix: same span.
  rng::Stream s(4);
  Eigen::MatrixXd mix(3, 3);
  do {
    mix = random_matrix(3, 3, s.next_u64());
  } while (std::abs(mix.determinant()) < 1e-3);
  const SubspaceBasis a2(a.columns() * mix);
  CHECK(subspace_margin(a2, b).margin == doctest::Approx(ab.margin).epsilon(1e-8));
}

TEST_CASE("principal pair attains the margin") {
  const SubspaceBasis a(random_matrix(15, 2, 7));
  const SubspaceBasis b(random_matrix(15, 3, 8));
  const auto p = subspace_margin(a, b);
  CHECK(p.u.norm() == doctest::Approx(1.0));
  CHECK(p.v.norm() == doctest::Approx(1.0));
  CHECK(p.u.dot(p.v) == doctest::Approx(p.margin).epsilon(1e-10));
  // no unit pair from the two spans does better (spot check)
  rng::Stream s(9);
  for (int rep = 0; rep < 200; ++rep) {
    Eigen::VectorXd wa(2), wb(3);
    for (int i = 0; i < 2; ++i) wa(i) = s.next_normal();
    for (int i = 0; i < 3; ++i) wb(i) = s.next_normal();
    const Eigen::VectorXd u = (a.orthonormal() * wa).normalized();
    const Eigen::VectorXd v = (b.orthonormal() * wb).normalized();
    CHECK(std::abs(u.dot(v)) <= p.margin + 1e-10);
  }
}

TEST_CASE("dataset margin on two singleton classes") {
  Eigen::MatrixXd rows(2, 2);
  rows << 1.0, 0.0, 0.0, 1.0;
  const LabeledDataset ortho(rows, {1, 2});
  CHECK(dataset_margin(ortho, 1) == doctest::Approx(0.0));

  Eigen::MatrixXd rows2(2, 2);
  rows2 << 1.0, 0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const LabeledDataset tilted(rows2, {1, 2});
  CHECK(dataset_margin(tilted, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("dataset margin equals the brute-force double loop") {
  const auto data = generate_union(40, 3, {3, 3, 3}, {8, 9, 10}, 12);
  for (int c = 1; c <= 3; ++c) {
    double brute = -2.0;
    for (int i = 0; i < data.size(); ++i) {
      if (data.label(i) != c) continue;
      for (int j = 0; j < data.size(); ++j) {
        if (data.label(j) == c) continue;
        brute = std::max(brute, cosine(data.sample(i), data.sample(j)));
      }
    }
    CHECK(dataset_margin(data, c) == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("dataset margin is invariant to positive rescaling") {
  auto data = generate_union(25, 2, {2, 2}, {6, 6}, 3);
  const double before = dataset_margin(data, 1);
  Eigen::MatrixXd scaled = data.vectors();
  rng::Stream s(44);
  for (int i = 0; i < scaled.rows(); ++i) scaled.row(i) *= 0.5 + 4.0 * s.next_uniform();
  const LabeledDataset rescaled(scaled, data.labels());
  CHECK(dataset_margin(rescaled, 1) == doctest::Approx(before).epsilon(1e-10));
}

TEST_CASE("dataset margin error cases") {
  Eigen::MatrixXd rows(2, 2);
  rows << 1.0, 0.0, 0.0, 1.0;
  const LabeledDataset single(rows, {1, 1});
  CHECK_THROWS_AS(dataset_margin(single, 1), std::invalid_argument);  // no other class
  CHECK_THROWS_AS(dataset_margin(single, 2), std::invalid_argument);  // empty class
}

TEST_CASE("sampled dataset margin is bounded by the subspace margins") {
  const auto data = generate_union(30, 3, {2, 3, 2}, {5, 6, 5}, 21);
  REQUIRE(data.has_bases());
  for (int c = 1; c <= 3; ++c) {
    double pairwise = 0.0;
    for (int other = 1; other <= 3; ++other) {
      if (other == c) continue;
      pairwise = std::max(pairwise, subspace_margin(data.bases()[size_t(c - 1)],
                                                    data.bases()[size_t(other - 1)])
                                        .margin);
    }
    CHECK(dataset_margin(data, c) <= pairwise + 1e-8);
  }
}

TEST_CASE("independence of axis spans and a dependent family") {
  const SubspaceBasis s1(unit(3, 0)), s2(unit(3, 1));
  std::vector<SubspaceBasis> indep{s1, s2};
  CHECK(check_independence(indep));

  Eigen::MatrixXd dep(3, 2);
  dep.col(0) = unit(3, 0) + unit(3, 1);
  dep.col(1) = unit(3, 1);
  std::vector<SubspaceBasis> dependent{s1, SubspaceBasis(dep)};
  CHECK_FALSE(check_independence(dependent));

  // identical subspaces: pairwise margin 1 forces dependence
  std::vector<SubspaceBasis> twice{s1, s1};
  CHECK(subspace_margin(twice[0], twice[1]).margin == doctest::Approx(1.0));
  CHECK_FALSE(check_independence(twice));

  // total dimension beyond the ambient space cannot be independent
  std::vector<SubspaceBasis> crowded{SubspaceBasis(random_matrix(5, 2, 31)),
                                     SubspaceBasis(random_matrix(5, 2, 32)),
                                     SubspaceBasis(random_matrix(5, 2, 33))};
  CHECK_FALSE(check_independence(crowded));
}

TEST_CASE("generator bases are independent whenever dimensions allow") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto data = generate_union(24, 3, {4, 4, 4}, {4, 4, 4}, seed);
    CHECK(check_independence(data.bases()));
  }
}

TEST_CASE("margin report aggregates pairwise and per-class values") {
  const auto data = generate_union(30, 3, {2, 2, 2}, {5, 5, 5}, 2);
  const auto report = margin_report(data);
  REQUIRE(report.num_classes() == 3);
  CHECK(report.pairwise(0, 0) == doctest::Approx(1.0));
  CHECK(report.pairwise(0, 1) == doctest::Approx(report.pairwise(1, 0)));
  CHECK(report.pair(0, 1).margin == doctest::Approx(report.pairwise(0, 1)));
  CHECK(report.pair(2, 1).margin == doctest::Approx(report.pairwise(1, 2)));
  REQUIRE(report.dataset_margins.size() == 3);
  for (int c = 1; c <= 3; ++c) {
    CHECK(report.dataset_margins[size_t(c - 1)] == doctest::Approx(dataset_margin(data, c)));
    CHECK_FALSE(report.degenerate[size_t(c - 1)]);
  }
}

TEST_CASE("duplicated cross-class direction flags the report instead of throwing") {
  Eigen::MatrixXd rows(2, 3);
  rows << 1.0, 2.0, 0.0, 2.0, 4.0, 0.0;  // same direction, different classes
  const LabeledDataset data(rows, {1, 2});
  const auto report = margin_report(data);
  CHECK(report.dataset_margins[0] == doctest::Approx(1.0));
  CHECK(report.degenerate[0]);
}
