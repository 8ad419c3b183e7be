#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "rproj/bounds.hpp"
#include "rproj/experiments.hpp"
#include "rproj/geometry.hpp"
#include "rproj/rng.hpp"

using namespace rproj;

TEST_CASE("make_pair_with_cosine hits the target exactly") {
  for (double gamma : {0.019021, 0.37161, 0.67809, 0.92349, -0.036831, -0.45916, -0.65797,
                       -0.92704, 1.0, -1.0}) {
    const auto [x, y] = make_pair_with_cosine(300, gamma, 2.5, 7.0, 99);
    CHECK(x.norm() == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(y.norm() == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(std::abs(cosine(x, y) - gamma) <= 1e-10);
  }
  CHECK_THROWS_AS(make_pair_with_cosine(300, 1.5, 1.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_pair_with_cosine(300, 0.5, 0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_pair_with_cosine(1, 0.5, 1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("rejection curve validates its configuration") {
  RejectionConfig config;
  config.gamma_targets = {0.0};
  try {
    rejection_curve(config);
    FAIL("expected invalid_argument for a zero cosine target");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("cosine target of exactly 0") != std::string::npos);
  }
  config.gamma_targets = {1.2};
  CHECK_THROWS_AS(rejection_curve(config), std::invalid_argument);
  config.gamma_targets = {0.5};
  config.m_grid = {};
  CHECK_THROWS_AS(rejection_curve(config), std::invalid_argument);
  config.m_grid = {10};
  config.trials = 0;
  CHECK_THROWS_AS(rejection_curve(config), std::invalid_argument);
}

namespace {

RejectionConfig small_config() {
  RejectionConfig config;
  config.ambient_dim = 120;
  config.m_grid = {30, 60, 120};
  config.trials = 250;
  config.gamma_targets = {0.92349, 0.019021};
  config.master_seed = 7;
  return config;
}

double p_hat_at(const ExperimentReport& report, int m, double gamma) {
  for (const auto& row : report.rows) {
    if (std::get<std::int64_t>(row[0]) == m &&
        std::get<double>(row[2]) == doctest::Approx(gamma))
      return std::get<double>(row[3]);
  }
  FAIL("row not found");
  return -1.0;
}

}  // namespace

TEST_CASE("rejection curve rows are sorted and p_hat behaves") {
  RejectionConfig config = small_config();
  config.eps = 0.1;
  const auto report = rejection_curve(config);
  REQUIRE(report.rows.size() == 6);
  // sorted by (gamma, m)
  double prev_gamma = -2.0;
  int prev_m = 0;
  for (const auto& row : report.rows) {
    const double g = std::get<double>(row[2]);
    const int m = int(std::get<std::int64_t>(row[0]));
    if (g == prev_gamma) {
      CHECK(m > prev_m);
    } else {
      CHECK(g > prev_gamma);
    }
    prev_gamma = g;
    prev_m = m;
    const double p = std::get<double>(row[3]);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }

  // near-zero cosine rejects nearly always; strong cosine rejects rarely at m=120
  CHECK(p_hat_at(report, 120, 0.019021) >= 0.9);
  CHECK(p_hat_at(report, 120, 0.92349) <= 0.2);
  // rejection falls as |gamma| grows, at every grid point
  for (int m : config.m_grid)
    CHECK(p_hat_at(report, m, 0.92349) <= p_hat_at(report, m, 0.019021) + 1e-12);
}

TEST_CASE("p_hat is nonincreasing in eps") {
  RejectionConfig narrow = small_config();
  narrow.eps = 0.1;
  RejectionConfig wide = small_config();
  wide.eps = 0.3;
  const auto a = rejection_curve(narrow);
  const auto b = rejection_curve(wide);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    CHECK(std::get<double>(b.rows[i][3]) <= std::get<double>(a.rows[i][3]) + 1e-12);
}

TEST_CASE("inner-product mode rejects nearly everywhere for weak cosines") {
  RejectionConfig config;
  config.ambient_dim = 120;
  config.m_grid = {30, 60, 120};
  config.trials = 250;
  config.eps = 0.3;
  config.gamma_targets = {0.019021};
  config.mode = RejectionMode::inner_product;
  config.master_seed = 11;
  const auto report = rejection_curve(config);
  for (const auto& row : report.rows) CHECK(std::get<double>(row[3]) >= 0.9);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  RejectionConfig config = small_config();
  config.trials = 100;
  config.threads = 1;
  const auto serial = rejection_curve(config);
  config.threads = 4;
  const auto parallel = rejection_curve(config);
  CHECK(to_csv(serial) == to_csv(parallel));
  CHECK(to_json(serial) == to_json(parallel));
}

TEST_CASE("acute and obtuse targets reject alike") {
  RejectionConfig config;
  config.ambient_dim = 100;
  config.m_grid = {40, 100};
  config.trials = 600;
  config.eps = 0.1;
  config.gamma_targets = {0.67809, -0.67809};
  config.master_seed = 3;
  const auto report = rejection_curve(config);
  for (int m : config.m_grid) {
    const double p_pos = p_hat_at(report, m, 0.67809);
    const double p_neg = p_hat_at(report, m, -0.67809);
    const double se = std::sqrt((p_pos * (1 - p_pos) + p_neg * (1 - p_neg)) / config.trials);
    CHECK(std::abs(p_pos - p_neg) <= 3.0 * se + 1e-9);
  }
}

TEST_CASE("src accuracy is perfect on clean synthetic data at full dimension") {
  const auto data = generate_union(40, 3, {3, 3, 3}, {12, 12, 12}, 5);
  const auto [train, test] = split(data, 0.5, 2);
  BasisPursuitOptions opts;
  opts.max_iter = 20000;
  const auto result = src_accuracy(train, test, opts, 2);
  CHECK(result.total == 18);
  CHECK(result.accuracy == doctest::Approx(100.0));
  CHECK(result.non_converged == 0);
}

TEST_CASE("structure benchmark emits one row per method and dimension") {
  const auto data = generate_union(60, 3, {3, 3, 3}, {12, 12, 12}, 8);
  BenchmarkConfig config;
  config.dims = {6, 12};
  config.split_fraction = 0.5;
  config.seed = 4;
  config.solver.max_iter = 20000;
  const auto report = structure_benchmark(data, config);
  REQUIRE(report.rows.size() == 4);
  for (const auto& row : report.rows) {
    const auto method = std::get<std::string>(row[0]);
    CHECK((method == "rp" || method == "pca"));
    CHECK(std::get<double>(row[2]) >= 0.0);          // time
    CHECK(std::get<double>(row[3]) >= 80.0);          // accuracy on clean data
  }
  CHECK_THROWS_AS(structure_benchmark(data, BenchmarkConfig{}), std::invalid_argument);
}

TEST_CASE("structure benchmark without timing is byte-reproducible") {
  const auto data = generate_union(40, 2, {3, 3}, {10, 10}, 9);
  BenchmarkConfig config;
  config.dims = {10};
  config.seed = 1;
  config.with_timing = false;
  config.solver.max_iter = 20000;
  config.threads = 1;
  const auto a = structure_benchmark(data, config);
  config.threads = 3;
  const auto b = structure_benchmark(data, config);
  CHECK(to_csv(a) == to_csv(b));
}

TEST_CASE("inversion attack recovers exactly when m = n") {
  const auto r = ProjectionMatrix::generate(24, 24, Recipe::dense_gaussian, 6);
  rng::Stream s(7);
  std::vector<Eigen::VectorXd> originals;
  std::vector<Eigen::VectorXd> templates;
  for (int i = 0; i < 4; ++i) {
    Eigen::VectorXd x(24);
    for (int j = 0; j < 24; ++j) x(j) = s.next_normal();
    originals.push_back(x);
    templates.push_back(r.project(x));
  }
  const auto report = inversion_attack(r, templates, &originals);
  REQUIRE(report.rows.size() == 4);
  for (const auto& row : report.rows) CHECK(std::get<double>(row[2]) <= 1e-6);
}

TEST_CASE("undersampled inversion error equals the energy outside the row space") {
  const auto r = ProjectionMatrix::generate(60, 20, Recipe::dense_gaussian, 16);
  rng::Stream s(17);
  Eigen::VectorXd x(60);
  for (int j = 0; j < 60; ++j) x(j) = s.next_normal();
  const auto report = inversion_attack(r, {r.project(x)}, nullptr);
  // pinv reconstruction is the projection onto the row space
  Eigen::BDCSVD<Eigen::MatrixXd> svd(r.entries(), Eigen::ComputeThinV);
  const Eigen::MatrixXd v = svd.matrixV();
  const Eigen::VectorXd in_row_space = v * (v.transpose() * x);
  const double expected_err = (x - in_row_space).norm() / x.norm();
  CHECK(expected_err > 0.1);  // generic x loses real energy

  std::vector<Eigen::VectorXd> originals{x};
  const auto with_truth = inversion_attack(r, {r.project(x)}, &originals);
  CHECK(std::get<double>(with_truth.rows[0][2]) == doctest::Approx(expected_err).epsilon(1e-9));
}

TEST_CASE("knowing the subspace makes the attack nearly exact") {
  // x confined to a d-dimensional subspace, attacked with m >= 4 d ln d rows
  const int n = 200, d = 6;
  const int m = bounds::recommended_dim_for_subspace(d);  // 44 for d = 6
  rng::Stream s(23);
  Eigen::MatrixXd span(n, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < n; ++i) span(i, j) = s.next_normal();
  const SubspaceBasis basis(span);

  const auto r = ProjectionMatrix::generate(n, m, Recipe::dense_gaussian, 31);
  std::vector<Eigen::VectorXd> originals;
  std::vector<Eigen::VectorXd> templates;
  for (int k = 0; k < 5; ++k) {
    Eigen::VectorXd w(d);
    for (int i = 0; i < d; ++i) w(i) = s.next_normal();
    const Eigen::VectorXd x = basis.orthonormal() * w;
    originals.push_back(x);
    templates.push_back(r.project(x));
  }
  const auto report = inversion_attack(r, templates, &originals, &basis);
  REQUIRE(report.columns.size() == 4);
  for (const auto& row : report.rows) {
    const double plain = std::get<double>(row[2]);
    const double constrained = std::get<double>(row[3]);
    CHECK(constrained <= 1e-8);       // m >= d and R*B well conditioned: exact recovery
    CHECK(constrained < 0.01 * plain);  // the unconstrained preimage loses most energy
  }
}
