#include "rproj/experiments.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "rproj/parallel.hpp"
#include "rproj/pca.hpp"
#include "rproj/rng.hpp"

namespace rproj {
namespace {

constexpr std::uint64_t kPairTag = 0x7061'6972ULL;
constexpr std::uint64_t kBenchRpTag = 0x6263'6872'70ULL;

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void finalize_hash(ExperimentReport* report) {
  std::string canon = report->name;
  for (const auto& [k, v] : report->metadata) canon += ";" + k + "=" + v;
  report->meta("config_hash", config_hash(canon));
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> make_pair_with_cosine(int ambient_dim, double gamma,
                                                                  double length_x, double length_y,
                                                                  std::uint64_t seed) {
  if (ambient_dim < 2) throw std::invalid_argument("make_pair_with_cosine: need dimension >= 2");
  if (gamma < -1.0 || gamma > 1.0)
    throw std::invalid_argument("make_pair_with_cosine: cosine must lie in [-1, 1]");
  if (!(length_x > 0.0) || !(length_y > 0.0))
    throw std::invalid_argument("make_pair_with_cosine: lengths must be positive");

  rng::Stream stream(rng::derive_seed(seed, kPairTag));
  Eigen::VectorXd x_dir(ambient_dim), ortho(ambient_dim);
  do {
    for (int i = 0; i < ambient_dim; ++i) x_dir(i) = stream.next_normal();
  } while (x_dir.norm() == 0.0);
  x_dir.normalize();
  double n = 0.0;
  do {
    for (int i = 0; i < ambient_dim; ++i) ortho(i) = stream.next_normal();
    ortho -= ortho.dot(x_dir) * x_dir;
    n = ortho.norm();
  } while (n < 1e-12);
  ortho /= n;

  const Eigen::VectorXd y_dir = gamma * x_dir + std::sqrt(std::max(0.0, 1.0 - gamma * gamma)) * ortho;
  return {length_x * x_dir, length_y * y_dir};
}

ExperimentReport rejection_curve(const RejectionConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("rejection_curve: trials must be positive");
  if (config.m_grid.empty()) throw std::invalid_argument("rejection_curve: empty m grid");
  for (int m : config.m_grid)
    if (m < 1) throw std::invalid_argument("rejection_curve: grid dimensions must be positive");
  if (config.gamma_targets.empty())
    throw std::invalid_argument("rejection_curve: no cosine targets");
  if (!(config.eps > 0.0 && config.eps < 1.0))
    throw std::invalid_argument("rejection_curve: eps must lie in (0, 1)");
  if (!(config.length_min > 0.0) || config.length_max < config.length_min)
    throw std::invalid_argument("rejection_curve: bad length range");
  for (double g : config.gamma_targets) {
    if (g < -1.0 || g > 1.0)
      throw std::invalid_argument("rejection_curve: cosine target outside [-1, 1]");
    if (g == 0.0)
      throw std::invalid_argument(
          "rejection_curve: the preservation ratio divides by <x,y>, so a cosine target of "
          "exactly 0 is undefined; use a small nonzero value");
  }

  ExperimentReport report;
  report.name = config.mode == RejectionMode::cosine ? "rejection.cosine" : "rejection.inner";
  report.columns = {"m", "eps", "gamma", "p_hat"};
  report.meta("n", static_cast<std::int64_t>(config.ambient_dim));
  report.meta("trials", static_cast<std::int64_t>(config.trials));
  report.meta("eps", config.eps);
  report.meta("master_seed", static_cast<std::int64_t>(config.master_seed));
  report.meta("recipe", config.recipe == Recipe::dense_gaussian ? "dense-gaussian"
                                                                : "sparse-achlioptas");
  {
    std::string grid;
    for (std::size_t i = 0; i < config.m_grid.size(); ++i)
      grid += (i ? "," : "") + std::to_string(config.m_grid[i]);
    report.meta("m_grid", grid);
    std::string targets;
    for (std::size_t i = 0; i < config.gamma_targets.size(); ++i)
      targets += (i ? "," : "") + format_double(config.gamma_targets[i]);
    report.meta("gamma_targets", targets);
  }

  // One random pair per target; lengths drawn from [length_min, length_max].
  struct Target {
    double gamma;
    std::size_t index;  // position in config order, used for seed derivation
    Eigen::VectorXd x, y;
  };
  std::vector<Target> targets;
  targets.reserve(config.gamma_targets.size());
  for (std::size_t gi = 0; gi < config.gamma_targets.size(); ++gi) {
    Target t;
    t.gamma = config.gamma_targets[gi];
    t.index = gi;
    rng::Stream lengths(rng::derive_seed(config.master_seed, kPairTag, gi));
    const double lx = lengths.next_uniform(config.length_min, config.length_max);
    const double ly = lengths.next_uniform(config.length_min, config.length_max);
    std::tie(t.x, t.y) = make_pair_with_cosine(config.ambient_dim, t.gamma, lx, ly,
                                               rng::derive_seed(config.master_seed, kPairTag, gi, 1));
    report.meta("lengths." + std::to_string(gi),
                format_double(lx) + "," + format_double(ly));
    targets.push_back(std::move(t));
  }
  finalize_hash(&report);

  std::stable_sort(targets.begin(), targets.end(),
                   [](const Target& a, const Target& b) { return a.gamma < b.gamma; });
  std::vector<int> grid = config.m_grid;
  std::sort(grid.begin(), grid.end());

  std::vector<std::uint8_t> inside(static_cast<std::size_t>(config.trials));
  for (const Target& target : targets) {
    const double xy = target.x.dot(target.y);
    const double denom_lengths = target.x.norm() * target.y.norm();
    for (int m : grid) {
      parallel_for(0, config.trials, config.threads, [&](std::int64_t trial) {
        const std::uint64_t seed = rng::derive_seed(
            config.master_seed, static_cast<std::uint64_t>(target.index),
            static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(trial));
        const auto r = ProjectionMatrix::generate(config.ambient_dim, m, config.recipe, seed);
        const Eigen::VectorXd rx = r.project(target.x);
        const Eigen::VectorXd ry = r.project(target.y);
        double ratio = 0.0;
        if (config.mode == RejectionMode::cosine) {
          const double denom = rx.norm() * ry.norm() * xy;
          ratio = denom == 0.0 ? std::numeric_limits<double>::infinity()
                               : rx.dot(ry) * denom_lengths / denom;
        } else {
          ratio = rx.dot(ry) / xy;
        }
        inside[static_cast<std::size_t>(trial)] =
            (ratio >= 1.0 - config.eps && ratio <= 1.0 + config.eps) ? 1 : 0;
      });
      std::int64_t kept = 0;
      for (std::uint8_t b : inside) kept += b;
      const double p_hat = 1.0 - static_cast<double>(kept) / static_cast<double>(config.trials);
      report.rows.push_back({static_cast<std::int64_t>(m), config.eps, target.gamma, p_hat});
    }
  }
  return report;
}

ClassifyResult src_accuracy(const LabeledDataset& train, const LabeledDataset& test,
                            const BasisPursuitOptions& opts, int threads) {
  if (train.size() < 1 || test.size() < 1)
    throw std::invalid_argument("src_accuracy: empty split");
  if (train.ambient_dim() != test.ambient_dim())
    throw std::invalid_argument("src_accuracy: train/test dimension mismatch");

  Dictionary dict(train.vectors().transpose(), train.labels());
  std::vector<std::uint8_t> correct(static_cast<std::size_t>(test.size()));
  std::vector<std::uint8_t> converged(static_cast<std::size_t>(test.size()));
  parallel_for(0, test.size(), threads, [&](std::int64_t i) {
    const Classification c = src_classify(dict, test.sample(static_cast<int>(i)), opts);
    correct[static_cast<std::size_t>(i)] = c.predicted == test.label(static_cast<int>(i)) ? 1 : 0;
    converged[static_cast<std::size_t>(i)] = c.code.status == SolverStatus::converged ? 1 : 0;
  });

  ClassifyResult out;
  out.total = test.size();
  for (std::uint8_t b : correct) out.correct += b;
  for (std::uint8_t b : converged) out.non_converged += b ? 0 : 1;
  out.accuracy = 100.0 * static_cast<double>(out.correct) / static_cast<double>(out.total);
  return out;
}

ExperimentReport structure_benchmark(const LabeledDataset& data, const BenchmarkConfig& config) {
  if (config.dims.empty()) throw std::invalid_argument("structure_benchmark: no dimensions");
  for (int d : config.dims)
    if (d < 1 || d > data.ambient_dim())
      throw std::invalid_argument("structure_benchmark: dimension " + std::to_string(d) +
                                  " outside [1, " + std::to_string(data.ambient_dim()) + "]");
  if (config.methods.empty()) throw std::invalid_argument("structure_benchmark: no methods");

  const auto [train, test] = split(data, config.split_fraction, config.seed);

  ExperimentReport report;
  report.name = "benchmark.reduction";
  report.columns = {"method", "dim", "time_ms", "accuracy"};
  report.meta("n", static_cast<std::int64_t>(data.ambient_dim()));
  report.meta("samples", static_cast<std::int64_t>(data.size()));
  report.meta("classes", static_cast<std::int64_t>(data.num_classes()));
  report.meta("split", config.split_fraction);
  report.meta("seed", static_cast<std::int64_t>(config.seed));
  report.meta("timing", config.with_timing ? "median-of-5" : "disabled");
  report.meta("accuracy", config.with_accuracy ? "src" : "disabled");
  finalize_hash(&report);

  int non_converged_total = 0;
  std::vector<int> dims = config.dims;
  std::sort(dims.begin(), dims.end());

  for (ReductionMethod method : config.methods) {
    for (int dim : dims) {
      double time_ms = 0.0;
      double accuracy = 0.0;
      if (method == ReductionMethod::rp) {
        const std::uint64_t seed = rng::derive_seed(config.seed, kBenchRpTag,
                                                    static_cast<std::uint64_t>(dim));
        auto reduce = [&] {
          const auto r =
              ProjectionMatrix::generate(data.ambient_dim(), dim, Recipe::dense_gaussian, seed);
          Eigen::MatrixXd projected = data.vectors() * r.entries().transpose();
          return projected;
        };
        if (config.with_timing) {
          (void)reduce();  // warm-up
          std::vector<double> reps;
          for (int rep = 0; rep < 5; ++rep) {
            StopWatch watch;
            volatile double sink = reduce().sum();
            (void)sink;
            reps.push_back(watch.ms());
          }
          time_ms = median_of(std::move(reps));
        }
        if (config.with_accuracy) {
          const auto r =
              ProjectionMatrix::generate(data.ambient_dim(), dim, Recipe::dense_gaussian, seed);
          const ClassifyResult res = src_accuracy(project_dataset(r, train),
                                                  project_dataset(r, test), config.solver,
                                                  config.threads);
          accuracy = res.accuracy;
          non_converged_total += res.non_converged;
        }
      } else {
        auto reduce = [&] {
          const PcaModel model = pca_fit(train, dim);
          Eigen::MatrixXd projected =
              (data.vectors().rowwise() - model.mean.transpose()) * model.components;
          return projected;
        };
        if (config.with_timing) {
          (void)reduce();
          std::vector<double> reps;
          for (int rep = 0; rep < 5; ++rep) {
            StopWatch watch;
            volatile double sink = reduce().sum();
            (void)sink;
            reps.push_back(watch.ms());
          }
          time_ms = median_of(std::move(reps));
        }
        if (config.with_accuracy) {
          const PcaModel model = pca_fit(train, dim);
          const ClassifyResult res = src_accuracy(pca_project(model, train),
                                                  pca_project(model, test), config.solver,
                                                  config.threads);
          accuracy = res.accuracy;
          non_converged_total += res.non_converged;
        }
      }
      report.rows.push_back({std::string(method == ReductionMethod::rp ? "rp" : "pca"),
                             static_cast<std::int64_t>(dim), time_ms, accuracy});
    }
  }
  report.meta("non_converged_total", static_cast<std::int64_t>(non_converged_total));
  return report;
}

ExperimentReport inversion_attack(const ProjectionMatrix& r,
                                  const std::vector<Eigen::VectorXd>& templates,
                                  const std::vector<Eigen::VectorXd>* originals,
                                  const SubspaceBasis* basis) {
  if (originals && originals->size() != templates.size())
    throw std::invalid_argument("inversion_attack: template/original count mismatch");
  if (basis && basis->ambient_dim() != r.cols())
    throw std::invalid_argument("inversion_attack: basis ambient dimension mismatch");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(r.entries(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = static_cast<double>(std::max(r.rows(), r.cols())) *
                        std::numeric_limits<double>::epsilon() * (sv.size() ? sv(0) : 0.0);
  Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) inv_sv(i) = 1.0 / sv(i);

  std::optional<Eigen::MatrixXd> basis_pinv_rb;  // pinv(R * U_B), precomputed
  if (basis) {
    const Eigen::MatrixXd rb = r.entries() * basis->orthonormal();
    Eigen::BDCSVD<Eigen::MatrixXd> rb_svd(rb, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& rsv = rb_svd.singularValues();
    const double rb_cutoff = static_cast<double>(std::max(rb.rows(), rb.cols())) *
                             std::numeric_limits<double>::epsilon() * (rsv.size() ? rsv(0) : 0.0);
    Eigen::VectorXd rinv = Eigen::VectorXd::Zero(rsv.size());
    for (Eigen::Index i = 0; i < rsv.size(); ++i)
      if (rsv(i) > rb_cutoff) rinv(i) = 1.0 / rsv(i);
    basis_pinv_rb = rb_svd.matrixV() * rinv.asDiagonal() * rb_svd.matrixU().transpose();
  }

  ExperimentReport report;
  report.name = "attack.pseudo_inverse";
  report.columns = {"template", "recon_norm"};
  if (originals) report.columns.push_back("rel_err");
  if (basis) report.columns.push_back(originals ? "rel_err_subspace" : "recon_norm_subspace");
  report.meta("m", static_cast<std::int64_t>(r.rows()));
  report.meta("n", static_cast<std::int64_t>(r.cols()));
  report.meta("matrix_seed", static_cast<std::int64_t>(r.seed()));
  finalize_hash(&report);

  for (std::size_t i = 0; i < templates.size(); ++i) {
    const Eigen::VectorXd& bar = templates[i];
    if (bar.size() != r.rows())
      throw std::invalid_argument("inversion_attack: template " + std::to_string(i) +
                                  " has wrong length");
    const Eigen::VectorXd recovered =
        svd.matrixV() * (inv_sv.asDiagonal() * (svd.matrixU().transpose() * bar));
    std::vector<ReportValue> row{static_cast<std::int64_t>(i), recovered.norm()};
    if (originals) {
      const Eigen::VectorXd& x = (*originals)[i];
      const double nx = x.norm();
      if (nx == 0.0) throw std::invalid_argument("inversion_attack: zero original vector");
      row.push_back((recovered - x).norm() / nx);
      if (basis) {
        const Eigen::VectorXd constrained =
            basis->orthonormal() * (*basis_pinv_rb * bar);
        row.push_back((constrained - x).norm() / nx);
      }
    } else if (basis) {
      const Eigen::VectorXd constrained = basis->orthonormal() * (*basis_pinv_rb * bar);
      row.push_back(constrained.norm());
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace rproj
