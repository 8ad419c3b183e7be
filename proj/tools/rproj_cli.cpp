// Command line front end: dataset generation, rejection-probability sweeps,
// reduction benchmarks, SRC classification, closed-form bounds, the
// pseudo-inverse attack demo and cancelable-template management.
//
// Exit codes: 0 success, 2 invalid arguments, 3 solver non-convergence,
// 4 I/O or parse error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rproj/bounds.hpp"
#include "rproj/dataset.hpp"
#include "rproj/experiments.hpp"
#include "rproj/geometry.hpp"
#include "rproj/parallel.hpp"
#include "rproj/pca.hpp"
#include "rproj/projection.hpp"
#include "rproj/report.hpp"
#include "rproj/rng.hpp"
#include "rproj/sparse.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
  int threads = 1;
};

rproj::ReportFormat report_format(const GlobalOpts& g) {
  if (g.format == "csv") return rproj::ReportFormat::csv;
  if (g.format == "json") return rproj::ReportFormat::json;
  throw std::invalid_argument("--format must be csv or json");
}

void emit(const rproj::ExperimentReport& report, const GlobalOpts& g) {
  if (g.out.empty()) {
    std::cout << rproj::serialize(report, report_format(g));
  } else {
    rproj::write_report(report, g.out, report_format(g));
  }
}

rproj::MatrixFormat data_format(const std::string& name) {
  if (name == "csv") return rproj::MatrixFormat::csv;
  if (name == "raw-f64") return rproj::MatrixFormat::raw_f64;
  throw std::invalid_argument("--data-format must be csv or raw-f64");
}

/// "n=1024,k=10,d=5,count=20[,scale=1.0]" -> generated union-of-subspaces data.
rproj::LabeledDataset parse_synthetic(const std::string& spec, std::uint64_t seed) {
  std::map<std::string, double> kv;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--synthetic expects key=value pairs, got '" + item + "'");
    kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  for (const auto& key : {"n", "k", "d", "count"})
    if (!kv.count(key))
      throw std::invalid_argument(std::string("--synthetic needs ") + key + "=...");
  const int k = static_cast<int>(kv["k"]);
  const double scale = kv.count("scale") ? kv["scale"] : 1.0;
  return rproj::generate_union(static_cast<int>(kv["n"]), k,
                               std::vector<int>(static_cast<std::size_t>(k), static_cast<int>(kv["d"])),
                               std::vector<int>(static_cast<std::size_t>(k), static_cast<int>(kv["count"])),
                               seed, scale);
}

rproj::LabeledDataset load_input(const std::string& input, const std::string& synthetic,
                                 const std::string& fmt, std::uint64_t seed) {
  if (input.empty() == synthetic.empty())
    throw std::invalid_argument("provide exactly one of --input and --synthetic");
  if (!input.empty()) return rproj::load_matrix(input, data_format(fmt));
  return parse_synthetic(synthetic, seed);
}

Eigen::VectorXd read_vector_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rproj::ParseError(path, 0, "cannot open file");
  std::string line;
  if (!std::getline(in, line)) throw rproj::ParseError(path, 1, "empty file");
  std::vector<double> values;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      values.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw rproj::ParseError(path, 1, "field '" + field + "' is not a number");
    }
  }
  if (values.empty()) throw rproj::ParseError(path, 1, "no values");
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void write_template(const rproj::CancelableTemplate& t, const std::string& path) {
  nlohmann::ordered_json j;
  j["subject"] = t.subject_id;
  j["seed"] = t.seed;
  j["m"] = t.projected.size();
  j["projected"] = std::vector<double>(t.projected.data(), t.projected.data() + t.projected.size());
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

rproj::CancelableTemplate read_template(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rproj::ParseError(path, 0, "cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw rproj::ParseError(path, 0, e.what());
  }
  rproj::CancelableTemplate t;
  try {
    t.subject_id = j.at("subject").get<std::string>();
    t.seed = j.at("seed").get<std::uint64_t>();
    const auto values = j.at("projected").get<std::vector<double>>();
    t.projected = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                    static_cast<Eigen::Index>(values.size()));
  } catch (const nlohmann::json::exception& e) {
    throw rproj::ParseError(path, 0, e.what());
  }
  return t;
}

int run_gen_data(const GlobalOpts& g, int n, int k, std::vector<int> dims, std::vector<int> counts,
                 double coeff_scale, const std::string& fmt) {
  if (dims.size() == 1) dims.assign(static_cast<std::size_t>(k), dims[0]);
  if (counts.size() == 1) counts.assign(static_cast<std::size_t>(k), counts[0]);
  const auto data = rproj::generate_union(n, k, dims, counts, g.seed, coeff_scale);
  if (g.out.empty()) throw std::invalid_argument("gen-data requires --out <dataset path>");
  rproj::save_matrix(data, g.out, data_format(fmt));
  std::cout << "wrote " << g.out << " (N=" << data.size() << ", n=" << data.ambient_dim()
            << ", K=" << data.num_classes() << ")\n";
  return kExitOk;
}

int run_reject(const GlobalOpts& g, rproj::RejectionConfig config, const std::string& mode,
               const std::string& recipe) {
  if (mode == "cosine")
    config.mode = rproj::RejectionMode::cosine;
  else if (mode == "inner")
    config.mode = rproj::RejectionMode::inner_product;
  else
    throw std::invalid_argument("--mode must be cosine or inner");
  if (recipe == "dense")
    config.recipe = rproj::Recipe::dense_gaussian;
  else if (recipe == "sparse")
    config.recipe = rproj::Recipe::sparse_achlioptas;
  else
    throw std::invalid_argument("--recipe must be dense or sparse");
  config.master_seed = g.seed;
  config.threads = g.threads;
  emit(rproj::rejection_curve(config), g);
  return kExitOk;
}

int run_bench(const GlobalOpts& g, const std::string& input, const std::string& synthetic,
              const std::string& fmt, std::vector<int> dims, const std::string& methods,
              double split_fraction, bool no_timing, bool no_accuracy, double bp_tol,
              int bp_max_iter) {
  const auto data = load_input(input, synthetic, fmt, rproj::rng::derive_seed(g.seed, 0xda7aULL));
  rproj::BenchmarkConfig config;
  config.dims = std::move(dims);
  config.methods.clear();
  std::stringstream ss(methods);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "rp")
      config.methods.push_back(rproj::ReductionMethod::rp);
    else if (item == "pca")
      config.methods.push_back(rproj::ReductionMethod::pca);
    else
      throw std::invalid_argument("--methods understands rp and pca, got '" + item + "'");
  }
  config.split_fraction = split_fraction;
  config.seed = g.seed;
  config.with_timing = !no_timing;
  config.with_accuracy = !no_accuracy;
  config.solver.tol = bp_tol;
  config.solver.max_iter = bp_max_iter;
  config.threads = g.threads;
  const auto report = rproj::structure_benchmark(data, config);
  emit(report, g);
  for (const auto& [key, value] : report.metadata)
    if (key == "non_converged_total" && value != "0") return kExitSolver;
  return kExitOk;
}

int run_classify(const GlobalOpts& g, const std::string& input, const std::string& synthetic,
                 const std::string& fmt, const std::string& method, int dim, double split_fraction,
                 double bp_tol, int bp_max_iter) {
  const auto data = load_input(input, synthetic, fmt, rproj::rng::derive_seed(g.seed, 0xda7aULL));
  const auto [train, test] = rproj::split(data, split_fraction, g.seed);

  rproj::BasisPursuitOptions opts;
  opts.tol = bp_tol;
  opts.max_iter = bp_max_iter;

  rproj::LabeledDataset train_r = train, test_r = test;
  if (method == "rp") {
    if (dim < 1) throw std::invalid_argument("--dim is required for --method rp");
    const auto r = rproj::ProjectionMatrix::generate(data.ambient_dim(), dim,
                                                     rproj::Recipe::dense_gaussian,
                                                     rproj::rng::derive_seed(g.seed, 0x72ULL, std::uint64_t(dim)));
    train_r = rproj::project_dataset(r, train);
    test_r = rproj::project_dataset(r, test);
  } else if (method == "pca") {
    if (dim < 1) throw std::invalid_argument("--dim is required for --method pca");
    const auto model = rproj::pca_fit(train, dim);
    train_r = rproj::pca_project(model, train);
    test_r = rproj::pca_project(model, test);
  } else if (method != "none") {
    throw std::invalid_argument("--method must be rp, pca or none");
  }

  rproj::Dictionary dict(train_r.vectors().transpose(), train_r.labels());
  std::vector<int> predictions(static_cast<std::size_t>(test_r.size()), 0);
  std::vector<std::uint8_t> converged(static_cast<std::size_t>(test_r.size()), 0);
  rproj::parallel_for(0, test_r.size(), g.threads, [&](std::int64_t i) {
    const auto c = rproj::src_classify(dict, test_r.sample(static_cast<int>(i)), opts);
    predictions[static_cast<std::size_t>(i)] = c.predicted;
    converged[static_cast<std::size_t>(i)] = c.code.status == rproj::SolverStatus::converged;
  });

  std::vector<int> per_class_total(static_cast<std::size_t>(data.num_classes()), 0);
  std::vector<int> per_class_correct(static_cast<std::size_t>(data.num_classes()), 0);
  int correct = 0, non_converged = 0;
  for (int i = 0; i < test_r.size(); ++i) {
    const int label = test_r.label(i);
    ++per_class_total[static_cast<std::size_t>(label - 1)];
    if (predictions[static_cast<std::size_t>(i)] == label) {
      ++correct;
      ++per_class_correct[static_cast<std::size_t>(label - 1)];
    }
    if (!converged[static_cast<std::size_t>(i)]) ++non_converged;
  }

  rproj::ExperimentReport report;
  report.name = "classify.src";
  report.columns = {"scope", "id", "accuracy", "correct", "total"};
  report.meta("method", method);
  report.meta("dim", static_cast<std::int64_t>(method == "none" ? data.ambient_dim() : dim));
  report.meta("split", split_fraction);
  report.meta("seed", static_cast<std::int64_t>(g.seed));
  report.meta("non_converged", static_cast<std::int64_t>(non_converged));
  report.rows.push_back({std::string("overall"), std::int64_t{0},
                         100.0 * correct / std::max(1, test_r.size()),
                         static_cast<std::int64_t>(correct),
                         static_cast<std::int64_t>(test_r.size())});
  for (int c = 1; c <= data.num_classes(); ++c) {
    const int total = per_class_total[static_cast<std::size_t>(c - 1)];
    const int good = per_class_correct[static_cast<std::size_t>(c - 1)];
    report.rows.push_back({std::string("class"), static_cast<std::int64_t>(c),
                           total ? 100.0 * good / total : 0.0, static_cast<std::int64_t>(good),
                           static_cast<std::int64_t>(total)});
  }
  emit(report, g);
  return non_converged > 0 ? kExitSolver : kExitOk;
}

int run_bounds(const GlobalOpts& g, const std::string& op, int m, double eps, double gamma,
               std::int64_t samples, double delta, const std::string& mode, double x_norm,
               double y_norm, double inner, int d, double c) {
  namespace b = rproj::bounds;
  rproj::ExperimentReport report;
  report.name = "bounds." + op;
  report.columns = {"quantity", "value"};
  auto row = [&](const std::string& q, rproj::ReportValue v) {
    report.rows.push_back({q, std::move(v)});
  };
  if (op == "jl") {
    row("success_prob", b::jl_success_prob(m, eps));
  } else if (op == "cosine-interval") {
    const auto i = m > 0 ? b::cosine_interval(gamma, eps, m) : b::cosine_interval(gamma, eps);
    row("lo", i.lo);
    row("hi", i.hi);
    row("case", std::string(i.branch == b::CosineCase::negative   ? "negative"
                            : i.branch == b::CosineCase::near_zero ? "near-zero"
                                                                   : "positive"));
    if (i.success_prob) row("success_prob", *i.success_prob);
  } else if (op == "inner-interval") {
    const auto i = b::inner_product_interval(x_norm, y_norm, inner, eps);
    row("lo", i.lo);
    row("hi", i.hi);
  } else if (op == "margin-bound") {
    row("projected_margin_bound", b::projected_margin_bound(gamma, eps));
  } else if (op == "multiclass") {
    row("success_prob", b::multiclass_success_prob(samples, m, eps));
  } else if (op == "min-dim") {
    const auto mode_e = mode == "exact-inversion" ? b::MinDimMode::exact_inversion
                        : mode == "paper-literal" ? b::MinDimMode::paper_literal
                                                  : throw std::invalid_argument(
                                                        "--mode must be paper-literal or exact-inversion");
    const auto r = b::min_projection_dim(samples, eps, delta, mode_e);
    row("m", static_cast<std::int64_t>(r.m));
    row("mode", std::string(mode));
  } else if (op == "rec-dim") {
    row("m", static_cast<std::int64_t>(b::recommended_dim_for_subspace(d, c)));
  } else {
    throw std::invalid_argument("unknown --op '" + op + "'");
  }
  report.meta("seed", static_cast<std::int64_t>(g.seed));
  emit(report, g);
  return kExitOk;
}

int run_attack(const GlobalOpts& g, int n, int m, int count, int subspace_dim) {
  const auto r = rproj::ProjectionMatrix::generate(n, m, rproj::Recipe::dense_gaussian,
                                                   rproj::rng::derive_seed(g.seed, 0xa77acULL));
  rproj::rng::Stream stream(rproj::rng::derive_seed(g.seed, 0x76ec5ULL));
  std::vector<Eigen::VectorXd> originals;
  std::vector<Eigen::VectorXd> templates;
  std::optional<rproj::SubspaceBasis> basis;
  if (subspace_dim > 0) {
    Eigen::MatrixXd span(n, subspace_dim);
    for (int j = 0; j < subspace_dim; ++j)
      for (int i = 0; i < n; ++i) span(i, j) = stream.next_normal();
    basis.emplace(span);
  }
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd x(n);
    if (basis) {
      Eigen::VectorXd w(subspace_dim);
      for (int i = 0; i < subspace_dim; ++i) w(i) = stream.next_normal();
      x = basis->orthonormal() * w;
    } else {
      for (int i = 0; i < n; ++i) x(i) = stream.next_normal();
    }
    originals.push_back(x);
    templates.push_back(r.project(x));
  }
  emit(rproj::inversion_attack(r, templates, &originals, basis ? &*basis : nullptr), g);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random projections with provable subspace-structure preservation"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "master seed for all randomness");
  app.add_option("--out", g.out, "output path (default: stdout)");
  app.add_option("--format", g.format, "report format: csv|json")->default_str("csv");
  app.add_option("--threads", g.threads, "worker threads (results are schedule-independent)");

  std::function<int()> action;

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "sample a union-of-subspaces dataset");
  {
    static int n = 100, k = 3;
    static std::vector<int> dims{3}, counts{15};
    static double coeff_scale = 1.0;
    static std::string fmt = "csv";
    gen->add_option("--n", n, "ambient dimension");
    gen->add_option("--classes", k, "number of classes");
    gen->add_option("--dims", dims, "subspace dimension per class (one value broadcasts)");
    gen->add_option("--counts", counts, "samples per class (one value broadcasts)");
    gen->add_option("--coeff-scale", coeff_scale, "stddev of subspace coefficients");
    gen->add_option("--data-format", fmt, "csv|raw-f64");
    gen->callback([&] { action = [&] { return run_gen_data(g, n, k, dims, counts, coeff_scale, fmt); }; });
  }

  // reject
  auto* reject = app.add_subcommand("reject", "empirical rejection-probability sweep");
  {
    static rproj::RejectionConfig config;
    static std::string mode = "cosine", recipe = "dense";
    reject->add_option("--mode", mode, "cosine|inner");
    reject->add_option("--eps", config.eps, "acceptance band half-width");
    reject->add_option("--gamma", config.gamma_targets, "cosine targets")->required();
    reject->add_option("--trials", config.trials, "projections per grid cell");
    reject->add_option("--m-grid", config.m_grid, "target dimensions");
    reject->add_option("--n", config.ambient_dim, "ambient dimension");
    reject->add_option("--length-min", config.length_min, "vector length range low end");
    reject->add_option("--length-max", config.length_max, "vector length range high end");
    reject->add_option("--recipe", recipe, "dense|sparse");
    reject->callback([&] { action = [&] { return run_reject(g, config, mode, recipe); }; });
  }

  // bench
  auto* bench = app.add_subcommand("bench", "reduction time and SRC accuracy per method");
  {
    static std::string input, synthetic, fmt = "csv", methods = "rp,pca";
    static std::vector<int> dims;
    static double split_fraction = 0.5, bp_tol = 1e-6;
    static int bp_max_iter = 5000;
    static bool no_timing = false, no_accuracy = false;
    bench->add_option("--input", input, "dataset file");
    bench->add_option("--synthetic", synthetic, "n=..,k=..,d=..,count=..[,scale=..]");
    bench->add_option("--data-format", fmt, "csv|raw-f64");
    bench->add_option("--dims", dims, "target dimensions")->required();
    bench->add_option("--methods", methods, "comma list of rp,pca");
    bench->add_option("--split", split_fraction, "train fraction");
    bench->add_flag("--no-timing", no_timing, "skip timing (byte-reproducible reports)");
    bench->add_flag("--no-accuracy", no_accuracy, "skip SRC accuracy");
    bench->add_option("--bp-tol", bp_tol, "basis pursuit tolerance");
    bench->add_option("--bp-max-iter", bp_max_iter, "basis pursuit iteration cap");
    bench->callback([&] {
      action = [&] {
        return run_bench(g, input, synthetic, fmt, dims, methods, split_fraction, no_timing,
                         no_accuracy, bp_tol, bp_max_iter);
      };
    });
  }

  // classify
  auto* classify = app.add_subcommand("classify", "SRC accuracy on a stratified split");
  {
    static std::string input, synthetic, fmt = "csv", method = "none";
    static int dim = 0, bp_max_iter = 5000;
    static double split_fraction = 0.5, bp_tol = 1e-6;
    classify->add_option("--input", input, "dataset file");
    classify->add_option("--synthetic", synthetic, "n=..,k=..,d=..,count=..[,scale=..]");
    classify->add_option("--data-format", fmt, "csv|raw-f64");
    classify->add_option("--method", method, "rp|pca|none");
    classify->add_option("--dim", dim, "target dimension for rp/pca");
    classify->add_option("--split", split_fraction, "train fraction");
    classify->add_option("--bp-tol", bp_tol, "basis pursuit tolerance");
    classify->add_option("--bp-max-iter", bp_max_iter, "basis pursuit iteration cap");
    classify->callback([&] {
      action = [&] {
        return run_classify(g, input, synthetic, fmt, method, dim, split_fraction, bp_tol,
                            bp_max_iter);
      };
    });
  }

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate the closed-form probability bounds");
  {
    static std::string op, mode = "paper-literal";
    static int m = 0, d = 1;
    static double eps = 0.1, gamma = 0.0, delta = 0.95, x_norm = 1.0, y_norm = 1.0, inner = 0.0,
                  c = 4.0;
    static std::int64_t samples = 1;
    bounds_cmd->add_option("--op", op,
                           "jl|cosine-interval|inner-interval|margin-bound|multiclass|min-dim|rec-dim")
        ->required();
    bounds_cmd->add_option("--m", m, "target dimension");
    bounds_cmd->add_option("--eps", eps, "distortion parameter");
    bounds_cmd->add_option("--gamma", gamma, "cosine or margin");
    bounds_cmd->add_option("--samples", samples, "dataset size N");
    bounds_cmd->add_option("--delta", delta, "required success probability");
    bounds_cmd->add_option("--mode", mode, "paper-literal|exact-inversion");
    bounds_cmd->add_option("--x-norm", x_norm, "length of x");
    bounds_cmd->add_option("--y-norm", y_norm, "length of y");
    bounds_cmd->add_option("--inner", inner, "original inner product");
    bounds_cmd->add_option("--d", d, "subspace dimension");
    bounds_cmd->add_option("--c", c, "constant in the d log d rule");
    bounds_cmd->callback([&] {
      action = [&] {
        return run_bounds(g, op, m, eps, gamma, samples, delta, mode, x_norm, y_norm, inner, d, c);
      };
    });
  }

  // attack
  auto* attack = app.add_subcommand("attack", "pseudo-inverse reconstruction demo");
  {
    static int n = 300, m = 100, count = 5, subspace_dim = 0;
    attack->add_option("--n", n, "ambient dimension");
    attack->add_option("--m", m, "template dimension");
    attack->add_option("--count", count, "number of templates");
    attack->add_option("--subspace-dim", subspace_dim,
                       "confine originals to a subspace of this dimension (0: generic)");
    attack->callback([&] { action = [&] { return run_attack(g, n, m, count, subspace_dim); }; });
  }

  // template issue/reissue/match
  auto* tmpl = app.add_subcommand("template", "cancelable template demo");
  tmpl->require_subcommand(1);
  {
    static std::string in_path, subject;
    static int m = 0;
    auto* issue = tmpl->add_subcommand("issue", "project a feature vector under --seed");
    issue->add_option("--in", in_path, "csv file with one row of numbers")->required();
    issue->add_option("--subject", subject, "subject identifier")->required();
    issue->add_option("--m", m, "template dimension")->required();
    issue->callback([&] {
      action = [&] {
        if (g.out.empty()) throw std::invalid_argument("template issue requires --out");
        write_template(rproj::issue_template(read_vector_csv(in_path), subject, g.seed, m), g.out);
        std::cout << "wrote " << g.out << "\n";
        return kExitOk;
      };
    });
    auto* reissue = tmpl->add_subcommand("reissue", "replace a compromised template under a fresh --seed");
    reissue->add_option("--in", in_path, "csv file with one row of numbers")->required();
    reissue->add_option("--subject", subject, "subject identifier")->required();
    reissue->add_option("--m", m, "template dimension")->required();
    reissue->callback([&] {
      action = [&] {
        if (g.out.empty()) throw std::invalid_argument("template reissue requires --out");
        write_template(rproj::reissue_template(read_vector_csv(in_path), subject, g.seed, m),
                       g.out);
        std::cout << "wrote " << g.out << "\n";
        return kExitOk;
      };
    });
    static std::string path_a, path_b;
    auto* match = tmpl->add_subcommand("match", "cosine between two stored templates");
    match->add_option("--a", path_a, "first template json")->required();
    match->add_option("--b", path_b, "second template json")->required();
    match->callback([&] {
      action = [&] {
        const auto ta = read_template(path_a);
        const auto tb = read_template(path_b);
        rproj::ExperimentReport report;
        report.name = "template.match";
        report.columns = {"quantity", "value"};
        report.meta("subject_a", ta.subject_id);
        report.meta("subject_b", tb.subject_id);
        report.meta("same_seed", ta.seed == tb.seed ? "true" : "false");
        report.rows.push_back({std::string("cosine"), rproj::match_templates(ta, tb)});
        emit(report, g);
        return kExitOk;
      };
    });
  }

  // Accept global flags both before and after the subcommand name.
  for (auto* sub : app.get_subcommands({})) {
    sub->fallthrough();
    for (auto* nested : sub->get_subcommands({})) nested->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const rproj::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}
