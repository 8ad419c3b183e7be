#pragma once

#include <cstdint>
#include <optional>

namespace rproj::bounds {

/// 1 - 2 exp(-(m/4)(eps^2 - eps^3)), clamped to [0, 1]. Probability that a
/// dense Gaussian projection to m dimensions preserves a squared norm within
/// a (1 +- eps) factor. Requires eps in (0, 1/2).
double jl_success_prob(int m, double eps);

/// 1 - 8 exp(-(m/4)(eps^2 - eps^3)), clamped to [0, 1]. Success probability
/// attached to the cosine interval below.
double cosine_interval_success_prob(int m, double eps);

enum class CosineCase { negative, near_zero, positive };

struct CosineInterval {
  double lo = 0.0;
  double hi = 0.0;
  CosineCase branch = CosineCase::near_zero;
  std::optional<double> success_prob;  ///< set when a target dimension was supplied
};

/// Interval guaranteed (w.h.p.) to contain the projected cosine of a vector
/// pair whose original cosine is gamma. The three branches select on
/// gamma < -eps, -eps <= gamma < eps, gamma >= eps and agree at the
/// boundaries.
CosineInterval cosine_interval(double gamma, double eps);
CosineInterval cosine_interval(double gamma, double eps, int m);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// [inner - eps * |x| * |y|, inner + eps * |x| * |y|]: the additive band for a
/// projected inner product. The width scales with the vector lengths, which is
/// why inner products of long vectors are not preserved in a relative sense.
Interval inner_product_interval(double x_norm, double y_norm, double inner, double eps);

/// gamma / (1 - eps) + eps / (1 - eps): upper bound on a class margin after
/// projection. Requires gamma in [0, 1), eps in (0, 1/2).
double projected_margin_bound(double gamma, double eps);

/// 1 - 6 N^2 exp(-(m/4)(eps^2 - eps^3)), clamped to [0, 1]: probability that
/// every class margin of an N-sample dataset obeys projected_margin_bound
/// simultaneously.
double multiclass_success_prob(std::int64_t num_samples, int m, double eps);

enum class MinDimMode { paper_literal, exact_inversion };

struct MinDimResult {
  int m = 0;
  MinDimMode mode = MinDimMode::paper_literal;
};

/// Smallest projection dimension for which the multiclass bound succeeds with
/// probability at least delta over N samples.
///   paper_literal:   ceil( 8/(eps^2-eps^3) * ln( sqrt(6) N / (1-delta) ) )
///   exact_inversion: ceil( 4/(eps^2-eps^3) * ln( 6 N^2   / (1-delta) ) )
/// The exact_inversion form inverts the success probability directly and is
/// the one whose output always satisfies multiclass_success_prob >= delta.
MinDimResult min_projection_dim(std::int64_t num_samples, double eps, double delta = 0.95,
                                MinDimMode mode = MinDimMode::paper_literal);

/// ceil(c * d * ln(max(d, 2))): rule of thumb for how many random vectors are
/// enough when the data lives in a d-dimensional subspace.
int recommended_dim_for_subspace(int subspace_dim, double c = 4.0);

}  // namespace rproj::bounds
