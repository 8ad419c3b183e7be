#include "rproj/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rproj::bounds {
namespace {

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 0.5))
    throw std::invalid_argument("eps must lie strictly in (0, 1/2), got " + std::to_string(eps));
}

void check_m(int m) {
  if (m < 1) throw std::invalid_argument("target dimension must be positive");
}

double clamp01(double p) { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

double concentration_exponent(int m, double eps) {
  return (static_cast<double>(m) / 4.0) * (eps * eps - eps * eps * eps);
}

}  // namespace

double jl_success_prob(int m, double eps) {
  check_eps(eps);
  check_m(m);
  return clamp01(1.0 - 2.0 * std::exp(-concentration_exponent(m, eps)));
}

double cosine_interval_success_prob(int m, double eps) {
  check_eps(eps);
  check_m(m);
  return clamp01(1.0 - 8.0 * std::exp(-concentration_exponent(m, eps)));
}

CosineInterval cosine_interval(double gamma, double eps) {
  check_eps(eps);
  if (gamma < -1.0 || gamma > 1.0)
    throw std::invalid_argument("cosine must lie in [-1, 1], got " + std::to_string(gamma));
  CosineInterval out;
  if (gamma < -eps) {
    out.branch = CosineCase::negative;
    out.lo = (gamma - eps) / (1.0 - eps);
    out.hi = (gamma + eps) / (1.0 + eps);
  } else if (gamma < eps) {
    out.branch = CosineCase::near_zero;
    out.lo = (gamma - eps) / (1.0 - eps);
    out.hi = (gamma + eps) / (1.0 - eps);
  } else {
    out.branch = CosineCase::positive;
    out.lo = (gamma - eps) / (1.0 + eps);
    out.hi = (gamma + eps) / (1.0 - eps);
  }
  return out;
}

CosineInterval cosine_interval(double gamma, double eps, int m) {
  CosineInterval out = cosine_interval(gamma, eps);
  out.success_prob = cosine_interval_success_prob(m, eps);
  return out;
}

Interval inner_product_interval(double x_norm, double y_norm, double inner, double eps) {
  check_eps(eps);
  if (!(x_norm > 0.0) || !(y_norm > 0.0))
    throw std::invalid_argument("inner_product_interval: norms must be positive");
  const double half_width = eps * x_norm * y_norm;
  return {inner - half_width, inner + half_width};
}

double projected_margin_bound(double gamma, double eps) {
  check_eps(eps);
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw std::invalid_argument("margin must lie in [0, 1), got " + std::to_string(gamma));
  return gamma / (1.0 - eps) + eps / (1.0 - eps);
}

double multiclass_success_prob(std::int64_t num_samples, int m, double eps) {
  check_eps(eps);
  check_m(m);
  if (num_samples < 1) throw std::invalid_argument("sample count must be positive");
  const double n = static_cast<double>(num_samples);
  return clamp01(1.0 - 6.0 * n * n * std::exp(-concentration_exponent(m, eps)));
}

MinDimResult min_projection_dim(std::int64_t num_samples, double eps, double delta,
                                MinDimMode mode) {
  check_eps(eps);
  if (num_samples < 1) throw std::invalid_argument("sample count must be positive");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie strictly in (0, 1), got " + std::to_string(delta));
  const double denom = eps * eps - eps * eps * eps;
  const double n = static_cast<double>(num_samples);
  double raw = 0.0;
  if (mode == MinDimMode::paper_literal) {
    raw = 8.0 / denom * std::log(std::sqrt(6.0) * n / (1.0 - delta));
  } else {
    raw = 4.0 / denom * std::log(6.0 * n * n / (1.0 - delta));
  }
  const double m = std::ceil(raw);
  return {m < 1.0 ? 1 : static_cast<int>(m), mode};
}

int recommended_dim_for_subspace(int subspace_dim, double c) {
  if (subspace_dim < 1) throw std::invalid_argument("subspace dimension must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("constant must be positive");
  const double d = static_cast<double>(subspace_dim);
  return static_cast<int>(std::ceil(c * d * std::log(std::max(d, 2.0))));
}

}  // namespace rproj::bounds
