#include "nrt/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nrt {

namespace {
constexpr double kMinPositive = std::numeric_limits<double>::min();
}

double uniform_open(Rng& rng) {
  // 53 random bits mapped to the centres of 2^53 equal cells: never 0 or 1.
  const std::uint64_t bits = rng() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double log_gamma_variate(double shape, Rng& rng) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be positive");
  if (shape >= 1.0) {
    std::gamma_distribution<double> g(shape, 1.0);
    double x = g(rng);
    while (x <= 0.0) x = g(rng);
    return std::log(x);
  }
  // G(a) = G(a + 1) * U^(1/a)
  std::gamma_distribution<double> g(shape + 1.0, 1.0);
  double x = g(rng);
  while (x <= 0.0) x = g(rng);
  return std::log(x) + std::log(uniform_open(rng)) / shape;
}

double gamma_variate(double shape, double scale, Rng& rng) {
  if (!(scale > 0.0)) throw std::invalid_argument("gamma scale must be positive");
  const double v = std::exp(log_gamma_variate(shape, rng)) * scale;
  return std::max(v, kMinPositive);
}

double beta_variate(double a, double b, Rng& rng) {
  constexpr double hi = 1.0 - 0x1.0p-53;
  double v;
  if (b == 1.0) {
    // Beta(a, 1) has cdf x^a.
    v = std::pow(uniform_open(rng), 1.0 / a);
  } else if (a == 1.0) {
    v = -std::expm1(std::log(uniform_open(rng)) / b);
  } else {
    const double lx = log_gamma_variate(a, rng);
    const double ly = log_gamma_variate(b, rng);
    // x / (x + y) = 1 / (1 + exp(ly - lx))
    v = 1.0 / (1.0 + std::exp(ly - lx));
  }
  return std::clamp(v, kMinPositive, hi);
}

std::vector<double> dirichlet_variate(std::span<const double> concentration, Rng& rng) {
  std::vector<double> out(concentration.size());
  if (out.empty()) return out;
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = log_gamma_variate(concentration[i], rng);
    mx = std::max(mx, out[i]);
  }
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - mx);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

bool bernoulli(double p, Rng& rng) { return uniform_open(rng) < p; }

std::uint64_t poisson_variate(double mean, Rng& rng) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::uint64_t> pois(mean);
  return pois(rng);
}

std::size_t categorical(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw std::domain_error("categorical: all weights are zero");
  double target = uniform_open(rng) * total;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    target -= weights[i];
    if (target < 0.0) return i;
  }
  return last_positive;
}

std::size_t categorical_log(std::span<const double> log_weights, Rng& rng) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) mx = std::max(mx, lw);
  if (!std::isfinite(mx)) throw std::domain_error("categorical_log: no finite weight");
  std::vector<double> w(log_weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights[i] - mx);
  return categorical(w, rng);
}

std::size_t categorical_from_cumulative(std::span<const double> cumulative, Rng& rng) {
  const double total = cumulative.back();
  if (!(total > 0.0)) throw std::domain_error("categorical: all weights are zero");
  const double target = uniform_open(rng) * total;
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) --it;
  std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
  // skip zero-width cells that upper_bound can land on at ties
  while (idx > 0 && cumulative[idx] == cumulative[idx - 1]) --idx;
  return idx;
}

}  // namespace nrt
