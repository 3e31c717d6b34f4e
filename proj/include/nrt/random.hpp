#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace nrt {

using Rng = std::mt19937_64;

/// Uniform draw on the open interval (0, 1).
double uniform_open(Rng& rng);

/// Log of a Gamma(shape, 1) draw. Stays finite for shapes far below 1,
/// where the linear-domain draw underflows to zero.
double log_gamma_variate(double shape, Rng& rng);

/// Gamma(shape, scale) draw, clamped below at the smallest positive
/// normal double so that callers can rely on strict positivity.
double gamma_variate(double shape, double scale, Rng& rng);

/// Beta(a, b) draw in the open interval (0, 1).
double beta_variate(double a, double b, Rng& rng);

std::vector<double> dirichlet_variate(std::span<const double> concentration, Rng& rng);

bool bernoulli(double p, Rng& rng);

std::uint64_t poisson_variate(double mean, Rng& rng);

/// Index drawn with probability proportional to `weights` (nonnegative,
/// not all zero).
std::size_t categorical(std::span<const double> weights, Rng& rng);

/// Index drawn with probability proportional to exp(log_weights[i]).
/// Entries equal to -inf are never chosen.
std::size_t categorical_log(std::span<const double> log_weights, Rng& rng);

/// Inverse-CDF draw from a prefix-sum table (last entry is the total).
std::size_t categorical_from_cumulative(std::span<const double> cumulative, Rng& rng);

}  // namespace nrt
