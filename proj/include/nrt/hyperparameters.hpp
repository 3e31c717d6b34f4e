#pragma once

#include <cstddef>

namespace nrt {

/// Prior settings shared by both samplers.
///
/// `truncation_K == 0` means "pick the default for the corpus size"
/// (see default_truncation). The zeta sequence `zeta_base * zeta_ratio^-k`
/// (k = 1, 2, ...) drives the slice sampler's adaptive truncation.
struct Hyperparameters {
  double a0 = 1.0;          // beta prior on q, first shape
  double c0 = 1.0;          // beta prior on q, second shape
  double b0 = 1.0;          // gamma shape of the per-document scales beta_{d,k}
  double alpha = 1.0;       // gamma-process concentration
  double alpha0 = 1.0;      // symmetric Dirichlet concentration for topics
  double gamma_mass = 1.0;  // total mass of the base measure
  std::size_t truncation_K = 0;
  double zeta_base = 1.0;
  double zeta_ratio = 1.5;

  /// Throws std::invalid_argument on a non-positive field or zeta_ratio <= 1.
  void validate() const;

  /// zeta_k for a 1-based atom position k.
  double zeta(std::size_t k) const;
  double log_zeta(std::size_t k) const;

  /// Number of atoms in the slice support {k >= 1 : zeta_k >= u}.
  std::size_t slice_support_size(double u) const;

  std::size_t truncation_for(std::size_t num_docs) const;
};

/// min(10 * D, 2000)
std::size_t default_truncation(std::size_t num_docs);

}  // namespace nrt
