#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nrt/hyperparameters.hpp"
#include "nrt/model_state.hpp"
#include "nrt/network.hpp"
#include "nrt/random.hpp"

namespace nrt {

/// Neighbourhoods of the subsampling MRF. Cliques are the network's edges,
/// one independent field per topic: the neighbours of site (d, k) are the
/// sites (l, k) with {d, l} an edge.
class NeighborhoodIndex {
 public:
  explicit NeighborhoodIndex(const DocumentNetwork& network);

  std::size_t num_docs() const { return adjacency_.size(); }
  /// Documents l such that (l, k) is a neighbour of (d, k), for any k.
  std::span<const std::uint32_t> neighbors(std::size_t d) const { return adjacency_.at(d); }

  /// q_{l,k} for every neighbour (l, k) of (d, k).
  std::vector<double> neighbor_values(const ModelState& state, std::size_t d, std::size_t k) const;
  void neighbor_values(const ModelState& state, std::size_t d, std::size_t k, std::vector<double>& out) const;
  /// Mean of neighbor_values, 0 for an isolated document.
  double neighbor_mean(const ModelState& state, std::size_t d, std::size_t k) const;

  /// Greedy colouring: documents sharing a colour are non-adjacent, so
  /// their q updates are conditionally independent.
  std::vector<std::uint32_t> color_classes() const;

 private:
  std::vector<std::vector<std::uint32_t>> adjacency_;
};

/// sum_l (q - q_l)^2
double mrf_energy(double q_value, std::span<const double> neighbor_values);

struct QDraw {
  double value = 0.5;
  std::size_t proposals = 0;
  bool capped = false;  // proposal cap reached; value is the last proposal
};

/// Draw from the site conditional of q_{d,k}:
///   Beta(q; a0 + r, c0 + 1 - r) * exp(-mrf_energy(q, neighbours)).
/// Exact rejection sampler with the beta factor as proposal.
QDraw sample_q(bool r, std::span<const double> neighbor_values, const Hyperparameters& hyper, Rng& rng,
               std::size_t max_proposals = 10000);
/// Same draw from the degree and mean of the neighbour values, which is all
/// the conditional depends on.
QDraw sample_q_centered(bool r, std::size_t degree, double mean, const Hyperparameters& hyper, Rng& rng,
                        std::size_t max_proposals = 10000);

}  // namespace nrt
