#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "nrt/corpus.hpp"
#include "nrt/hyperparameters.hpp"
#include "nrt/model_state.hpp"
#include "nrt/network.hpp"
#include "nrt/random.hpp"

namespace nrt {

struct SamplerConfig {
  std::size_t max_iter = 1000;
  std::size_t burnin = 100;
  std::uint64_t seed = 1;
  SamplerMode mode = SamplerMode::truncated;
  std::size_t snapshot_every = 10;
  std::size_t q_max_proposals = 10000;
  // Slice mode: trailing atoms with no tokens and no slice support for this
  // many consecutive sweeps are dropped.
  std::size_t prune_after = 50;
#ifdef NDEBUG
  bool check_invariants = false;
#else
  bool check_invariants = true;
#endif

  /// burnin < max_iter (or both zero); snapshot_every >= 1.
  void validate() const;
};

struct TraceRecord {
  std::size_t iter = 0;
  double loglik = 0.0;
  std::size_t k_active = 0;
  double elapsed_seconds = 0.0;
};

struct ChainTrace {
  SamplerMode mode = SamplerMode::truncated;
  std::uint64_t seed = 0;
  std::vector<TraceRecord> records;

  /// Throws std::logic_error unless record.iter exceeds the last one.
  void append(const TraceRecord& record);
};

/// Compact post-burn-in summary of one sweep's state: the active topics only.
struct Snapshot {
  std::size_t iter = 0;
  double loglik = 0.0;
  std::vector<std::size_t> active;
  std::vector<std::vector<double>> theta;
  std::vector<double> pi;
};

struct ChainStats {
  std::size_t q_capped = 0;
  std::size_t atoms_appended = 0;
  std::size_t atoms_pruned = 0;
};

struct ChainResult {
  ModelState state;
  ChainTrace trace;
  std::vector<Snapshot> snapshots;
  ChainStats stats;
};

/// Called after every completed sweep with the 1-based iteration index.
using SweepObserver = std::function<void(const ModelState&, std::size_t)>;

/// Initial state: theta ~ Dirichlet(alpha0), q ~ Beta(a0, c0), r = 1,
/// beta ~ Gamma(b0, 1); pi ~ Gamma(gamma_mass/K, 1) (truncated) or built from
/// construction draws (E, T, d) (slice); then one multinomial allocation
/// pass.
ModelState initialize_state(const Corpus& corpus, const Hyperparameters& hyper, SamplerMode mode, Rng& rng);

/// Truncated Gibbs sampler.
ChainResult run_truncated(const Corpus& corpus, const DocumentNetwork& network, const Hyperparameters& hyper,
                          const SamplerConfig& config, const SweepObserver& observer = {});

/// Slice sampler over the untruncated model.
ChainResult run_slice(const Corpus& corpus, const DocumentNetwork& network, const Hyperparameters& hyper,
                      const SamplerConfig& config, const SweepObserver& observer = {});

/// Dispatches on config.mode.
ChainResult run_chain(const Corpus& corpus, const DocumentNetwork& network, const Hyperparameters& hyper,
                      const SamplerConfig& config, const SweepObserver& observer = {});

}  // namespace nrt
