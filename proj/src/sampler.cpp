#include "nrt/sampler.hpp"

#include <chrono>
#include <iostream>
#include <stdexcept>

#include "nrt/conditionals.hpp"
#include "nrt/likelihood.hpp"
#include "nrt/mrf.hpp"

namespace nrt {

void SamplerConfig::validate() const {
  if (max_iter == 0 ? burnin != 0 : burnin >= max_iter)
    throw std::invalid_argument("burn-in must be smaller than the iteration count");
  if (snapshot_every == 0) throw std::invalid_argument("snapshot_every must be at least 1");
  if (q_max_proposals == 0) throw std::invalid_argument("q_max_proposals must be at least 1");
}

void ChainTrace::append(const TraceRecord& record) {
  if (!records.empty() && record.iter <= records.back().iter)
    throw std::logic_error("trace iterations must be strictly increasing");
  records.push_back(record);
}

ModelState initialize_state(const Corpus& corpus, const Hyperparameters& hyper, SamplerMode mode, Rng& rng) {
  hyper.validate();
  ModelState state(corpus, mode);
  const std::size_t K = hyper.truncation_for(corpus.num_docs());
  for (std::size_t k = 0; k < K; ++k) {
    if (mode == SamplerMode::slice) {
      append_prior_atom(state, hyper, rng, /*retain_all=*/true);
    } else {
      Topic tp = draw_prior_topic(corpus.num_docs(), corpus.vocab_size(), hyper, rng, /*retain_all=*/true);
      tp.pi = gamma_variate(hyper.gamma_mass / static_cast<double>(K), 1.0, rng);
      state.add_topic(std::move(tp));
    }
  }
  resample_all_truncated(state, rng);
  return state;
}

namespace {

class Chain {
 public:
  Chain(const Corpus& corpus, const DocumentNetwork& network, const Hyperparameters& hyper,
        const SamplerConfig& config)
      : corpus_(corpus), hyper_(hyper), config_(config), neighborhood_(network), rng_(config.seed) {
    if (network.num_docs() != corpus.num_docs())
      throw std::invalid_argument("network and corpus disagree on the number of documents");
    hyper_.validate();
    config_.validate();
  }

  ChainResult run(const SweepObserver& observer) {
    ChainResult result;
    result.trace.mode = config_.mode;
    result.trace.seed = config_.seed;
    state_ = initialize_state(corpus_, hyper_, config_.mode, rng_);
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t iter = 1; iter <= config_.max_iter; ++iter) {
      if (config_.mode == SamplerMode::slice)
        sweep_slice();
      else
        sweep_truncated();

      if (config_.check_invariants) {
        const InvariantReport rep = check_invariants(state_, corpus_);
        if (rep.total() != 0)
          throw std::logic_error("invariant violation after sweep " + std::to_string(iter) + ": " + rep.describe());
      }
      TraceRecord rec;
      rec.iter = iter;
      rec.loglik = joint_log_likelihood(state_, corpus_);
      rec.k_active = active_topics(state_).size();
      rec.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      result.trace.append(rec);
      if (iter > config_.burnin && (iter - config_.burnin) % config_.snapshot_every == 0)
        result.snapshots.push_back(snapshot(iter, rec.loglik));
      if (observer) observer(state_, iter);
    }
    if (stats_.q_capped > 0)
      std::cerr << "warning: q proposal cap (" << config_.q_max_proposals << ") reached " << stats_.q_capped
                << " times; the last proposal was kept\n";
    result.stats = stats_;
    result.state = std::move(state_);
    return result;
  }

 private:
  void update_document_site(std::size_t d, std::size_t k) {
    const QDraw qd = sample_q_centered(state_.r(d, k), neighborhood_.neighbors(d).size(),
                                       neighborhood_.neighbor_mean(state_, d, k), hyper_, rng_,
                                       config_.q_max_proposals);
    stats_.q_capped += qd.capped;
    state_.topic(k).q[d] = qd.value;
    state_.set_r(d, k, sample_r(state_, d, k, rng_));
    state_.topic(k).beta[d] = sample_beta(state_, hyper_, d, k, rng_);
  }

  void update_topic_body(std::size_t k) {
    for (std::size_t d = 0; d < state_.num_docs(); ++d) update_document_site(d, k);
    state_.topic(k).theta = sample_theta(state_, hyper_, k, rng_);
  }

  void sweep_truncated() {
    // w_{d,n,.} is one multinomial block shared by every topic, so it is
    // redrawn once per sweep ahead of the per-topic updates.
    resample_all_truncated(state_, rng_);
    for (std::size_t k = 0; k < state_.num_topics(); ++k) {
      update_topic_body(k);
      state_.topic(k).pi = sample_pi_truncated(state_, hyper_, k, rng_);
    }
  }

  void sweep_slice() {
    for (std::size_t c = 0; c < state_.num_cells(); ++c)
      stats_.atoms_appended += resample_cell_slice(state_, hyper_, c, rng_);
    for (std::size_t k = 0; k < state_.num_topics(); ++k) {
      update_topic_body(k);
      Topic& tp = state_.topic(k);
      tp.atom = sample_pi_slice(state_, hyper_, k, rng_);
      tp.atom.round = sample_dk(state_, hyper_, k, rng_);
      tp.pi = atom_weight(tp.atom);
    }
    prune_dormant_tail();
  }

  // Atoms outside every token's slice form a suffix of the atom list
  // (zeta is decreasing), so pruning only ever shortens the tail.
  void prune_dormant_tail() {
    double min_u = 1.0;
    for (std::size_t t = 0; t < state_.num_tokens(); ++t) min_u = std::min(min_u, state_.u(t));
    const std::size_t support = state_.num_tokens() > 0 ? hyper_.slice_support_size(min_u) : 0;
    for (std::size_t k = 0; k < state_.num_topics(); ++k) {
      Topic& tp = state_.topic(k);
      if (k < support || tp.total > 0)
        tp.dormant_sweeps = 0;
      else
        ++tp.dormant_sweeps;
    }
    std::size_t keep = state_.num_topics();
    while (keep > 1 && state_.topic(keep - 1).dormant_sweeps >= config_.prune_after) --keep;
    stats_.atoms_pruned += state_.num_topics() - keep;
    state_.truncate_topics(keep);
  }

  Snapshot snapshot(std::size_t iter, double loglik) const {
    Snapshot s;
    s.iter = iter;
    s.loglik = loglik;
    s.active = active_topics(state_);
    for (std::size_t k : s.active) {
      s.theta.push_back(state_.topic(k).theta);
      s.pi.push_back(state_.topic(k).pi);
    }
    return s;
  }

  const Corpus& corpus_;
  Hyperparameters hyper_;
  SamplerConfig config_;
  NeighborhoodIndex neighborhood_;
  Rng rng_;
  ModelState state_;
  ChainStats stats_;
};

}  // namespace

ChainResult run_truncated(const Corpus& corpus, const DocumentNetwork& network, const Hyperparameters& hyper,
                          const SamplerConfig& config, const SweepObserver& observer) {
  if (config.mode != SamplerMode::truncated) throw std::invalid_argument("run_truncated needs mode = truncated");
  return Chain(corpus, network, hyper, config).run(observer);
}

ChainResult run_slice(const Corpus& corpus, const DocumentNetwork& network, const Hyperparameters& hyper,
                      const SamplerConfig& config, const SweepObserver& observer) {
  if (config.mode != SamplerMode::slice) throw std::invalid_argument("run_slice needs mode = slice");
  return Chain(corpus, network, hyper, config).run(observer);
}

ChainResult run_chain(const Corpus& corpus, const DocumentNetwork& network, const Hyperparameters& hyper,
                      const SamplerConfig& config, const SweepObserver& observer) {
  return config.mode == SamplerMode::slice ? run_slice(corpus, network, hyper, config, observer)
                                           : run_truncated(corpus, network, hyper, config, observer);
}

}  // namespace nrt
