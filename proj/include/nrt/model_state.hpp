#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nrt/corpus.hpp"

namespace nrt {

enum class SamplerMode { truncated, slice };

const char* to_string(SamplerMode mode);

/// Gamma-process construction variables of one atom: pi = E * exp(-T),
/// with `round` the index of the Poisson round the atom belongs to.
struct SliceAtom {
  double E = 1.0;
  double T = 0.0;
  std::uint32_t round = 1;
};

/// Everything indexed by one topic (atom) k. Per-document vectors have
/// length D, per-word vectors length W.
struct Topic {
  std::vector<double> theta;
  double pi = 1.0;
  std::vector<double> q;
  std::vector<std::uint8_t> r;
  std::vector<double> beta;
  SliceAtom atom;

  // Allocation summaries, kept in sync by ModelState::assign.
  std::vector<std::uint32_t> doc_counts;   // w_{d,.,k}
  std::vector<std::uint32_t> word_counts;  // w_{.,n,k}
  std::uint64_t total = 0;                 // w_{.,.,k}

  std::uint32_t dormant_sweeps = 0;
};

/// Latent variables of one chain.
///
/// Each unit of an observed count w_{d,n} is a token with its own topic
/// label z; w_{d,n,k} is the number of tokens of cell (d,n) labelled k.
/// In slice mode every token also carries its slice variable u.
class ModelState {
 public:
  static constexpr std::uint32_t kUnassigned = 0xffffffffu;

  ModelState() = default;
  ModelState(const Corpus& corpus, SamplerMode mode);

  SamplerMode mode() const { return mode_; }
  std::size_t num_docs() const { return num_docs_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t num_topics() const { return topics_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_tokens() const { return z_.size(); }

  Topic& topic(std::size_t k) { return topics_.at(k); }
  const Topic& topic(std::size_t k) const { return topics_.at(k); }
  std::span<const Topic> topics() const { return topics_; }

  double theta(std::size_t k, std::size_t n) const { return topics_.at(k).theta.at(n); }
  double pi(std::size_t k) const { return topics_.at(k).pi; }
  double q(std::size_t d, std::size_t k) const { return topics_.at(k).q.at(d); }
  bool r(std::size_t d, std::size_t k) const { return topics_.at(k).r.at(d) != 0; }
  double beta(std::size_t d, std::size_t k) const { return topics_.at(k).beta.at(d); }

  void set_r(std::size_t d, std::size_t k, bool value);
  /// Number of topics with r_{d,k} = 1.
  std::size_t retained_topics(std::size_t d) const { return retained_.at(d); }

  const Cell& cell(std::size_t c) const { return cells_.at(c); }
  std::span<const Cell> cells() const { return cells_; }
  std::size_t doc_cell_begin(std::size_t d) const { return doc_offsets_.at(d); }
  std::size_t doc_cell_end(std::size_t d) const { return doc_offsets_.at(d + 1); }
  /// Index of cell (d, n), or Corpus::npos when w_{d,n} = 0.
  std::size_t find_cell(std::size_t d, std::size_t n) const;

  std::size_t cell_token_begin(std::size_t c) const { return token_offsets_.at(c); }
  std::size_t cell_token_end(std::size_t c) const { return token_offsets_.at(c + 1); }
  std::size_t token_cell(std::size_t t) const { return token_cell_.at(t); }

  std::uint32_t z(std::size_t t) const { return z_.at(t); }
  /// Relabels token t, keeping every topic's count summaries current.
  void assign(std::size_t t, std::uint32_t k);

  double u(std::size_t t) const { return u_.at(t); }
  void set_u(std::size_t t, double value) { u_.at(t) = value; }

  /// w_{d,n,k}.
  std::uint32_t allocation(std::size_t d, std::size_t n, std::size_t k) const;
  /// Nonzero (k, w_{d,n,k}) pairs of cell c, ascending in k.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cell_allocation(std::size_t c) const;

  /// Appends a topic. Vector fields must already have length D or W; the
  /// count summaries are reset. Returns the new topic's index.
  std::size_t add_topic(Topic topic);
  /// Drops topics k >= new_size. Throws std::logic_error if any of them
  /// still owns a token.
  void truncate_topics(std::size_t new_size);

  /// Rebuilds count summaries and retained-topic tallies from z and r.
  void recount();

 private:
  SamplerMode mode_ = SamplerMode::truncated;
  std::size_t num_docs_ = 0;
  std::size_t vocab_size_ = 0;
  std::vector<Topic> topics_;
  std::vector<Cell> cells_;
  std::vector<std::size_t> doc_offsets_;
  std::vector<std::size_t> token_offsets_;
  std::vector<std::uint32_t> token_cell_;
  std::vector<std::uint32_t> z_;
  std::vector<double> u_;
  std::vector<std::size_t> retained_;
};

}  // namespace nrt
