#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "nrt/corpus.hpp"
#include "nrt/model_state.hpp"
#include "nrt/network.hpp"
#include "nrt/sampler.hpp"

namespace nrt {

using Matrix = std::vector<std::vector<double>>;

/// W x K matrix with W_{n,k} = theta_{k,n} / sum_l theta_{l,n}, from a
/// K x W topic matrix. Throws std::domain_error naming the first word whose
/// column is all zero.
Matrix word_topic_distribution(const Matrix& theta);

/// Rows of theta for the given topics.
Matrix topic_rows(const ModelState& state, std::span<const std::size_t> topics);

/// D x |topics| matrix of normalised r_{d,k} pi_k beta_{d,k}. A document
/// that retains none of the topics gets an all-zero row.
Matrix document_topic_proportions(const ModelState& state, std::span<const std::size_t> topics);

struct LinkPredictionResult {
  double score = 0.0;
  std::size_t links = 0;          // test-train links visited
  std::size_t skipped_terms = 0;  // cosine undefined or zero
};

/// Sum over test-train links (i, j) of sum_n N_n^i log cos(T_j, W_n).
/// `doc_topics` is indexed by document id; only training rows are read.
LinkPredictionResult link_prediction_score(std::span<const std::size_t> test_docs,
                                           std::span<const std::size_t> train_docs,
                                           const DocumentNetwork& network, const Matrix& doc_topics,
                                           const Matrix& word_topics, const Corpus& corpus);

struct WordPredictionResult {
  double score = 0.0;
  std::size_t scored_docs = 0;
  std::size_t excluded_docs = 0;  // test documents without a training neighbour
  std::size_t floored_terms = 0;  // log arguments raised to kWordPredictionFloor
};

inline constexpr double kWordPredictionFloor = 1e-300;

/// sum over test docs i, words n, topics k of N_n^i log(T_{i,k} theta_{k,n}),
/// where T_i averages the topic rows of i's training neighbours.
WordPredictionResult word_prediction_score(std::span<const std::size_t> test_docs,
                                           std::span<const std::size_t> train_docs,
                                           const DocumentNetwork& network, const Matrix& doc_topics,
                                           const Matrix& theta, const Corpus& corpus);

/// Counts of K_active over iterations after the first `burnin`.
std::map<std::size_t, std::size_t> topic_count_histogram(const ChainTrace& trace, std::size_t burnin);

struct EvalReport {
  std::size_t fold_id = 0;
  double lp_score = 0.0;
  double wp_score = 0.0;
  std::map<std::size_t, std::size_t> k_histogram;
  std::vector<std::pair<std::size_t, double>> loglik_trace;
  LinkPredictionResult lp_detail;
  WordPredictionResult wp_detail;

  double mean_k_active() const;
};

}  // namespace nrt
