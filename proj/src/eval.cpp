#include "nrt/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nrt {

Matrix word_topic_distribution(const Matrix& theta) {
  if (theta.empty()) throw std::invalid_argument("no topics");
  const std::size_t K = theta.size();
  const std::size_t W = theta.front().size();
  Matrix out(W, std::vector<double>(K));
  for (std::size_t n = 0; n < W; ++n) {
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) total += theta[k].at(n);
    if (!(total > 0.0)) throw std::domain_error("word " + std::to_string(n) + " has zero mass under every topic");
    for (std::size_t k = 0; k < K; ++k) out[n][k] = theta[k][n] / total;
  }
  return out;
}

Matrix topic_rows(const ModelState& state, std::span<const std::size_t> topics) {
  Matrix out;
  out.reserve(topics.size());
  for (std::size_t k : topics) out.push_back(state.topic(k).theta);
  return out;
}

Matrix document_topic_proportions(const ModelState& state, std::span<const std::size_t> topics) {
  Matrix out(state.num_docs(), std::vector<double>(topics.size(), 0.0));
  for (std::size_t d = 0; d < state.num_docs(); ++d) {
    double total = 0.0;
    for (std::size_t i = 0; i < topics.size(); ++i) {
      const Topic& tp = state.topic(topics[i]);
      out[d][i] = tp.r[d] ? tp.pi * tp.beta[d] : 0.0;
      total += out[d][i];
    }
    if (total > 0.0)
      for (double& v : out[d]) v /= total;
  }
  return out;
}

namespace {

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (!(na > 0.0) || !(nb > 0.0)) return 0.0;
  return std::min(1.0, dot / std::sqrt(na * nb));
}

std::vector<char> membership(std::span<const std::size_t> docs, std::size_t D) {
  std::vector<char> in(D, 0);
  for (std::size_t d : docs) in.at(d) = 1;
  return in;
}

}  // namespace

LinkPredictionResult link_prediction_score(std::span<const std::size_t> test_docs,
                                           std::span<const std::size_t> train_docs,
                                           const DocumentNetwork& network, const Matrix& doc_topics,
                                           const Matrix& word_topics, const Corpus& corpus) {
  LinkPredictionResult res;
  const auto is_train = membership(train_docs, network.num_docs());
  for (std::size_t i : test_docs) {
    for (std::uint32_t j : network.neighbors(i)) {
      if (!is_train[j]) continue;
      ++res.links;
      for (const Cell& c : corpus.doc_cells(i)) {
        const double cs = cosine(doc_topics.at(j), word_topics.at(c.word));
        if (!(cs > 0.0)) {
          ++res.skipped_terms;
          continue;
        }
        res.score += c.count * std::log(cs);
      }
    }
  }
  return res;
}

WordPredictionResult word_prediction_score(std::span<const std::size_t> test_docs,
                                           std::span<const std::size_t> train_docs,
                                           const DocumentNetwork& network, const Matrix& doc_topics,
                                           const Matrix& theta, const Corpus& corpus) {
  WordPredictionResult res;
  const auto is_train = membership(train_docs, network.num_docs());
  const std::size_t K = theta.size();
  std::vector<double> interest(K);
  for (std::size_t i : test_docs) {
    std::fill(interest.begin(), interest.end(), 0.0);
    std::size_t neighbors = 0;
    for (std::uint32_t j : network.neighbors(i)) {
      if (!is_train[j]) continue;
      ++neighbors;
      for (std::size_t k = 0; k < K; ++k) interest[k] += doc_topics.at(j).at(k);
    }
    if (neighbors == 0) {
      ++res.excluded_docs;
      continue;
    }
    ++res.scored_docs;
    for (double& v : interest) v /= static_cast<double>(neighbors);
    for (const Cell& c : corpus.doc_cells(i)) {
      for (std::size_t k = 0; k < K; ++k) {
        double arg = interest[k] * theta[k].at(c.word);
        if (!(arg >= kWordPredictionFloor)) {
          arg = kWordPredictionFloor;
          ++res.floored_terms;
        }
        res.score += c.count * std::log(arg);
      }
    }
  }
  return res;
}

std::map<std::size_t, std::size_t> topic_count_histogram(const ChainTrace& trace, std::size_t burnin) {
  if (burnin >= trace.records.size()) throw std::invalid_argument("burn-in covers the whole trace");
  std::map<std::size_t, std::size_t> hist;
  for (std::size_t i = burnin; i < trace.records.size(); ++i) ++hist[trace.records[i].k_active];
  return hist;
}

double EvalReport::mean_k_active() const {
  double total = 0.0, n = 0.0;
  for (auto [k, c] : k_histogram) {
    total += static_cast<double>(k * c);
    n += static_cast<double>(c);
  }
  return n > 0.0 ? total / n : 0.0;
}

}  // namespace nrt
