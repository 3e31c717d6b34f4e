#include "nrt/model_state.hpp"

#include <algorithm>
#include <stdexcept>

namespace nrt {

const char* to_string(SamplerMode mode) { return mode == SamplerMode::slice ? "slice" : "truncated"; }

ModelState::ModelState(const Corpus& corpus, SamplerMode mode)
    : mode_(mode), num_docs_(corpus.num_docs()), vocab_size_(corpus.vocab_size()) {
  cells_.assign(corpus.cells().begin(), corpus.cells().end());
  doc_offsets_.resize(num_docs_ + 1);
  for (std::size_t d = 0; d <= num_docs_; ++d) doc_offsets_[d] = d < num_docs_ ? corpus.doc_begin(d) : cells_.size();
  token_offsets_.resize(cells_.size() + 1, 0);
  for (std::size_t c = 0; c < cells_.size(); ++c) token_offsets_[c + 1] = token_offsets_[c] + cells_[c].count;
  token_cell_.resize(token_offsets_.back());
  for (std::size_t c = 0; c < cells_.size(); ++c)
    std::fill(token_cell_.begin() + static_cast<std::ptrdiff_t>(token_offsets_[c]),
              token_cell_.begin() + static_cast<std::ptrdiff_t>(token_offsets_[c + 1]), static_cast<std::uint32_t>(c));
  z_.assign(token_cell_.size(), kUnassigned);
  if (mode == SamplerMode::slice) u_.assign(token_cell_.size(), 0.0);
  retained_.assign(num_docs_, 0);
}

void ModelState::set_r(std::size_t d, std::size_t k, bool value) {
  auto& slot = topics_.at(k).r.at(d);
  if ((slot != 0) == value) return;
  slot = value ? 1 : 0;
  if (value)
    ++retained_[d];
  else
    --retained_[d];
}

std::size_t ModelState::find_cell(std::size_t d, std::size_t n) const {
  if (d >= num_docs_ || n >= vocab_size_) throw std::out_of_range("state index out of range");
  auto first = cells_.begin() + static_cast<std::ptrdiff_t>(doc_offsets_[d]);
  auto last = cells_.begin() + static_cast<std::ptrdiff_t>(doc_offsets_[d + 1]);
  auto it = std::lower_bound(first, last, n, [](const Cell& c, std::size_t w) { return c.word < w; });
  if (it == last || it->word != n) return Corpus::npos;
  return static_cast<std::size_t>(it - cells_.begin());
}

void ModelState::assign(std::size_t t, std::uint32_t k) {
  const std::uint32_t old = z_.at(t);
  if (old == k) return;
  if (k != kUnassigned && k >= topics_.size()) throw std::out_of_range("topic index out of range");
  const Cell& c = cells_[token_cell_[t]];
  if (old != kUnassigned) {
    Topic& from = topics_[old];
    --from.doc_counts[c.doc];
    --from.word_counts[c.word];
    --from.total;
  }
  if (k != kUnassigned) {
    Topic& to = topics_[k];
    ++to.doc_counts[c.doc];
    ++to.word_counts[c.word];
    ++to.total;
  }
  z_[t] = k;
}

std::uint32_t ModelState::allocation(std::size_t d, std::size_t n, std::size_t k) const {
  if (k >= topics_.size()) throw std::out_of_range("topic index out of range");
  const std::size_t c = find_cell(d, n);
  if (c == Corpus::npos) return 0;
  std::uint32_t count = 0;
  for (std::size_t t = token_offsets_[c]; t < token_offsets_[c + 1]; ++t) count += (z_[t] == k);
  return count;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> ModelState::cell_allocation(std::size_t c) const {
  std::vector<std::uint32_t> labels(z_.begin() + static_cast<std::ptrdiff_t>(token_offsets_.at(c)),
                                    z_.begin() + static_cast<std::ptrdiff_t>(token_offsets_.at(c + 1)));
  std::sort(labels.begin(), labels.end());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t k : labels) {
    if (k == kUnassigned) continue;
    if (out.empty() || out.back().first != k)
      out.emplace_back(k, 1);
    else
      ++out.back().second;
  }
  return out;
}

std::size_t ModelState::add_topic(Topic topic) {
  if (topic.theta.size() != vocab_size_ || topic.q.size() != num_docs_ || topic.r.size() != num_docs_ ||
      topic.beta.size() != num_docs_)
    throw std::invalid_argument("topic dimensions do not match the state");
  topic.doc_counts.assign(num_docs_, 0);
  topic.word_counts.assign(vocab_size_, 0);
  topic.total = 0;
  for (std::size_t d = 0; d < num_docs_; ++d) retained_[d] += topic.r[d] != 0;
  topics_.push_back(std::move(topic));
  return topics_.size() - 1;
}

void ModelState::truncate_topics(std::size_t new_size) {
  for (std::size_t k = new_size; k < topics_.size(); ++k)
    if (topics_[k].total != 0) throw std::logic_error("cannot drop a topic that owns tokens");
  for (std::size_t k = new_size; k < topics_.size(); ++k)
    for (std::size_t d = 0; d < num_docs_; ++d) retained_[d] -= topics_[k].r[d] != 0;
  if (new_size < topics_.size()) topics_.resize(new_size);
}

void ModelState::recount() {
  std::fill(retained_.begin(), retained_.end(), 0);
  for (Topic& tp : topics_) {
    tp.doc_counts.assign(num_docs_, 0);
    tp.word_counts.assign(vocab_size_, 0);
    tp.total = 0;
    for (std::size_t d = 0; d < num_docs_; ++d) retained_[d] += tp.r[d] != 0;
  }
  for (std::size_t t = 0; t < z_.size(); ++t) {
    if (z_[t] == kUnassigned) continue;
    Topic& tp = topics_.at(z_[t]);
    const Cell& c = cells_[token_cell_[t]];
    ++tp.doc_counts[c.doc];
    ++tp.word_counts[c.word];
    ++tp.total;
  }
}

}  // namespace nrt
