#include "nrt/corpus.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace nrt {

Corpus::Corpus(std::size_t num_docs, std::size_t vocab_size, std::vector<Cell> cells)
    : num_docs_(num_docs), vocab_size_(vocab_size) {
  std::erase_if(cells, [](const Cell& c) { return c.count == 0; });
  for (const Cell& c : cells) {
    if (c.doc >= num_docs || c.word >= vocab_size)
      throw std::invalid_argument("corpus cell (" + std::to_string(c.doc) + ", " + std::to_string(c.word) +
                                  ") out of range");
  }
  std::sort(cells.begin(), cells.end(),
            [](const Cell& a, const Cell& b) { return a.doc != b.doc ? a.doc < b.doc : a.word < b.word; });
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (cells[i].doc == cells[i - 1].doc && cells[i].word == cells[i - 1].word)
      throw std::invalid_argument("corpus cell (" + std::to_string(cells[i].doc) + ", " +
                                  std::to_string(cells[i].word) + ") given twice");
  }
  cells_ = std::move(cells);
  doc_offsets_.assign(num_docs + 1, 0);
  for (const Cell& c : cells_) {
    ++doc_offsets_[c.doc + 1];
    total_ += c.count;
  }
  for (std::size_t d = 0; d < num_docs; ++d) doc_offsets_[d + 1] += doc_offsets_[d];
}

std::span<const Cell> Corpus::doc_cells(std::size_t d) const {
  if (d >= num_docs_) throw std::out_of_range("document index out of range");
  return std::span<const Cell>(cells_).subspan(doc_offsets_[d], doc_offsets_[d + 1] - doc_offsets_[d]);
}

std::size_t Corpus::find_cell(std::size_t d, std::size_t n) const {
  if (d >= num_docs_ || n >= vocab_size_) throw std::out_of_range("corpus index out of range");
  auto first = cells_.begin() + static_cast<std::ptrdiff_t>(doc_offsets_[d]);
  auto last = cells_.begin() + static_cast<std::ptrdiff_t>(doc_offsets_[d + 1]);
  auto it = std::lower_bound(first, last, n, [](const Cell& c, std::size_t w) { return c.word < w; });
  if (it == last || it->word != n) return npos;
  return static_cast<std::size_t>(it - cells_.begin());
}

std::uint32_t Corpus::count(std::size_t d, std::size_t n) const {
  const std::size_t c = find_cell(d, n);
  return c == npos ? 0 : cells_[c].count;
}

std::uint64_t Corpus::doc_length(std::size_t d) const {
  std::uint64_t total = 0;
  for (const Cell& c : doc_cells(d)) total += c.count;
  return total;
}

Corpus Corpus::subset(std::span<const std::size_t> docs) const {
  std::vector<Cell> out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (Cell c : doc_cells(docs[i])) {
      c.doc = static_cast<std::uint32_t>(i);
      out.push_back(c);
    }
  }
  Corpus sub(docs.size(), vocab_size_, std::move(out));
  sub.vocab = vocab;
  for (std::size_t d : docs) {
    if (!doc_ids.empty()) sub.doc_ids.push_back(doc_ids.at(d));
    if (!labels.empty()) sub.labels.push_back(labels.at(d));
  }
  return sub;
}

}  // namespace nrt
