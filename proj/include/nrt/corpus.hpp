#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nrt {

/// One nonzero entry of the document-by-word count matrix.
struct Cell {
  std::uint32_t doc = 0;
  std::uint32_t word = 0;
  std::uint32_t count = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Sparse document-by-word count matrix. Cells are kept sorted by
/// (doc, word); zero counts are never stored.
class Corpus {
 public:
  Corpus() = default;

  /// Zero-count cells are dropped. Throws std::invalid_argument on an
  /// out-of-range index or a repeated (doc, word) key.
  Corpus(std::size_t num_docs, std::size_t vocab_size, std::vector<Cell> cells);

  std::size_t num_docs() const { return num_docs_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t num_cells() const { return cells_.size(); }
  std::uint64_t total_count() const { return total_; }

  std::span<const Cell> cells() const { return cells_; }
  std::span<const Cell> doc_cells(std::size_t d) const;
  /// Index range of document d's cells inside cells().
  std::size_t doc_begin(std::size_t d) const { return doc_offsets_.at(d); }
  std::size_t doc_end(std::size_t d) const { return doc_offsets_.at(d + 1); }

  /// w_{d,n}; zero for absent entries. Throws std::out_of_range.
  std::uint32_t count(std::size_t d, std::size_t n) const;
  /// Position of (d, n) in cells(), or npos when absent.
  std::size_t find_cell(std::size_t d, std::size_t n) const;
  std::uint64_t doc_length(std::size_t d) const;

  /// Restriction to `docs`, renumbered 0..docs.size()-1 in the given order.
  Corpus subset(std::span<const std::size_t> docs) const;

  // Opaque metadata carried through from loaders.
  std::vector<std::string> vocab;
  std::vector<std::string> doc_ids;
  std::vector<std::string> labels;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t num_docs_ = 0;
  std::size_t vocab_size_ = 0;
  std::uint64_t total_ = 0;
  std::vector<Cell> cells_;
  std::vector<std::size_t> doc_offsets_{0};
};

}  // namespace nrt
