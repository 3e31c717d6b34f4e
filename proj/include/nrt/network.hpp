#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace nrt {

using Edge = std::pair<std::size_t, std::size_t>;

/// Undirected, self-loop-free link structure over documents.
class DocumentNetwork {
 public:
  DocumentNetwork() = default;
  explicit DocumentNetwork(std::size_t num_docs);
  /// Self-loops and repeated pairs in `edges` are ignored.
  DocumentNetwork(std::size_t num_docs, std::span<const Edge> edges);

  /// Returns false (and changes nothing) for a self-loop or an existing edge.
  /// Throws std::out_of_range for an unknown document.
  bool add_edge(std::size_t a, std::size_t b);

  std::size_t num_docs() const { return neighbors_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  bool has_edge(std::size_t a, std::size_t b) const;
  std::span<const std::uint32_t> neighbors(std::size_t d) const { return neighbors_.at(d); }
  std::size_t degree(std::size_t d) const { return neighbors_.at(d).size(); }

  /// Edges as (i, j) with i < j, in lexicographic order.
  std::vector<Edge> edges() const;

  /// Subgraph induced by `docs`, renumbered in the given order.
  DocumentNetwork induced(std::span<const std::size_t> docs) const;

 private:
  std::vector<std::vector<std::uint32_t>> neighbors_;
  std::size_t num_edges_ = 0;
};

}  // namespace nrt
