#include "nrt/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace nrt {

DocumentNetwork::DocumentNetwork(std::size_t num_docs) : neighbors_(num_docs) {}

DocumentNetwork::DocumentNetwork(std::size_t num_docs, std::span<const Edge> edges) : neighbors_(num_docs) {
  for (const auto& [a, b] : edges) add_edge(a, b);
}

bool DocumentNetwork::add_edge(std::size_t a, std::size_t b) {
  if (a >= num_docs() || b >= num_docs()) throw std::out_of_range("edge endpoint out of range");
  if (a == b) return false;
  auto& na = neighbors_[a];
  auto it = std::lower_bound(na.begin(), na.end(), static_cast<std::uint32_t>(b));
  if (it != na.end() && *it == b) return false;
  na.insert(it, static_cast<std::uint32_t>(b));
  auto& nb = neighbors_[b];
  nb.insert(std::lower_bound(nb.begin(), nb.end(), static_cast<std::uint32_t>(a)), static_cast<std::uint32_t>(a));
  ++num_edges_;
  return true;
}

bool DocumentNetwork::has_edge(std::size_t a, std::size_t b) const {
  if (a >= num_docs() || b >= num_docs()) return false;
  const auto& na = neighbors_[a];
  return std::binary_search(na.begin(), na.end(), static_cast<std::uint32_t>(b));
}

std::vector<Edge> DocumentNetwork::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (std::size_t a = 0; a < neighbors_.size(); ++a)
    for (std::uint32_t b : neighbors_[a])
      if (a < b) out.emplace_back(a, b);
  return out;
}

DocumentNetwork DocumentNetwork::induced(std::span<const std::size_t> docs) const {
  std::vector<std::size_t> remap(num_docs(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < docs.size(); ++i) remap.at(docs[i]) = i;
  DocumentNetwork sub(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i)
    for (std::uint32_t nb : neighbors_[docs[i]])
      if (remap[nb] != static_cast<std::size_t>(-1)) sub.add_edge(i, remap[nb]);
  return sub;
}

}  // namespace nrt
