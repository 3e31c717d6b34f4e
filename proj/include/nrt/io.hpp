#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "nrt/corpus.hpp"
#include "nrt/network.hpp"
#include "nrt/sampler.hpp"

namespace nrt::io {

// All CSV files carry a header row, comma separators and a trailing newline.

/// doc,word,count
void write_corpus_csv(const std::filesystem::path& path, const Corpus& corpus);
/// src,dst with src < dst
void write_edges_csv(const std::filesystem::path& path, const DocumentNetwork& network);
/// iter,loglik,k_active
void write_trace_csv(const std::filesystem::path& path, const ChainTrace& trace);
/// k_active,count
void write_histogram_csv(const std::filesystem::path& path, const std::map<std::size_t, std::size_t>& hist);

/// Reads a triplet corpus. D and W are one past the largest indices seen
/// unless given explicitly (non-zero).
Corpus read_corpus_csv(const std::filesystem::path& path, std::size_t num_docs = 0, std::size_t vocab_size = 0);
DocumentNetwork read_edges_csv(const std::filesystem::path& path, std::size_t num_docs);

/// 64-bit FNV-1a over the canonical (doc, word, count) triplets and edges,
/// as 16 hex digits.
std::string dataset_fingerprint(const Corpus& corpus, const DocumentNetwork& network);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace nrt::io
