#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrt/corpus.hpp"
#include "nrt/network.hpp"

namespace nrt {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// What the loader saw while reading a content/cites pair.
struct LoadReport {
  std::size_t citation_records = 0;  // non-blank lines of the cites file
  std::size_t unknown_endpoint = 0;  // records naming an id absent from content
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;        // records repeating an existing undirected edge
};

struct CitationDataset {
  Corpus corpus;
  DocumentNetwork network;
  LoadReport report;
};

/// Reads the LINQS layout: content lines `<id> <W word values> <label>`,
/// cites lines `<target_id> <source_id>`. Citation direction is dropped.
CitationDataset load_citation_dataset(const std::filesystem::path& content_path,
                                      const std::filesystem::path& cites_path);

struct SyntheticGroundTruth {
  std::size_t true_K = 0;
  std::vector<std::vector<double>> topics;        // K x W
  std::vector<std::vector<double>> doc_interest;  // D x K
  std::vector<std::size_t> doc_lengths;
  double link_threshold = 0.2;
};

struct SyntheticDataset {
  Corpus corpus;
  DocumentNetwork network;
  SyntheticGroundTruth truth;
};

/// K topics ~ Dirichlet(1) over W words; D interests ~ Dirichlet(1) over K;
/// N_d uniform on [ceil(N/2), N]; each token draws a topic from the
/// document's interest and then a word from that topic. Documents i < j are
/// linked when their interests' inner product exceeds 0.2.
SyntheticDataset generate_synthetic(std::size_t K, std::size_t D, std::size_t W, std::size_t N, std::uint64_t seed);

struct FoldSplit {
  std::size_t num_folds = 0;
  std::vector<std::size_t> fold_of;  // document -> fold in [1, num_folds]

  std::vector<std::size_t> test_docs(std::size_t fold) const;
  std::vector<std::size_t> train_docs(std::size_t fold) const;
};

/// Random partition into F folds whose sizes differ by at most one.
FoldSplit kfold_split(std::size_t D, std::size_t F, std::uint64_t seed);

}  // namespace nrt
