#include "nrt/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "nrt/random.hpp"

namespace nrt {

ParseError::ParseError(const std::string& file, std::size_t line, const std::string& what)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(std::move(tok));
  return out;
}

}  // namespace

CitationDataset load_citation_dataset(const std::filesystem::path& content_path,
                                      const std::filesystem::path& cites_path) {
  std::ifstream content(content_path);
  if (!content) throw std::runtime_error("cannot open " + content_path.string());
  std::ifstream cites(cites_path);
  if (!cites) throw std::runtime_error("cannot open " + cites_path.string());

  const std::string cname = content_path.string();
  std::vector<Cell> cells;
  std::vector<std::string> ids, labels;
  std::unordered_map<std::string, std::size_t> index;
  std::size_t width = 0;
  std::size_t lineno = 0;
  for (std::string line; std::getline(content, line);) {
    ++lineno;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() < 3) throw ParseError(cname, lineno, "expected <id> <word values> <label>");
    const std::size_t w = fields.size() - 2;
    if (width == 0)
      width = w;
    else if (w != width)
      throw ParseError(cname, lineno,
                       "vocabulary width " + std::to_string(w) + " differs from " + std::to_string(width));
    if (!index.emplace(fields.front(), ids.size()).second)
      throw ParseError(cname, lineno, "duplicate document id " + fields.front());
    const auto d = static_cast<std::uint32_t>(ids.size());
    for (std::size_t n = 0; n < w; ++n) {
      const std::string& f = fields[n + 1];
      std::size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(f, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != f.size() || f.empty() || f[0] == '-')
        throw ParseError(cname, lineno, "word value '" + f + "' is not a nonnegative integer");
      if (v > 0) cells.push_back({d, static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(v)});
    }
    ids.push_back(fields.front());
    labels.push_back(fields.back());
  }

  CitationDataset out;
  out.corpus = Corpus(ids.size(), width, std::move(cells));
  out.corpus.doc_ids = std::move(ids);
  out.corpus.labels = std::move(labels);
  out.network = DocumentNetwork(out.corpus.num_docs());

  const std::string sname = cites_path.string();
  lineno = 0;
  for (std::string line; std::getline(cites, line);) {
    ++lineno;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() != 2) throw ParseError(sname, lineno, "expected <target_id> <source_id>");
    ++out.report.citation_records;
    auto a = index.find(fields[0]);
    auto b = index.find(fields[1]);
    if (a == index.end() || b == index.end()) {
      ++out.report.unknown_endpoint;
      continue;
    }
    if (a->second == b->second) {
      ++out.report.self_loops;
      continue;
    }
    if (!out.network.add_edge(a->second, b->second)) ++out.report.duplicates;
  }
  return out;
}

SyntheticDataset generate_synthetic(std::size_t K, std::size_t D, std::size_t W, std::size_t N, std::uint64_t seed) {
  if (K == 0 || D == 0 || W == 0 || N == 0) throw std::invalid_argument("K, D, W and N must be at least 1");
  Rng rng(seed);
  SyntheticDataset out;
  SyntheticGroundTruth& truth = out.truth;
  truth.true_K = K;
  const std::vector<double> ones_w(W, 1.0), ones_k(K, 1.0);
  for (std::size_t k = 0; k < K; ++k) truth.topics.push_back(dirichlet_variate(ones_w, rng));
  for (std::size_t d = 0; d < D; ++d) truth.doc_interest.push_back(dirichlet_variate(ones_k, rng));

  const std::size_t min_len = (N + 1) / 2;
  std::uniform_int_distribution<std::size_t> length(min_len, N);
  std::vector<std::vector<double>> topic_cdf(K);
  for (std::size_t k = 0; k < K; ++k) {
    topic_cdf[k].resize(W);
    std::partial_sum(truth.topics[k].begin(), truth.topics[k].end(), topic_cdf[k].begin());
  }
  std::vector<Cell> cells;
  std::vector<std::uint32_t> counts(W);
  std::vector<double> interest_cdf(K);
  for (std::size_t d = 0; d < D; ++d) {
    const std::size_t len = length(rng);
    truth.doc_lengths.push_back(len);
    std::partial_sum(truth.doc_interest[d].begin(), truth.doc_interest[d].end(), interest_cdf.begin());
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t m = 0; m < len; ++m) {
      const std::size_t k = categorical_from_cumulative(interest_cdf, rng);
      ++counts[categorical_from_cumulative(topic_cdf[k], rng)];
    }
    for (std::size_t n = 0; n < W; ++n)
      if (counts[n] > 0) cells.push_back({static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(n), counts[n]});
  }
  out.corpus = Corpus(D, W, std::move(cells));

  out.network = DocumentNetwork(D);
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = i + 1; j < D; ++j) {
      const double dot = std::inner_product(truth.doc_interest[i].begin(), truth.doc_interest[i].end(),
                                            truth.doc_interest[j].begin(), 0.0);
      if (dot > truth.link_threshold) out.network.add_edge(i, j);
    }
  return out;
}

std::vector<std::size_t> FoldSplit::test_docs(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d < fold_of.size(); ++d)
    if (fold_of[d] == fold) out.push_back(d);
  return out;
}

std::vector<std::size_t> FoldSplit::train_docs(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d < fold_of.size(); ++d)
    if (fold_of[d] != fold) out.push_back(d);
  return out;
}

FoldSplit kfold_split(std::size_t D, std::size_t F, std::uint64_t seed) {
  if (F < 2) throw std::invalid_argument("need at least two folds");
  if (D < F) throw std::invalid_argument("fewer documents than folds");
  std::vector<std::size_t> order(D);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  // Fisher-Yates with our own index draws so the split does not depend on
  // the standard library's shuffle implementation.
  for (std::size_t i = D; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_open(rng) * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(j, i - 1)]);
  }
  FoldSplit split;
  split.num_folds = F;
  split.fold_of.resize(D);
  for (std::size_t pos = 0; pos < D; ++pos) split.fold_of[order[pos]] = pos % F + 1;
  return split;
}

}  // namespace nrt
