#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "nrt/corpus.hpp"
#include "nrt/hyperparameters.hpp"
#include "nrt/model_state.hpp"
#include "nrt/network.hpp"

namespace nrt::cli {

inline constexpr const char* kSoftwareVersion = "0.1.0";

struct GenerateOptions {
  std::size_t K = 3;
  std::size_t D = 50;
  std::size_t W = 40;
  std::size_t N = 100;
  std::uint64_t seed = 1;
  std::filesystem::path out;
};

/// Either a LINQS content/cites pair or a directory written by cmd_generate.
struct DataSource {
  std::filesystem::path content;
  std::filesystem::path cites;
  std::filesystem::path synthetic_dir;
};

struct LoadedData {
  Corpus corpus;
  DocumentNetwork network;
  std::string fingerprint;
};

/// Throws std::invalid_argument unless exactly one source kind is given.
LoadedData load_source(const DataSource& source);

struct ChainOptions {
  SamplerMode sampler = SamplerMode::truncated;
  std::size_t iters = 1000;
  std::size_t burnin = 100;
  std::uint64_t seed = 1;
  Hyperparameters hyper;
  bool check_invariants = true;
};

struct FitOptions {
  DataSource source;
  ChainOptions chain;
  std::filesystem::path out;
};

struct EvalOptions {
  DataSource source;
  ChainOptions chain;
  std::size_t folds = 5;
  std::size_t threads = 1;
  std::filesystem::path out;
};

/// corpus.csv, edges.csv, ground_truth.json, manifest.json
void cmd_generate(const GenerateOptions& options);

/// trace.csv, posterior.json, k_histogram.csv, manifest.json. On failure the
/// manifest is still written with status "failed" and the error, then the
/// exception propagates.
void cmd_fit(const FitOptions& options);

/// fold_<i>.json for i = 1..folds, aggregate.csv, manifest.json.
void cmd_eval(const EvalOptions& options);

/// Chain seed for one fold, so folds draw from unrelated streams.
std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold);

}  // namespace nrt::cli
