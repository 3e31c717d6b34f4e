#include "nrt/cli.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include <json.hpp>

#include "nrt/data.hpp"
#include "nrt/eval.hpp"
#include "nrt/io.hpp"
#include "nrt/likelihood.hpp"
#include "nrt/sampler.hpp"

namespace nrt::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << j.dump(2) << '\n';
  os.flush();
  if (!os) throw std::runtime_error("error while writing " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
}

void ensure_dir(const fs::path& dir) {
  if (dir.empty()) throw std::invalid_argument("an output directory is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());
}

json hyper_json(const Hyperparameters& h) {
  return {{"a0", h.a0},
          {"c0", h.c0},
          {"b0", h.b0},
          {"alpha", h.alpha},
          {"alpha0", h.alpha0},
          {"gamma", h.gamma_mass},
          {"trunc_K", h.truncation_K},
          {"zeta_base", h.zeta_base},
          {"zeta_ratio", h.zeta_ratio}};
}

json source_json(const DataSource& s) {
  return {{"data", s.content.string()}, {"cites", s.cites.string()}, {"synthetic_dir", s.synthetic_dir.string()}};
}

json chain_json(const ChainOptions& c) {
  return {{"sampler", to_string(c.sampler)},
          {"iters", c.iters},
          {"burnin", c.burnin},
          {"seed", c.seed},
          {"check_invariants", c.check_invariants},
          {"hyperparameters", hyper_json(c.hyper)}};
}

// Collects everything the manifest needs while a command runs.
struct Manifest {
  json doc;
  std::vector<std::string> outputs;

  Manifest(const std::string& command, json config) {
    doc["command"] = command;
    doc["software_version"] = kSoftwareVersion;
    doc["started_at"] = utc_timestamp();
    doc["config"] = std::move(config);
  }

  void finish(const fs::path& dir, const std::string& status, const std::string& error = {}) {
    doc["finished_at"] = utc_timestamp();
    doc["status"] = status;
    doc["partial"] = status != "complete";
    if (!error.empty()) doc["error"] = error;
    outputs.push_back("manifest.json");
    doc["outputs"] = outputs;
    write_json(dir / "manifest.json", doc);
  }
};

// Runs `body`; on failure the manifest records the error and what was
// written before it, then the exception continues.
template <class Body>
void with_manifest(const fs::path& dir, Manifest& manifest, Body&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    try {
      manifest.finish(dir, "failed", e.what());
    } catch (...) {
    }
    throw;
  }
  manifest.finish(dir, "complete");
}

SamplerConfig make_config(const ChainOptions& c, std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.max_iter = c.iters;
  cfg.burnin = c.burnin;
  cfg.seed = seed;
  cfg.mode = c.sampler;
  cfg.check_invariants = c.check_invariants;
  if (cfg.max_iter == 0) throw std::invalid_argument("--iters must be at least 1");
  cfg.validate();
  c.hyper.validate();
  return cfg;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

json posterior_json(const ChainResult& result, const SamplerConfig& cfg) {
  json j;
  j["sampler"] = to_string(cfg.mode);
  j["iterations"] = cfg.max_iter;
  j["burnin"] = cfg.burnin;
  j["note"] =
      "topic labels are not aligned across snapshots; snapshots report K_active and log-likelihood only, "
      "theta, pi and document proportions describe the final state";
  json snaps = json::array();
  double k_sum = 0.0;
  for (const Snapshot& s : result.snapshots) {
    snaps.push_back({{"iter", s.iter}, {"loglik", s.loglik}, {"k_active", s.active.size()}});
    k_sum += static_cast<double>(s.active.size());
  }
  j["snapshots"] = snaps;
  j["snapshot_mean_k_active"] = result.snapshots.empty() ? 0.0 : k_sum / static_cast<double>(result.snapshots.size());

  const std::vector<std::size_t> active = active_topics(result.state);
  json fin;
  fin["active_topics"] = active;
  std::vector<double> pi;
  for (std::size_t k : active) pi.push_back(result.state.topic(k).pi);
  fin["pi"] = pi;
  fin["theta"] = matrix_json(topic_rows(result.state, active));
  fin["doc_topic_proportions"] = matrix_json(document_topic_proportions(result.state, active));
  j["final_state"] = fin;
  j["stats"] = {{"q_capped", result.stats.q_capped},
                {"atoms_appended", result.stats.atoms_appended},
                {"atoms_pruned", result.stats.atoms_pruned}};
  return j;
}

json histogram_json(const std::map<std::size_t, std::size_t>& hist) {
  json out = json::object();
  for (auto [k, c] : hist) out[std::to_string(k)] = c;
  return out;
}

EvalReport run_fold(const LoadedData& data, const FoldSplit& split, std::size_t fold, const ChainOptions& chain) {
  const std::vector<std::size_t> test = split.test_docs(fold);
  const std::vector<std::size_t> train = split.train_docs(fold);
  const Corpus train_corpus = data.corpus.subset(train);
  const DocumentNetwork train_net = data.network.induced(train);
  const SamplerConfig cfg = make_config(chain, fold_seed(chain.seed, fold));
  const ChainResult result = run_chain(train_corpus, train_net, chain.hyper, cfg);

  const std::vector<std::size_t> active = active_topics(result.state);
  const Matrix theta = topic_rows(result.state, active);
  const Matrix local = document_topic_proportions(result.state, active);
  Matrix doc_topics(data.corpus.num_docs(), std::vector<double>(active.size(), 0.0));
  for (std::size_t i = 0; i < train.size(); ++i) doc_topics[train[i]] = local[i];

  EvalReport report;
  report.fold_id = fold;
  report.lp_detail =
      link_prediction_score(test, train, data.network, doc_topics, word_topic_distribution(theta), data.corpus);
  report.wp_detail = word_prediction_score(test, train, data.network, doc_topics, theta, data.corpus);
  report.lp_score = report.lp_detail.score;
  report.wp_score = report.wp_detail.score;
  report.k_histogram = topic_count_histogram(result.trace, cfg.burnin);
  for (const TraceRecord& r : result.trace.records) report.loglik_trace.emplace_back(r.iter, r.loglik);
  return report;
}

json report_json(const EvalReport& r, std::uint64_t seed, std::size_t n_test, std::size_t n_train) {
  json trace = json::array();
  for (auto [it, ll] : r.loglik_trace) trace.push_back({it, ll});
  return {{"fold_id", r.fold_id},
          {"seed", seed},
          {"test_docs", n_test},
          {"train_docs", n_train},
          {"lp_score", r.lp_score},
          {"wp_score", r.wp_score},
          {"mean_k_active", r.mean_k_active()},
          {"k_histogram", histogram_json(r.k_histogram)},
          {"loglik_trace", trace},
          {"lp_detail", {{"links", r.lp_detail.links}, {"skipped_terms", r.lp_detail.skipped_terms}}},
          {"wp_detail",
           {{"scored_docs", r.wp_detail.scored_docs},
            {"excluded_docs", r.wp_detail.excluded_docs},
            {"floored_terms", r.wp_detail.floored_terms}}}};
}

}  // namespace

std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold) {
  // splitmix64 finaliser over (seed, fold)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (fold + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

LoadedData load_source(const DataSource& source) {
  const bool linqs = !source.content.empty() || !source.cites.empty();
  const bool synthetic = !source.synthetic_dir.empty();
  if (linqs == synthetic) throw std::invalid_argument("give either --data with --cites, or --synthetic-dir");
  LoadedData out;
  if (linqs) {
    if (source.content.empty() || source.cites.empty())
      throw std::invalid_argument("--data and --cites must be given together");
    CitationDataset ds = load_citation_dataset(source.content, source.cites);
    out.corpus = std::move(ds.corpus);
    out.network = std::move(ds.network);
  } else {
    const fs::path dir = source.synthetic_dir;
    std::size_t D = 0, W = 0;
    if (fs::exists(dir / "ground_truth.json")) {
      const json truth = read_json(dir / "ground_truth.json");
      D = truth.at("D").get<std::size_t>();
      W = truth.at("W").get<std::size_t>();
    }
    out.corpus = io::read_corpus_csv(dir / "corpus.csv", D, W);
    out.network = io::read_edges_csv(dir / "edges.csv", out.corpus.num_docs());
  }
  out.fingerprint = io::dataset_fingerprint(out.corpus, out.network);
  return out;
}

void cmd_generate(const GenerateOptions& o) {
  ensure_dir(o.out);
  Manifest manifest("generate", {{"K", o.K}, {"D", o.D}, {"W", o.W}, {"N", o.N}, {"seed", o.seed}});
  with_manifest(o.out, manifest, [&] {
    const SyntheticDataset ds = generate_synthetic(o.K, o.D, o.W, o.N, o.seed);
    io::write_corpus_csv(o.out / "corpus.csv", ds.corpus);
    manifest.outputs.push_back("corpus.csv");
    io::write_edges_csv(o.out / "edges.csv", ds.network);
    manifest.outputs.push_back("edges.csv");
    json truth;
    truth["K"] = ds.truth.true_K;
    truth["D"] = o.D;
    truth["W"] = o.W;
    truth["N"] = o.N;
    truth["seed"] = o.seed;
    truth["link_threshold"] = ds.truth.link_threshold;
    truth["doc_lengths"] = ds.truth.doc_lengths;
    truth["topics"] = matrix_json(ds.truth.topics);
    truth["doc_interest"] = matrix_json(ds.truth.doc_interest);
    write_json(o.out / "ground_truth.json", truth);
    manifest.outputs.push_back("ground_truth.json");
    manifest.doc["config"]["dataset_fingerprint"] = io::dataset_fingerprint(ds.corpus, ds.network);
  });
}

void cmd_fit(const FitOptions& o) {
  ensure_dir(o.out);
  json config = chain_json(o.chain);
  config["data"] = source_json(o.source);
  Manifest manifest("fit", config);
  with_manifest(o.out, manifest, [&] {
    const LoadedData data = load_source(o.source);
    manifest.doc["config"]["dataset_fingerprint"] = data.fingerprint;
    const SamplerConfig cfg = make_config(o.chain, o.chain.seed);
    const ChainResult result = run_chain(data.corpus, data.network, o.chain.hyper, cfg);
    io::write_trace_csv(o.out / "trace.csv", result.trace);
    manifest.outputs.push_back("trace.csv");
    write_json(o.out / "posterior.json", posterior_json(result, cfg));
    manifest.outputs.push_back("posterior.json");
    io::write_histogram_csv(o.out / "k_histogram.csv", topic_count_histogram(result.trace, cfg.burnin));
    manifest.outputs.push_back("k_histogram.csv");
  });
}

void cmd_eval(const EvalOptions& o) {
  ensure_dir(o.out);
  json config = chain_json(o.chain);
  config["data"] = source_json(o.source);
  config["folds"] = o.folds;
  config["threads"] = o.threads;
  Manifest manifest("eval", config);
  with_manifest(o.out, manifest, [&] {
    const LoadedData data = load_source(o.source);
    manifest.doc["config"]["dataset_fingerprint"] = data.fingerprint;
    make_config(o.chain, o.chain.seed);  // validate before spawning work
    const FoldSplit split = kfold_split(data.corpus.num_docs(), o.folds, o.chain.seed);

    std::vector<EvalReport> reports(o.folds);
    std::vector<std::exception_ptr> errors(o.folds);
    std::atomic<std::size_t> next{0};
    std::mutex out_mutex;
    auto worker = [&] {
      for (std::size_t i = next++; i < o.folds; i = next++) {
        const std::size_t fold = i + 1;
        try {
          reports[i] = run_fold(data, split, fold, o.chain);
          const std::string name = "fold_" + std::to_string(fold) + ".json";
          write_json(o.out / name,
                     report_json(reports[i], fold_seed(o.chain.seed, fold), split.test_docs(fold).size(),
                                 split.train_docs(fold).size()));
          std::lock_guard lock(out_mutex);
          manifest.outputs.push_back(name);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    const std::size_t n_threads = std::max<std::size_t>(1, std::min(o.threads, o.folds));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);

    std::ofstream os(o.out / "aggregate.csv", std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + (o.out / "aggregate.csv").string());
    os << "fold,lp,wp,mean_k_active\n";
    for (const EvalReport& r : reports)
      os << r.fold_id << ',' << io::format_double(r.lp_score) << ',' << io::format_double(r.wp_score) << ','
         << io::format_double(r.mean_k_active()) << '\n';
    os.flush();
    if (!os) throw std::runtime_error("error while writing aggregate.csv");
    manifest.outputs.push_back("aggregate.csv");
  });
}

}  // namespace nrt::cli
