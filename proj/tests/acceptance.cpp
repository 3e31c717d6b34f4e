// Acceptance run: one PASS/FAIL/SKIP line per criterion. Exit status is
// non-zero when a gating criterion (1-8) fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "nrt/conditionals.hpp"
#include "nrt/data.hpp"
#include "nrt/eval.hpp"
#include "nrt/likelihood.hpp"
#include "nrt/mrf.hpp"
#include "nrt/random.hpp"
#include "nrt/sampler.hpp"
#include "support.hpp"

using namespace nrt;
namespace fs = std::filesystem;

namespace {

enum class Outcome { pass, fail, skip };

struct Line {
  int id;
  Outcome outcome;
  bool gating;
  std::string detail;
};

std::vector<Line> g_lines;

void report(int id, Outcome o, const std::string& detail, bool gating = true) {
  const char* tag = o == Outcome::pass ? "PASS" : o == Outcome::fail ? "FAIL" : "SKIP";
  std::cout << "criterion " << id << ": " << tag << "  " << detail << std::endl;
  g_lines.push_back({id, o, gating, detail});
}

Outcome verdict(bool ok) { return ok ? Outcome::pass : Outcome::fail; }

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

// Hyperparameters for the synthetic recovery runs. Shared by both samplers
// and both K.
Hyperparameters synthetic_hyper() {
  Hyperparameters h;
  return h;
}

std::size_t histogram_mode(const std::map<std::size_t, std::size_t>& hist) {
  std::size_t mode = 0, best = 0;
  for (auto [k, n] : hist)
    if (n > best) {
      best = n;
      mode = k;
    }
  return mode;
}

double trace_sd_after(const ChainTrace& trace, std::size_t iter) {
  std::vector<double> ks;
  for (const auto& r : trace.records)
    if (r.iter > iter) ks.push_back(static_cast<double>(r.k_active));
  if (ks.size() < 2) return 0.0;
  return std::sqrt(testsupport::moments(ks).var);
}

// ------------------------------------------------------------- criteria 1, 2

void recovery_and_mixing() {
  const std::size_t Ks[] = {3, 5};
  const SamplerMode modes[] = {SamplerMode::truncated, SamplerMode::slice};
  bool all_recovered = true;
  bool all_mixed = true;
  double worst_sd = 0.0;
  std::ostringstream summary;
  for (std::size_t K : Ks) {
    for (SamplerMode mode : modes) {
      std::size_t hits = 0;
      std::ostringstream modes_seen;
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto ds = generate_synthetic(K, 50, 40, 100, seed);
        SamplerConfig cfg;
        cfg.max_iter = 1000;
        cfg.burnin = 100;
        cfg.seed = seed + 100;
        cfg.mode = mode;
        cfg.check_invariants = false;
        const auto t0 = std::chrono::steady_clock::now();
        const auto res = run_chain(ds.corpus, ds.network, synthetic_hyper(), cfg);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::size_t m = histogram_mode(topic_count_histogram(res.trace, cfg.burnin));
        const bool hit = m + 1 >= K && m <= K + 1;
        hits += hit;
        const double sd = trace_sd_after(res.trace, 500);
        worst_sd = std::max(worst_sd, sd);
        all_mixed = all_mixed && sd <= 2.0;
        modes_seen << (seed > 1 ? "," : "") << m;
        std::cout << "  K=" << K << " " << to_string(mode) << " seed=" << seed << " mode=" << m
                  << " sd(after 500)=" << fmt(sd, 3) << " time=" << fmt(secs, 3) << "s" << std::endl;
      }
      const bool ok = hits >= 4;
      all_recovered = all_recovered && ok;
      summary << " K=" << K << "/" << to_string(mode) << " modes [" << modes_seen.str() << "] " << hits << "/5;";
    }
  }
  report(1, verdict(all_recovered), "synthetic K recovery within +-1 in >= 4/5 runs:" + summary.str());
  report(2, verdict(all_mixed), "K_active sd after iteration 500, worst over 20 runs = " + fmt(worst_sd, 3));
}

// ------------------------------------------------------------- criterion 3

void sampler_agreement() {
  const auto ds = generate_synthetic(2, 10, 20, 100, 1);
  Hyperparameters h;
  h.truncation_K = 100;
  double mean_k[2], mean_ll[2];
  int i = 0;
  for (SamplerMode mode : {SamplerMode::truncated, SamplerMode::slice}) {
    SamplerConfig cfg;
    cfg.max_iter = 5000;
    cfg.burnin = 1000;
    cfg.seed = 8;
    cfg.mode = mode;
    cfg.check_invariants = false;
    const auto res = run_chain(ds.corpus, ds.network, h, cfg);
    double k = 0.0, ll = 0.0;
    std::size_t n = 0;
    for (const auto& r : res.trace.records)
      if (r.iter > cfg.burnin) {
        k += static_cast<double>(r.k_active);
        ll += r.loglik;
        ++n;
      }
    mean_k[i] = k / static_cast<double>(n);
    mean_ll[i] = ll / static_cast<double>(n);
    ++i;
  }
  const double dk = std::abs(mean_k[0] - mean_k[1]);
  const double dll = std::abs(mean_ll[0] - mean_ll[1]) / std::abs(mean_ll[0]);
  report(3, verdict(dk < 1.0 && dll < 0.02),
         "mean K_active truncated " + fmt(mean_k[0]) + " vs slice " + fmt(mean_k[1]) + " (diff " + fmt(dk, 3) +
             "), mean loglik " + fmt(mean_ll[0], 6) + " vs " + fmt(mean_ll[1], 6) + " (rel diff " + fmt(dll, 3) +
             ")");
}

// ------------------------------------------------------------- criterion 4

double gamma_mu4(double k, double s) { return 3.0 * k * (k + 2.0) * std::pow(s, 4); }

double beta_mu4(double a, double b) {
  const double s = a + b;
  const double var = a * b / (s * s * (s + 1));
  const double excess = 6 * ((a - b) * (a - b) * (s + 1) - a * b * (s + 2)) / (a * b * (s + 2) * (s + 3));
  return var * var * (3 + excess);
}

ModelState one_cell(std::uint32_t count, Topic topic, SamplerMode mode) {
  std::vector<Cell> cells;
  if (count > 0) cells.push_back({0, 0, count});
  const Corpus corpus(1, topic.theta.size(), cells);
  ModelState s(corpus, mode);
  s.add_topic(std::move(topic));
  for (std::size_t t = 0; t < s.num_tokens(); ++t) s.assign(t, 0);
  return s;
}

void moment_suite() {
  const std::size_t n = 100000;
  Hyperparameters h;
  Rng rng(404);
  std::vector<std::string> failed;
  std::vector<double> x(n);
  auto check = [&](const std::string& name, double mean, double var, double mu4) {
    if (!testsupport::mean_within(x, mean, var) || !testsupport::var_within(x, var, mu4)) failed.push_back(name);
  };

  {  // beta: 5 tokens, pi = 1 -> Gamma(6, 1/2)
    const auto s = one_cell(5, testsupport::make_topic({1.0}, 1.0, {0.5}, {1}, {1.0}), SamplerMode::truncated);
    for (auto& v : x) v = sample_beta(s, h, 0, 0, rng);
    check("beta", 3.0, 1.5, gamma_mu4(6, 0.5));
  }
  {  // theta: counts (3, 0, 1, 0) -> first coordinate Beta(4, 4)
    const Corpus corpus(1, 4, {{0, 0, 3}, {0, 2, 1}});
    ModelState s(corpus, SamplerMode::truncated);
    s.add_topic(testsupport::make_topic({0.25, 0.25, 0.25, 0.25}, 1.0, {0.5}, {1}, {1.0}));
    for (std::size_t t = 0; t < s.num_tokens(); ++t) s.assign(t, 0);
    for (auto& v : x) v = sample_theta(s, h, 0, rng)[0];
    check("theta", 0.5, 1.0 / 36.0, beta_mu4(4, 4));
  }
  {  // truncated pi: 10 topics, 100 tokens, exposure 9 -> Gamma(100.1, 0.1)
    const Corpus corpus(3, 1, {{0, 0, 100}});
    ModelState s(corpus, SamplerMode::truncated);
    for (int k = 0; k < 10; ++k)
      s.add_topic(testsupport::make_topic({1.0}, 1.0, {0.5, 0.5, 0.5}, {1, 1, 1}, {2.0, 3.0, 4.0}));
    for (std::size_t t = 0; t < s.num_tokens(); ++t) s.assign(t, 0);
    for (auto& v : x) v = sample_pi_truncated(s, h, 0, rng);
    check("pi", 10.01, 1.001, gamma_mu4(100.1, 0.1));
  }
  {  // E | T: 4 tokens, exposure 2, T = 0.5 -> Gamma(5, 1 / (1 + 2 e^-0.5))
    Topic t = testsupport::make_topic({1.0}, 1.0, {0.5}, {1}, {2.0});
    t.atom = {1.0, 0.5, 1};
    const auto s = one_cell(4, t, SamplerMode::slice);
    const double scale = 1.0 / (1.0 + 2.0 * std::exp(-0.5));
    for (auto& v : x) v = sample_pi_slice(s, h, 0, rng).E;
    check("E|T", 5 * scale, 5 * scale * scale, gamma_mu4(5, scale));
  }
  double p_q = 1.0;
  {  // q, empty neighbourhood, r = 1 -> Beta(2, 1)
    for (auto& v : x) v = sample_q(true, {}, h, rng).value;
    p_q = testsupport::ks_pvalue(x, [](double v) { return v * v; });
    if (!(p_q > 0.01)) failed.push_back("q");
  }
  std::string detail = "beta, theta, pi, E|T within 3 sigma over 1e5 draws; q KS p = " + fmt(p_q, 3);
  if (!failed.empty()) {
    detail += "; failed:";
    for (const auto& f : failed) detail += " " + f;
  }
  report(4, verdict(failed.empty()), detail);
}

// ------------------------------------------------------------- criterion 5

void poisson_multinomial() {
  const double rates[] = {0.7, 1.2, 2.1};
  const std::size_t draws = 100000;
  constexpr unsigned cap = 12;
  Rng rng(505);
  std::vector<std::vector<double>> observed(3, std::vector<double>(cap + 1, 0.0));
  std::vector<double> joint((cap + 1) * (cap + 1), 0.0);
  for (std::size_t i = 0; i < draws; ++i) {
    const auto total = static_cast<std::uint32_t>(poisson_variate(rates[0] + rates[1] + rates[2], rng));
    unsigned c[3] = {0, 0, 0};
    if (total > 0) {
      const Corpus corpus(1, 1, {{0, 0, total}});
      ModelState s(corpus, SamplerMode::truncated);
      for (double r : rates) s.add_topic(testsupport::make_topic({1.0}, r, {0.5}, {1}, {1.0}));
      for (std::size_t t = 0; t < s.num_tokens(); ++t) s.assign(t, 0);
      resample_cell_truncated(s, 0, rng);
      for (std::size_t k = 0; k < 3; ++k) c[k] = s.allocation(0, 0, k);
    }
    for (std::size_t k = 0; k < 3; ++k) observed[k][std::min(c[k], cap)] += 1.0;
    joint[std::min(c[0], cap) * (cap + 1) + std::min(c[1], cap)] += 1.0;
  }
  auto binned = [&](double rate) {
    std::vector<double> p(cap + 1, 0.0);
    double used = 0.0;
    for (unsigned k = 0; k < cap; ++k) used += p[k] = testsupport::poisson_pmf(k, rate);
    p[cap] = 1.0 - used;
    return p;
  };
  double min_p = 1.0;
  for (std::size_t k = 0; k < 3; ++k) {
    auto e = binned(rates[k]);
    for (double& v : e) v *= draws;
    min_p = std::min(min_p, testsupport::chi_square_pvalue(observed[k], e));
  }
  const auto p0 = binned(rates[0]), p1 = binned(rates[1]);
  std::vector<double> ej(joint.size());
  for (unsigned a = 0; a <= cap; ++a)
    for (unsigned b = 0; b <= cap; ++b) ej[a * (cap + 1) + b] = draws * p0[a] * p1[b];
  const double p_joint = testsupport::chi_square_pvalue(joint, ej);
  report(5, verdict(min_p > 0.01 && p_joint > 0.01),
         "per-topic chi-square min p = " + fmt(min_p, 3) + ", pairwise independence p = " + fmt(p_joint, 3));
}

// ------------------------------------------------------------- criterion 6

void mrf_effect() {
  const Corpus corpus(2, 2, {{0, 0, 3}, {0, 1, 1}, {1, 0, 1}, {1, 1, 2}});
  Hyperparameters h;
  h.truncation_K = 1;
  auto spread = [&](const DocumentNetwork& g, std::uint64_t seed) {
    SamplerConfig cfg;
    cfg.max_iter = 10000;
    cfg.burnin = 500;
    cfg.seed = seed;
    cfg.check_invariants = false;
    double acc = 0.0;
    std::size_t n = 0;
    run_truncated(corpus, g, h, cfg, [&](const ModelState& s, std::size_t iter) {
      if (iter <= cfg.burnin) return;
      const double d = s.q(0, 0) - s.q(1, 0);
      acc += d * d;
      ++n;
    });
    return acc / static_cast<double>(n);
  };
  DocumentNetwork linked(2);
  linked.add_edge(0, 1);
  const DocumentNetwork unlinked(2);
  std::size_t agree = 0;
  std::ostringstream os;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double a = spread(linked, seed), b = spread(unlinked, seed);
    agree += a < b;
    os << " (" << fmt(a, 3) << " < " << fmt(b, 3) << ")";
  }
  report(6, verdict(agree == 5), "E[(q1-q2)^2] linked vs unlinked, " + std::to_string(agree) + "/5 seeds:" + os.str());
}

// ------------------------------------------------------------- criteria 7, 9

fs::path data_root() {
  if (const char* env = std::getenv("NRT_DATA_DIR")) return env;
  return fs::path(NRT_SOURCE_DIR) / "data";
}

struct DatasetPaths {
  fs::path content, cites;
  bool present() const { return fs::exists(content) && fs::exists(cites); }
};

DatasetPaths locate(const std::string& name) {
  const fs::path root = data_root();
  for (const fs::path& dir : {root / name, root}) {
    DatasetPaths p{dir / (name + ".content"), dir / (name + ".cites")};
    if (p.present()) return p;
  }
  return {root / name / (name + ".content"), root / name / (name + ".cites")};
}

void ingestion() {
  struct Expected {
    const char* name;
    std::size_t D, links, W;
  };
  const Expected expected[] = {{"cora", 2708, 5429, 1433}, {"citeseer", 3312, 4732, 3703}};
  std::ostringstream os;
  bool all_present = true, all_exact = true;
  for (const auto& e : expected) {
    const auto paths = locate(e.name);
    if (!paths.present()) {
      all_present = false;
      os << " " << e.name << " not found under " << data_root().string() << ";";
      continue;
    }
    const auto ds = load_citation_dataset(paths.content, paths.cites);
    const bool exact = ds.corpus.num_docs() == e.D && ds.report.citation_records == e.links &&
                       ds.corpus.vocab_size() == e.W;
    all_exact = all_exact && exact;
    os << " " << e.name << " D=" << ds.corpus.num_docs() << " links=" << ds.report.citation_records
       << " W=" << ds.corpus.vocab_size() << " (undirected edges " << ds.network.num_edges() << ");";
  }
  if (!all_present)
    report(7, Outcome::skip, "dataset files unavailable:" + os.str());
  else
    report(7, verdict(all_exact), os.str());
}

void cora_extended() {
  const auto paths = locate("cora");
  if (!paths.present()) {
    report(9, Outcome::skip, "optional Cora slice run: cora files unavailable", false);
    return;
  }
  const auto ds = load_citation_dataset(paths.content, paths.cites);
  SamplerConfig cfg;
  cfg.max_iter = 1000;
  cfg.burnin = 100;
  cfg.seed = 9;
  cfg.mode = SamplerMode::slice;
  cfg.check_invariants = false;
  const auto res = run_chain(ds.corpus, ds.network, Hyperparameters{}, cfg);
  double k = 0.0;
  std::size_t n = 0;
  for (const auto& r : res.trace.records)
    if (r.iter > cfg.burnin) {
      k += static_cast<double>(r.k_active);
      ++n;
    }
  const double mean_k = k / static_cast<double>(n);
  report(9, verdict(mean_k >= 32 && mean_k <= 52), "Cora slice mean K_active = " + fmt(mean_k), false);
}

// ------------------------------------------------------------- criterion 8

void invariants() {
  struct Synth {
    std::size_t K, D, W, N;
  };
  const Synth sets[] = {{3, 50, 40, 100}, {5, 50, 40, 100}, {2, 10, 20, 100}};
  std::size_t sweeps = 0;
  InvariantReport total;
  for (const auto& set : sets) {
    const auto ds = generate_synthetic(set.K, set.D, set.W, set.N, 1);
    for (SamplerMode mode : {SamplerMode::truncated, SamplerMode::slice}) {
      SamplerConfig cfg;
      cfg.max_iter = 200;
      cfg.burnin = 20;
      cfg.seed = 808;
      cfg.mode = mode;
      cfg.check_invariants = false;  // tallied here instead of aborting
      run_chain(ds.corpus, ds.network, synthetic_hyper(), cfg, [&](const ModelState& s, std::size_t) {
        const auto rep = check_invariants(s, ds.corpus);
        total.conservation += rep.conservation;
        total.thinning += rep.thinning;
        total.xi_normalization += rep.xi_normalization;
        total.theta_stochastic += rep.theta_stochastic;
        total.parameter_range += rep.parameter_range;
        total.slice_construction += rep.slice_construction;
        ++sweeps;
      });
    }
  }
  report(8, verdict(total.total() == 0),
         std::to_string(sweeps) + " sweeps checked, violations: " + total.describe());
}

}  // namespace

int main() {
  std::cout << "acceptance run" << std::endl;
  moment_suite();
  poisson_multinomial();
  mrf_effect();
  ingestion();
  invariants();
  sampler_agreement();
  recovery_and_mixing();
  cora_extended();

  std::sort(g_lines.begin(), g_lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  std::cout << "\nsummary" << std::endl;
  bool ok = true;
  for (const auto& l : g_lines) {
    const char* tag = l.outcome == Outcome::pass ? "PASS" : l.outcome == Outcome::fail ? "FAIL" : "SKIP";
    std::cout << "criterion " << l.id << ": " << tag << (l.gating ? "" : " (optional)") << std::endl;
    if (l.gating && l.outcome == Outcome::fail) ok = false;
  }
  return ok ? 0 : 1;
}
