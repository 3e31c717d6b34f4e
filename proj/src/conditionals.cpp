#include "nrt/conditionals.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nrt/likelihood.hpp"

namespace nrt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t require_cell(const ModelState& state, std::size_t d, std::size_t n) {
  return state.find_cell(d, n);
}

/// P(C >= c + 1) / P(C >= c) for C ~ Poisson(gamma), c >= 1.
double stay_probability(std::uint32_t run_length, double gamma_mass) {
  const double upper = boost::math::gamma_p(static_cast<double>(run_length), gamma_mass);
  if (upper > 1e-250) return boost::math::gamma_p(static_cast<double>(run_length) + 1.0, gamma_mass) / upper;
  // Deep tail: sum the pmf ratios relative to the c-th term instead.
  double term = 1.0;
  double sum = 1.0;
  for (std::uint32_t m = 1; m < 100000; ++m) {
    term *= gamma_mass / (static_cast<double>(run_length) + m);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return (sum - 1.0) / sum;
}

double log_gamma_density(double x, double shape, double rate) {
  return shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x - std::lgamma(shape);
}

}  // namespace

// ---------------------------------------------------------------------------

void sample_allocations_truncated(ModelState& state, std::size_t d, std::size_t n, Rng& rng) {
  const std::size_t c = require_cell(state, d, n);
  if (c == Corpus::npos) return;
  resample_cell_truncated(state, c, rng);
}

void resample_cell_truncated(ModelState& state, std::size_t c, Rng& rng) {
  thread_local std::vector<double> cumulative;
  const Cell& cell = state.cell(c);
  const std::size_t K = state.num_topics();
  cumulative.resize(K);
  double acc = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const Topic& tp = state.topic(k);
    if (tp.r[cell.doc]) acc += tp.theta[cell.word] * tp.pi * tp.beta[cell.doc];
    cumulative[k] = acc;
  }
  if (!(acc > 0.0))
    throw DegenerateState("all allocation weights vanish at document " + std::to_string(cell.doc) + ", word " +
                          std::to_string(cell.word));
  for (std::size_t t = state.cell_token_begin(c); t < state.cell_token_end(c); ++t)
    state.assign(t, static_cast<std::uint32_t>(categorical_from_cumulative(cumulative, rng)));
}

void resample_all_truncated(ModelState& state, Rng& rng) {
  // Dense word-major and doc-major factors keep the inner loop contiguous.
  const std::size_t K = state.num_topics();
  const std::size_t D = state.num_docs();
  const std::size_t W = state.vocab_size();
  std::vector<double> theta_pi(W * K), doc_beta(D * K);
  for (std::size_t k = 0; k < K; ++k) {
    const Topic& tp = state.topic(k);
    for (std::size_t n = 0; n < W; ++n) theta_pi[n * K + k] = tp.theta[n] * tp.pi;
    for (std::size_t d = 0; d < D; ++d) doc_beta[d * K + k] = tp.r[d] ? tp.beta[d] : 0.0;
  }
  std::vector<double> cumulative(K);
  for (std::size_t c = 0; c < state.num_cells(); ++c) {
    const Cell& cell = state.cell(c);
    const double* tw = theta_pi.data() + cell.word * K;
    const double* db = doc_beta.data() + cell.doc * K;
    double acc = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      acc += tw[k] * db[k];
      cumulative[k] = acc;
    }
    if (!(acc > 0.0))
      throw DegenerateState("all allocation weights vanish at document " + std::to_string(cell.doc) + ", word " +
                            std::to_string(cell.word));
    for (std::size_t t = state.cell_token_begin(c); t < state.cell_token_end(c); ++t)
      state.assign(t, static_cast<std::uint32_t>(categorical_from_cumulative(cumulative, rng)));
  }
}

std::size_t sample_allocations_slice(ModelState& state, const Hyperparameters& hyper, std::size_t d, std::size_t n,
                                     Rng& rng) {
  const std::size_t c = require_cell(state, d, n);
  if (c == Corpus::npos) return 0;
  return resample_cell_slice(state, hyper, c, rng);
}

std::size_t resample_cell_slice(ModelState& state, const Hyperparameters& hyper, std::size_t c, Rng& rng) {
  if (state.mode() != SamplerMode::slice) throw std::logic_error("slice allocation on a truncated state");
  thread_local std::vector<double> log_rate;
  thread_local std::vector<double> log_weight;
  const Cell& cell = state.cell(c);
  log_rate.clear();
  std::size_t appended = 0;
  for (std::size_t t = state.cell_token_begin(c); t < state.cell_token_end(c); ++t) {
    const std::uint32_t current = state.z(t);
    if (current == ModelState::kUnassigned) throw std::logic_error("slice update needs an initial allocation");
    const double u = uniform_open(rng) * hyper.zeta(current + 1);
    state.set_u(t, u);
    // The current label is always inside its own slice.
    const std::size_t support = std::max<std::size_t>(hyper.slice_support_size(u), current + 1);
    while (state.num_topics() < support) {
      append_prior_atom(state, hyper, rng);
      ++appended;
    }
    for (std::size_t k = log_rate.size(); k < support; ++k) {
      const Topic& tp = state.topic(k);
      const double rate = tp.r[cell.doc] ? tp.theta[cell.word] * tp.pi * tp.beta[cell.doc] : 0.0;
      log_rate.push_back(rate > 0.0 ? std::log(rate) : kNegInf);
    }
    log_weight.resize(support);
    for (std::size_t k = 0; k < support; ++k) log_weight[k] = log_rate[k] - hyper.log_zeta(k + 1);
    state.assign(t, static_cast<std::uint32_t>(categorical_log(log_weight, rng)));
  }
  return appended;
}

// ---------------------------------------------------------------------------

double r_posterior_probability(double q, double zero_mass) {
  const double on = q * zero_mass;
  return on / (on + (1.0 - q));
}

double zero_count_mass(const ModelState& state, std::size_t d, std::size_t k) {
  // Rows of theta are stochastic, so prod_n exp(-theta_{k,n} pi beta)
  // collapses to exp(-pi beta).
  const Topic& tp = state.topic(k);
  return std::exp(-tp.pi * tp.beta.at(d));
}

bool sample_r(const ModelState& state, std::size_t d, std::size_t k, Rng& rng) {
  const Topic& tp = state.topic(k);
  const std::size_t others = state.retained_topics(d) - (tp.r.at(d) ? 1 : 0);
  if (others == 0) return true;
  if (tp.doc_counts[d] > 0) return true;
  return bernoulli(r_posterior_probability(tp.q[d], zero_count_mass(state, d, k)), rng);
}

double sample_beta(const ModelState& state, const Hyperparameters& hyper, std::size_t d, std::size_t k, Rng& rng) {
  const Topic& tp = state.topic(k);
  const double shape = tp.doc_counts.at(d) + hyper.b0;
  const double scale = 1.0 / ((tp.r[d] ? tp.pi : 0.0) + 1.0);
  return gamma_variate(shape, scale, rng);
}

// ---------------------------------------------------------------------------

std::vector<double> sample_theta(const ModelState& state, const Hyperparameters& hyper, std::size_t k, Rng& rng) {
  const Topic& tp = state.topic(k);
  std::vector<double> conc(tp.word_counts.size());
  for (std::size_t n = 0; n < conc.size(); ++n) conc[n] = hyper.alpha0 + tp.word_counts[n];
  return dirichlet_variate(conc, rng);
}

double retained_beta_mass(const ModelState& state, std::size_t k) {
  const Topic& tp = state.topic(k);
  double mass = 0.0;
  for (std::size_t d = 0; d < tp.beta.size(); ++d)
    if (tp.r[d]) mass += tp.beta[d];
  return mass;
}

double sample_pi_truncated(const ModelState& state, const Hyperparameters& hyper, std::size_t k, Rng& rng) {
  const double K = static_cast<double>(state.num_topics());
  const double shape = hyper.gamma_mass / K + static_cast<double>(state.topic(k).total);
  return gamma_variate(shape, 1.0 / (retained_beta_mass(state, k) + 1.0), rng);
}

double atom_weight(const SliceAtom& atom) {
  return std::max(atom.E * std::exp(-atom.T), std::numeric_limits<double>::min());
}

SliceAtom sample_pi_slice(const ModelState& state, const Hyperparameters& hyper, std::size_t k, Rng& rng) {
  const Topic& tp = state.topic(k);
  SliceAtom atom = tp.atom;
  const double w = static_cast<double>(tp.total);
  const double exposure = retained_beta_mass(state, k);

  atom.E = gamma_variate(w + 1.0, 1.0 / (1.0 / hyper.alpha + exposure * std::exp(-atom.T)), rng);

  // Poisson(w; exposure * E * exp(-T)) as a function of T, up to constants.
  auto log_lik = [&](double T) { return -w * T - atom.E * exposure * std::exp(-T); };
  const double proposal = gamma_variate(static_cast<double>(atom.round), 1.0 / hyper.alpha, rng);
  if (std::log(uniform_open(rng)) < log_lik(proposal) - log_lik(atom.T)) atom.T = proposal;
  return atom;
}

double round_log_prior(std::uint32_t candidate, std::uint32_t previous_round, std::uint32_t run_length,
                       double gamma_mass) {
  if (candidate == 0 || candidate < previous_round) return kNegInf;
  const double log_new_round = std::log(-std::expm1(-gamma_mass));  // 1 - f(0 | gamma)
  if (previous_round == 0)
    return log_new_round - gamma_mass * static_cast<double>(candidate - 1);
  if (run_length == 0) throw std::invalid_argument("a predecessor round must contain at least one atom");
  const double stay = stay_probability(run_length, gamma_mass);
  if (candidate == previous_round) return std::log(stay);
  const double h = static_cast<double>(candidate - previous_round);
  return std::log1p(-stay) + log_new_round - gamma_mass * (h - 1.0);
}

std::pair<std::uint32_t, std::uint32_t> round_context(const ModelState& state, std::size_t k) {
  if (k == 0) return {0u, 0u};
  const std::uint32_t prev = state.topic(k - 1).atom.round;
  std::uint32_t run = 0;
  for (std::size_t l = k; l > 0 && state.topic(l - 1).atom.round == prev; --l) ++run;
  return {prev, run};
}

std::uint32_t sample_round_prior(std::uint32_t previous_round, std::uint32_t run_length, double gamma_mass,
                                 Rng& rng) {
  if (previous_round > 0 && bernoulli(stay_probability(run_length, gamma_mass), rng)) return previous_round;
  std::geometric_distribution<std::uint32_t> skips(-std::expm1(-gamma_mass));
  return previous_round + 1 + skips(rng);
}

std::uint32_t sample_dk(const ModelState& state, const Hyperparameters& hyper, std::size_t k, Rng& rng) {
  const auto [prev, run] = round_context(state, k);
  const double T = state.topic(k).atom.T;
  const std::uint32_t lo = std::max<std::uint32_t>(prev, 1);
  // Past the likelihood's mode both factors decrease in i, so candidates
  // ten standard deviations beyond max(lo, mode) carry negligible mass.
  const double mode = std::max(static_cast<double>(lo), std::ceil(hyper.alpha * T));
  const std::uint32_t hi =
      static_cast<std::uint32_t>(mode + std::ceil(10.0 * std::sqrt(hyper.alpha * T + 1.0)) + 10.0);
  std::vector<double> log_weight;
  log_weight.reserve(hi - lo + 1);
  for (std::uint32_t i = lo; i <= hi; ++i)
    log_weight.push_back(round_log_prior(i, prev, run, hyper.gamma_mass) +
                         log_gamma_density(T, static_cast<double>(i), hyper.alpha));
  return lo + static_cast<std::uint32_t>(categorical_log(log_weight, rng));
}

Topic draw_prior_topic(std::size_t num_docs, std::size_t vocab_size, const Hyperparameters& hyper, Rng& rng,
                       bool retain_all) {
  Topic tp;
  const std::vector<double> conc(vocab_size, hyper.alpha0);
  tp.theta = dirichlet_variate(conc, rng);
  tp.q.resize(num_docs);
  tp.r.resize(num_docs);
  tp.beta.resize(num_docs);
  for (std::size_t d = 0; d < num_docs; ++d) {
    tp.q[d] = beta_variate(hyper.a0, hyper.c0, rng);
    tp.r[d] = retain_all || bernoulli(tp.q[d], rng) ? 1 : 0;
    tp.beta[d] = gamma_variate(hyper.b0, 1.0, rng);
  }
  return tp;
}

std::size_t append_prior_atom(ModelState& state, const Hyperparameters& hyper, Rng& rng, bool retain_all) {
  const auto [prev, run] = round_context(state, state.num_topics());
  SliceAtom atom;
  atom.round = sample_round_prior(prev, run, hyper.gamma_mass, rng);
  atom.T = gamma_variate(static_cast<double>(atom.round), 1.0 / hyper.alpha, rng);
  atom.E = gamma_variate(1.0, hyper.alpha, rng);
  Topic tp = draw_prior_topic(state.num_docs(), state.vocab_size(), hyper, rng, retain_all);
  tp.atom = atom;
  tp.pi = atom_weight(atom);
  return state.add_topic(std::move(tp));
}

}  // namespace nrt
