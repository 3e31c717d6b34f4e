#include "nrt/likelihood.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace nrt {

namespace {

void check_indices(const ModelState& state, std::size_t d, std::size_t n) {
  if (d >= state.num_docs() || n >= state.vocab_size()) throw std::out_of_range("document or word index out of range");
}

}  // namespace

double poisson_rate(const ModelState& state, std::size_t d, std::size_t n) {
  check_indices(state, d, n);
  double rate = 0.0;
  for (const Topic& tp : state.topics())
    if (tp.r[d]) rate += tp.theta[n] * tp.pi * tp.beta[d];
  return rate;
}

std::vector<double> xi(const ModelState& state, std::size_t d, std::size_t n) {
  check_indices(state, d, n);
  std::vector<double> out(state.num_topics(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Topic& tp = state.topic(k);
    if (tp.r[d]) out[k] = tp.theta[n] * tp.pi * tp.beta[d];
    total += out[k];
  }
  if (!(total > 0.0))
    throw DegenerateState("zero Poisson rate at document " + std::to_string(d) + ", word " + std::to_string(n));
  for (double& v : out) v /= total;
  return out;
}

double joint_log_likelihood(const ModelState& state, const Corpus& corpus) {
  if (corpus.num_docs() != state.num_docs() || corpus.vocab_size() != state.vocab_size())
    throw std::invalid_argument("state and corpus dimensions differ");
  // Zero cells contribute -rate; summing every rate via the row sums of
  // theta avoids visiting the D x W zeros one by one.
  double ll = 0.0;
  for (const Topic& tp : state.topics()) {
    double row = 0.0;
    for (double v : tp.theta) row += v;
    double mass = 0.0;
    for (std::size_t d = 0; d < state.num_docs(); ++d)
      if (tp.r[d]) mass += tp.beta[d];
    ll -= tp.pi * mass * row;
  }
  const std::size_t K = state.num_topics();
  std::vector<double> theta_pi(state.vocab_size() * K), doc_beta(state.num_docs() * K);
  for (std::size_t k = 0; k < K; ++k) {
    const Topic& tp = state.topic(k);
    for (std::size_t n = 0; n < state.vocab_size(); ++n) theta_pi[n * K + k] = tp.theta[n] * tp.pi;
    for (std::size_t d = 0; d < state.num_docs(); ++d) doc_beta[d * K + k] = tp.r[d] ? tp.beta[d] : 0.0;
  }
  for (const Cell& c : corpus.cells()) {
    const double* tw = theta_pi.data() + c.word * K;
    const double* db = doc_beta.data() + c.doc * K;
    double rate = 0.0;
    for (std::size_t k = 0; k < K; ++k) rate += tw[k] * db[k];
    if (!(rate > 0.0))
      throw DegenerateState("observed count with zero rate at document " + std::to_string(c.doc) + ", word " +
                            std::to_string(c.word));
    ll += c.count * std::log(rate) - std::lgamma(c.count + 1.0);
  }
  return ll;
}

std::vector<std::size_t> active_topics(const ModelState& state) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < state.num_topics(); ++k)
    if (state.topic(k).total > 0) out.push_back(k);
  return out;
}

std::string InvariantReport::describe() const {
  std::ostringstream os;
  os << "conservation=" << conservation << " thinning=" << thinning << " xi=" << xi_normalization
     << " theta=" << theta_stochastic << " range=" << parameter_range << " slice=" << slice_construction;
  return os.str();
}

InvariantReport check_invariants(const ModelState& state, const Corpus& corpus) {
  InvariantReport rep;
  const std::size_t K = state.num_topics();
  const std::size_t D = state.num_docs();

  // Recompute the allocation tensor from the token labels.
  std::vector<std::vector<std::uint32_t>> doc_counts(K, std::vector<std::uint32_t>(D, 0));
  std::vector<std::vector<std::uint32_t>> word_counts(K, std::vector<std::uint32_t>(state.vocab_size(), 0));
  for (std::size_t c = 0; c < state.num_cells(); ++c) {
    const Cell& cell = state.cell(c);
    if (corpus.count(cell.doc, cell.word) != cell.count) ++rep.conservation;
    std::uint64_t sum = 0;
    for (auto [k, w] : state.cell_allocation(c)) {
      sum += w;
      doc_counts[k][cell.doc] += w;
      word_counts[k][cell.word] += w;
      if (!state.r(cell.doc, k)) ++rep.thinning;
    }
    if (sum != cell.count) ++rep.conservation;

    try {
      const auto p = xi(state, cell.doc, cell.word);
      double s = 0.0;
      for (double v : p) s += v;
      if (std::abs(s - 1.0) > 1e-12) ++rep.xi_normalization;
      for (std::size_t k = 0; k < K; ++k)
        if (!state.r(cell.doc, k) && p[k] != 0.0) ++rep.xi_normalization;
    } catch (const DegenerateState&) {
      ++rep.xi_normalization;
    }
  }
  if (state.num_cells() != corpus.num_cells()) ++rep.conservation;

  for (std::size_t k = 0; k < K; ++k) {
    const Topic& tp = state.topic(k);
    if (tp.doc_counts != doc_counts[k] || tp.word_counts != word_counts[k]) ++rep.conservation;
    double row = 0.0;
    for (double v : tp.theta) {
      row += v;
      if (!(v >= 0.0)) ++rep.theta_stochastic;
    }
    if (std::abs(row - 1.0) > 1e-10) ++rep.theta_stochastic;
    if (!(tp.pi > 0.0) || !std::isfinite(tp.pi)) ++rep.parameter_range;
    for (std::size_t d = 0; d < D; ++d) {
      if (!(tp.beta[d] > 0.0) || !std::isfinite(tp.beta[d])) ++rep.parameter_range;
      if (!(tp.q[d] > 0.0 && tp.q[d] < 1.0)) ++rep.parameter_range;
      if (tp.r[d] > 1) ++rep.parameter_range;
    }
    if (state.mode() == SamplerMode::slice) {
      const double expected = std::max(tp.atom.E * std::exp(-tp.atom.T), std::numeric_limits<double>::min());
      if (std::abs(tp.pi - expected) > 1e-12 * expected) ++rep.slice_construction;
      if (k > 0 && tp.atom.round < state.topic(k - 1).atom.round) ++rep.slice_construction;
    }
  }
  return rep;
}

}  // namespace nrt
