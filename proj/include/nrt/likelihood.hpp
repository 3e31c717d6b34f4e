#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrt/corpus.hpp"
#include "nrt/model_state.hpp"

namespace nrt {

/// Raised when a state cannot support the requested quantity, e.g. an
/// observed count whose Poisson rate is zero.
class DegenerateState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// sum_k theta_{k,n} r_{d,k} pi_k beta_{d,k}
double poisson_rate(const ModelState& state, std::size_t d, std::size_t n);

/// Per-topic contributions to poisson_rate(d, n), normalised to sum to one.
/// Throws DegenerateState when the rate is zero.
std::vector<double> xi(const ModelState& state, std::size_t d, std::size_t n);

/// Log of the Poisson likelihood of every (d, n) entry, zeros included.
/// Throws DegenerateState if an observed count has zero rate.
double joint_log_likelihood(const ModelState& state, const Corpus& corpus);

/// Topics owning at least one token, ascending.
std::vector<std::size_t> active_topics(const ModelState& state);

/// Violation tallies for the state invariants; all zero for a valid state.
struct InvariantReport {
  std::size_t conservation = 0;   // sum_k w_{d,n,k} != w_{d,n} or stale summaries
  std::size_t thinning = 0;       // w_{d,n,k} > 0 while r_{d,k} = 0
  std::size_t xi_normalization = 0;
  std::size_t theta_stochastic = 0;
  std::size_t parameter_range = 0;  // pi, beta > 0; q in (0, 1)
  std::size_t slice_construction = 0;

  std::size_t total() const {
    return conservation + thinning + xi_normalization + theta_stochastic + parameter_range + slice_construction;
  }
  std::string describe() const;
};

InvariantReport check_invariants(const ModelState& state, const Corpus& corpus);

}  // namespace nrt
