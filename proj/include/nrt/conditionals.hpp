#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nrt/hyperparameters.hpp"
#include "nrt/model_state.hpp"
#include "nrt/random.hpp"

namespace nrt {

// ---------------------------------------------------------------------------
// Allocations
// ---------------------------------------------------------------------------

/// Fresh multinomial split of w_{d,n} over all topics with probabilities
/// xi_{d,n,.}. A no-op when w_{d,n} = 0. Throws DegenerateState if every
/// rate is zero.
void sample_allocations_truncated(ModelState& state, std::size_t d, std::size_t n, Rng& rng);
void resample_cell_truncated(ModelState& state, std::size_t cell, Rng& rng);
/// Same draws as resample_cell_truncated over every cell in order, with the
/// rate factors laid out densely first.
void resample_all_truncated(ModelState& state, Rng& rng);

/// Slice update of every token of cell (d, n): u ~ Unif(0, zeta_{z}), then
/// z drawn with weight xi_k / zeta_k over {k : zeta_k >= u}. Atoms are
/// appended from the prior whenever the support outgrows the instantiated
/// set. Returns the number of atoms appended.
std::size_t sample_allocations_slice(ModelState& state, const Hyperparameters& hyper, std::size_t d,
                                     std::size_t n, Rng& rng);
std::size_t resample_cell_slice(ModelState& state, const Hyperparameters& hyper, std::size_t cell, Rng& rng);

// ---------------------------------------------------------------------------
// Per-document topic indicators and scales
// ---------------------------------------------------------------------------

/// p(r = 1) when topic k holds no tokens of document d:
/// q Z / (q Z + 1 - q), with Z the Poisson mass of an all-zero row.
double r_posterior_probability(double q, double zero_mass);

/// prod_n Pois(0; theta_{k,n} pi_k beta_{d,k})
double zero_count_mass(const ModelState& state, std::size_t d, std::size_t k);

/// r_{d,k} forced to 1 if it is document d's only retained topic or if the
/// topic owns tokens of d; otherwise Bernoulli(r_posterior_probability).
bool sample_r(const ModelState& state, std::size_t d, std::size_t k, Rng& rng);

/// Gamma(w_{d,.,k} + b0, scale 1 / (r_{d,k} pi_k + 1))
double sample_beta(const ModelState& state, const Hyperparameters& hyper, std::size_t d, std::size_t k, Rng& rng);

// ---------------------------------------------------------------------------
// Global topic parameters
// ---------------------------------------------------------------------------

/// Dirichlet(alpha0 + w_{.,1,k}, ..., alpha0 + w_{.,W,k})
std::vector<double> sample_theta(const ModelState& state, const Hyperparameters& hyper, std::size_t k, Rng& rng);

/// sum_d r_{d,k} beta_{d,k}: the exposure multiplying pi_k in the likelihood.
double retained_beta_mass(const ModelState& state, std::size_t k);

/// Gamma(gamma_mass/K + w_{.,.,k}, scale 1 / (retained_beta_mass + 1)),
/// K = number of instantiated topics. gamma_mass = 1 gives the usual 1/K.
double sample_pi_truncated(const ModelState& state, const Hyperparameters& hyper, std::size_t k, Rng& rng);

/// One Gibbs pass over (E_k, T_k): E | T is conjugate gamma; T | E takes one
/// independence Metropolis-Hastings step proposing from its prior
/// Gamma(d_k, scale 1/alpha). The returned atom keeps `round` unchanged.
SliceAtom sample_pi_slice(const ModelState& state, const Hyperparameters& hyper, std::size_t k, Rng& rng);

/// pi = E exp(-T), floored at the smallest positive normal double.
double atom_weight(const SliceAtom& atom);

/// Log prior mass of an atom's round given its predecessor.
///   previous_round == 0 means there is no predecessor (first atom);
///   run_length is the number of earlier atoms in previous_round.
/// Returns -inf for candidate < previous_round.
double round_log_prior(std::uint32_t candidate, std::uint32_t previous_round, std::uint32_t run_length,
                       double gamma_mass);

/// Draw of d_k from p(T_k | d_k) p(d_k | d_1..d_{k-1}).
std::uint32_t sample_dk(const ModelState& state, const Hyperparameters& hyper, std::size_t k, Rng& rng);

/// Predecessor context (previous_round, run_length) for position k.
std::pair<std::uint32_t, std::uint32_t> round_context(const ModelState& state, std::size_t k);

/// Round drawn from round_log_prior alone.
std::uint32_t sample_round_prior(std::uint32_t previous_round, std::uint32_t run_length, double gamma_mass,
                                 Rng& rng);

/// theta ~ Dirichlet(alpha0), q ~ Beta(a0, c0), beta ~ Gamma(b0, 1) and r
/// either all ones or Bernoulli(q). pi and the atom are left at defaults.
Topic draw_prior_topic(std::size_t num_docs, std::size_t vocab_size, const Hyperparameters& hyper, Rng& rng,
                       bool retain_all);

/// Appends an atom drawn from the prior (construction variables, theta, and
/// per-document q, r, beta). r is drawn as Bernoulli(q) unless
/// `retain_all` is set.
std::size_t append_prior_atom(ModelState& state, const Hyperparameters& hyper, Rng& rng, bool retain_all = false);

}  // namespace nrt
