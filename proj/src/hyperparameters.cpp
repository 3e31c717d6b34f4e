#include "nrt/hyperparameters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nrt {

namespace {
void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string("hyperparameter ") + name + " must be positive and finite");
}
}  // namespace

void Hyperparameters::validate() const {
  require_positive(a0, "a0");
  require_positive(c0, "c0");
  require_positive(b0, "b0");
  require_positive(alpha, "alpha");
  require_positive(alpha0, "alpha0");
  require_positive(gamma_mass, "gamma_mass");
  require_positive(zeta_base, "zeta_base");
  if (!(zeta_ratio > 1.0) || !std::isfinite(zeta_ratio))
    throw std::invalid_argument("hyperparameter zeta_ratio must exceed 1");
}

double Hyperparameters::zeta(std::size_t k) const { return std::exp(log_zeta(k)); }

double Hyperparameters::log_zeta(std::size_t k) const {
  return std::log(zeta_base) - static_cast<double>(k) * std::log(zeta_ratio);
}

std::size_t Hyperparameters::slice_support_size(double u) const {
  if (!(u > 0.0)) throw std::invalid_argument("slice variable must be positive");
  const double lu = std::log(u);
  const double est = (std::log(zeta_base) - lu) / std::log(zeta_ratio);
  if (est < 0.0) return 0;
  auto k = static_cast<std::size_t>(std::floor(est));
  // correct for rounding in the closed form
  while (k > 0 && log_zeta(k) < lu) --k;
  while (log_zeta(k + 1) >= lu) ++k;
  return k;
}

std::size_t Hyperparameters::truncation_for(std::size_t num_docs) const {
  return truncation_K > 0 ? truncation_K : default_truncation(num_docs);
}

std::size_t default_truncation(std::size_t num_docs) {
  return std::max<std::size_t>(1, std::min<std::size_t>(10 * num_docs, 2000));
}

}  // namespace nrt
