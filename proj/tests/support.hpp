#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "nrt/model_state.hpp"

namespace testsupport {

inline nrt::Topic make_topic(std::vector<double> theta, double pi, std::vector<double> q, std::vector<std::uint8_t> r,
                             std::vector<double> beta) {
  nrt::Topic t;
  t.theta = std::move(theta);
  t.pi = pi;
  t.q = std::move(q);
  t.r = std::move(r);
  t.beta = std::move(beta);
  return t;
}

/// Topic with uniform theta, q = 0.5, r = 1 and beta = 1 for every document.
inline nrt::Topic flat_topic(std::size_t D, std::size_t W, double pi = 1.0) {
  return make_topic(std::vector<double>(W, 1.0 / static_cast<double>(W)), pi, std::vector<double>(D, 0.5),
                    std::vector<std::uint8_t>(D, 1), std::vector<double>(D, 1.0));
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

inline Moments moments(const std::vector<double>& x) {
  Moments m;
  const double n = static_cast<double>(x.size());
  m.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double s = 0.0;
  for (double v : x) s += (v - m.mean) * (v - m.mean);
  m.var = s / (n - 1.0);
  return m;
}

/// |sample mean - mu| within k standard errors, using the true variance.
inline bool mean_within(const std::vector<double>& x, double mu, double var, double k = 3.0) {
  return std::abs(moments(x).mean - mu) <= k * std::sqrt(var / static_cast<double>(x.size()));
}

/// Sample variance within k standard errors of sigma^2, with the standard
/// error of s^2 taken from the fourth central moment mu4.
inline bool var_within(const std::vector<double>& x, double var, double mu4, double k = 3.0) {
  const double n = static_cast<double>(x.size());
  const double se = std::sqrt((mu4 - var * var * (n - 3.0) / (n - 1.0)) / n);
  return std::abs(moments(x).var - var) <= k * se;
}

/// Kolmogorov limiting distribution tail P(K > t).
inline double kolmogorov_tail(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 1.18) {
    // small-t form converges quickly there
    const double pi2 = M_PI * M_PI;
    double s = 0.0;
    for (int j = 1; j <= 50; ++j) {
      const double k = 2.0 * j - 1.0;
      s += std::exp(-k * k * pi2 / (8.0 * t * t));
    }
    return 1.0 - std::sqrt(2.0 * M_PI) / t * s;
  }
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) s += (j % 2 ? 1.0 : -1.0) * std::exp(-2.0 * j * j * t * t);
  return std::clamp(2.0 * s, 0.0, 1.0);
}

/// One-sample Kolmogorov-Smirnov p-value against a continuous cdf, with
/// the Stephens small-sample correction.
inline double ks_pvalue(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  const double sn = std::sqrt(n);
  return kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d);
}

/// Pearson chi-square goodness-of-fit p-value; bins with expected count
/// below 5 are pooled into their neighbour.
inline double chi_square_pvalue(const std::vector<double>& observed, const std::vector<double>& expected,
                                std::size_t fitted_params = 0) {
  std::vector<double> o, e;
  double po = 0.0, pe = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    po += observed[i];
    pe += expected[i];
    if (pe >= 5.0) {
      o.push_back(po);
      e.push_back(pe);
      po = pe = 0.0;
    }
  }
  if (pe > 0.0 || po > 0.0) {
    if (e.empty()) return 1.0;
    o.back() += po;
    e.back() += pe;
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < o.size(); ++i) stat += (o[i] - e[i]) * (o[i] - e[i]) / e[i];
  const double df = static_cast<double>(o.size() - 1 - fitted_params);
  if (df <= 0.0) return 1.0;
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

/// Poisson pmf computed in the log domain.
inline double poisson_pmf(unsigned k, double rate) {
  return std::exp(static_cast<double>(k) * std::log(rate) - rate - std::lgamma(k + 1.0));
}

/// Simpson's rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace testsupport
