#include <doctest.h>

#include <cmath>
#include <vector>

#include "nrt/hyperparameters.hpp"
#include "nrt/mrf.hpp"
#include "nrt/network.hpp"
#include "nrt/random.hpp"
#include "nrt/sampler.hpp"
#include "support.hpp"

using namespace nrt;

namespace {

std::vector<double> draw_q(bool r, const std::vector<double>& neighbors, std::size_t n, std::uint64_t seed) {
  Hyperparameters h;
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) {
    const QDraw d = sample_q(r, neighbors, h, rng);
    REQUIRE_FALSE(d.capped);
    v = d.value;
  }
  return out;
}

// Unnormalised site density for a0 = c0 = 1.
double site_density(double q, bool r, const std::vector<double>& neighbors) {
  const double prior = r ? q : 1.0 - q;
  return prior * std::exp(-mrf_energy(q, neighbors));
}

}  // namespace

TEST_SUITE("mrf") {
  TEST_CASE("energy is the sum of squared differences") {
    CHECK(mrf_energy(0.5, std::vector<double>{0.5, 0.5}) == 0.0);
    CHECK(mrf_energy(0.2, std::vector<double>{0.4}) == doctest::Approx(0.04).epsilon(1e-14));
    CHECK(mrf_energy(0.3, std::vector<double>{}) == 0.0);
    CHECK(mrf_energy(0.1, std::vector<double>{0.2, 0.4}) == doctest::Approx(0.01 + 0.09).epsilon(1e-14));
  }

  TEST_CASE("isolated site with r = 1 draws from Beta(2, 1)") {
    const auto x = draw_q(true, {}, 100000, 1);
    CHECK(testsupport::moments(x).mean == doctest::Approx(2.0 / 3.0).epsilon(0.005 / (2.0 / 3.0)));
    CHECK(testsupport::ks_pvalue(x, [](double v) { return v * v; }) > 0.01);
  }

  TEST_CASE("isolated site with r = 0 draws from Beta(1, 2)") {
    const auto x = draw_q(false, {}, 100000, 2);
    CHECK(std::abs(testsupport::moments(x).mean - 1.0 / 3.0) < 0.005);
    CHECK(testsupport::ks_pvalue(x, [](double v) { return 1.0 - (1.0 - v) * (1.0 - v); }) > 0.01);
  }

  TEST_CASE("a neighbour at 0.9 pulls q upward by the amount quadrature predicts") {
    const std::vector<double> nb{0.9};
    const auto x = draw_q(false, nb, 100000, 3);
    const double mean = testsupport::moments(x).mean;
    const double z = testsupport::simpson([&](double q) { return site_density(q, false, nb); }, 0.0, 1.0);
    const double m1 = testsupport::simpson([&](double q) { return q * site_density(q, false, nb); }, 0.0, 1.0) / z;
    CHECK(mean > 1.0 / 3.0 + 0.01);
    CHECK(std::abs(mean - m1) < 0.01);
  }

  TEST_CASE("high-degree site matches the quadrature cdf") {
    std::vector<double> nb;
    for (int i = 0; i < 40; ++i) nb.push_back(0.15 + 0.6 * (i % 7) / 6.0);
    for (bool r : {true, false}) {
      const auto x = draw_q(r, nb, 20000, r ? 4 : 5);
      const double z = testsupport::simpson([&](double q) { return site_density(q, r, nb); }, 0.0, 1.0);
      auto cdf = [&](double v) {
        return testsupport::simpson([&](double q) { return site_density(q, r, nb); }, 0.0, v, 400) / z;
      };
      CHECK(testsupport::ks_pvalue(x, cdf) > 0.01);
    }
  }

  TEST_CASE("centred draw equals the neighbour-list draw") {
    Hyperparameters h;
    const std::vector<double> nb{0.1, 0.7, 0.4};
    Rng a(9), b(9);
    for (int i = 0; i < 100; ++i) {
      const double x = sample_q(true, nb, h, a).value;
      const double y = sample_q_centered(true, nb.size(), 0.4, h, b).value;
      CHECK(x == doctest::Approx(y).epsilon(1e-12));
    }
  }

  TEST_CASE("proposal cap is reported and the last proposal returned") {
    Hyperparameters h;
    h.a0 = 1000.0;  // proposals pile up near 1, neighbours sit at 0.001
    h.c0 = 1.0;
    std::vector<double> nb(5000, 0.001);
    Rng rng(3);
    const QDraw d = sample_q(true, nb, h, rng, 5);
    CHECK(d.capped);
    CHECK(d.proposals == 5);
    CHECK(d.value > 0.0);
    CHECK(d.value < 1.0);
  }

  TEST_CASE("neighbourhoods follow the network and colouring separates neighbours") {
    DocumentNetwork g(6);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 0);
    g.add_edge(3, 4);
    const NeighborhoodIndex idx(g);
    for (std::size_t d = 0; d < 6; ++d)
      for (std::uint32_t l : idx.neighbors(d)) {
        const auto back = idx.neighbors(l);
        CHECK(std::find(back.begin(), back.end(), d) != back.end());
      }
    CHECK(idx.neighbors(5).empty());
    const auto color = idx.color_classes();
    for (const auto& [a, b] : g.edges()) CHECK(color[a] != color[b]);
  }

  TEST_CASE("a link shrinks the stationary spread of q between two documents") {
    const Corpus corpus(2, 2, {{0, 0, 3}, {0, 1, 1}, {1, 0, 1}, {1, 1, 2}});
    Hyperparameters h;
    h.truncation_K = 1;
    auto spread = [&](const DocumentNetwork& g, std::uint64_t seed) {
      SamplerConfig cfg;
      cfg.max_iter = 4000;
      cfg.burnin = 100;
      cfg.seed = seed;
      double acc = 0.0;
      std::size_t n = 0;
      run_truncated(corpus, g, h, cfg, [&](const ModelState& s, std::size_t iter) {
        if (iter <= cfg.burnin) return;
        const double diff = s.q(0, 0) - s.q(1, 0);
        acc += diff * diff;
        ++n;
      });
      return acc / static_cast<double>(n);
    };
    DocumentNetwork linked(2);
    linked.add_edge(0, 1);
    const DocumentNetwork unlinked(2);
    const double with_link = spread(linked, 21);
    const double without = spread(unlinked, 21);
    CHECK(with_link < without);
    // Unlinked q's are independent Beta(2, 1): E(q1 - q2)^2 = 2 Var = 1/9.
    CHECK(without == doctest::Approx(1.0 / 9.0).epsilon(0.1));
  }
}
