#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nrt/eval.hpp"
#include "support.hpp"

using namespace nrt;
using testsupport::make_topic;

TEST_SUITE("eval") {
  TEST_CASE("word-topic distribution of a single topic is all ones") {
    const auto w = word_topic_distribution({{0.1, 0.6, 0.3}});
    for (const auto& row : w) CHECK(row == std::vector<double>{1.0});
  }

  TEST_CASE("equal theta entries split a word evenly") {
    const auto w = word_topic_distribution({{0.2, 0.8}, {0.2, 0.8}});
    CHECK(w[0][0] == 0.5);
    CHECK(w[0][1] == 0.5);
  }

  TEST_CASE("word-topic distribution matches a naive normalisation loop") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    Matrix theta(3, std::vector<double>(4));
    for (auto& row : theta)
      for (double& v : row) v = u(gen);
    const auto w = word_topic_distribution(theta);
    REQUIRE(w.size() == 4);
    for (std::size_t n = 0; n < 4; ++n) {
      const double col = theta[0][n] + theta[1][n] + theta[2][n];
      for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(w[n][k] - theta[k][n] / col) < 1e-12);
    }
    CHECK_THROWS_AS(word_topic_distribution({{0.0, 1.0}, {0.0, 1.0}}), std::domain_error);
  }

  TEST_CASE("document proportions normalise r pi beta over the chosen topics") {
    const Corpus corpus(2, 1, {});
    ModelState s(corpus, SamplerMode::truncated);
    s.add_topic(make_topic({1.0}, 2.0, {0.5, 0.5}, {1, 0}, {1.0, 1.0}));
    s.add_topic(make_topic({1.0}, 1.0, {0.5, 0.5}, {1, 0}, {3.0, 1.0}));
    const std::vector<std::size_t> topics{0, 1};
    const auto p = document_topic_proportions(s, topics);
    CHECK(p[0][0] == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(p[0][1] == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(p[1] == std::vector<double>{0.0, 0.0});
  }

  TEST_CASE("link prediction without test-train links scores zero") {
    const Corpus corpus(2, 1, {{0, 0, 2}, {1, 0, 1}});
    const DocumentNetwork g(2);
    const std::vector<std::size_t> test{0}, train{1};
    const auto r = link_prediction_score(test, train, g, {{1.0}, {1.0}}, {{1.0}}, corpus);
    CHECK(r.score == 0.0);
    CHECK(r.links == 0);
  }

  TEST_CASE("identical topic and word vectors give log(1) = 0") {
    const Corpus corpus(2, 1, {{0, 0, 3}, {1, 0, 1}});
    DocumentNetwork g(2);
    g.add_edge(0, 1);
    const std::vector<std::size_t> test{0}, train{1};
    const auto r = link_prediction_score(test, train, g, {{0.3, 0.7}, {0.3, 0.7}}, {{0.3, 0.7}}, corpus);
    CHECK(r.links == 1);
    CHECK(std::abs(r.score) < 1e-15);
  }

  TEST_CASE("link prediction on a hand-set two-document toy") {
    // test doc 0 has word 0 twice and word 1 once; its only neighbour is doc 1
    const Corpus corpus(2, 2, {{0, 0, 2}, {0, 1, 1}, {1, 1, 5}});
    DocumentNetwork g(2);
    g.add_edge(0, 1);
    const Matrix doc_topics{{0.5, 0.5}, {0.6, 0.4}};
    const Matrix word_topics{{0.9, 0.1}, {0.3, 0.7}};
    const std::vector<std::size_t> test{0}, train{1};
    const auto r = link_prediction_score(test, train, g, doc_topics, word_topics, corpus);
    const double c0 = (0.6 * 0.9 + 0.4 * 0.1) / (std::sqrt(0.36 + 0.16) * std::sqrt(0.81 + 0.01));
    const double c1 = (0.6 * 0.3 + 0.4 * 0.7) / (std::sqrt(0.36 + 0.16) * std::sqrt(0.09 + 0.49));
    CHECK(std::abs(r.score - (2 * std::log(c0) + std::log(c1))) < 1e-10);
  }

  TEST_CASE("word prediction skips documents with no training neighbour") {
    const Corpus corpus(2, 1, {{0, 0, 2}, {1, 0, 1}});
    const DocumentNetwork g(2);
    const std::vector<std::size_t> test{0}, train{1};
    const auto r = word_prediction_score(test, train, g, {{1.0}, {1.0}}, {{1.0}}, corpus);
    CHECK(r.score == 0.0);
    CHECK(r.excluded_docs == 1);
    CHECK(r.scored_docs == 0);
  }

  TEST_CASE("a single neighbour's interest is used as is") {
    const Corpus corpus(2, 2, {{0, 0, 1}, {1, 0, 1}});
    DocumentNetwork g(2);
    g.add_edge(0, 1);
    const Matrix theta{{0.25, 0.75}, {0.5, 0.5}};
    const Matrix doc_topics{{0.0, 0.0}, {0.3, 0.7}};
    const std::vector<std::size_t> test{0}, train{1};
    const auto r = word_prediction_score(test, train, g, doc_topics, theta, corpus);
    CHECK(std::abs(r.score - (std::log(0.3 * 0.25) + std::log(0.7 * 0.5))) < 1e-12);
  }

  TEST_CASE("word prediction on a K = 2, two-word toy") {
    const Corpus corpus(3, 2, {{0, 0, 1}, {0, 1, 2}, {1, 0, 4}, {2, 1, 4}});
    DocumentNetwork g(3);
    g.add_edge(0, 1);
    g.add_edge(0, 2);
    const Matrix theta{{0.7, 0.3}, {0.1, 0.9}};
    const Matrix doc_topics{{1.0, 0.0}, {0.2, 0.8}, {0.6, 0.4}};
    const std::vector<std::size_t> test{0}, train{1, 2};
    const auto r = word_prediction_score(test, train, g, doc_topics, theta, corpus);
    // neighbour average (0.4, 0.6)
    const double expected = 1 * (std::log(0.4 * 0.7) + std::log(0.6 * 0.1)) + 2 * (std::log(0.4 * 0.3) + std::log(0.6 * 0.9));
    CHECK(std::abs(r.score - expected) < 1e-10);
    CHECK(r.scored_docs == 1);
    CHECK(r.floored_terms == 0);
  }

  TEST_CASE("a zero interest entry is floored and counted") {
    const Corpus corpus(2, 1, {{0, 0, 1}, {1, 0, 1}});
    DocumentNetwork g(2);
    g.add_edge(0, 1);
    const std::vector<std::size_t> test{0}, train{1};
    const auto r = word_prediction_score(test, train, g, {{0.5, 0.5}, {1.0, 0.0}}, {{1.0}, {1.0}}, corpus);
    CHECK(r.floored_terms == 1);
    CHECK(r.score == doctest::Approx(std::log(kWordPredictionFloor)));
  }

  TEST_CASE("K histograms count post-burn-in iterations") {
    ChainTrace constant;
    for (std::size_t i = 1; i <= 15; ++i) constant.append({i, 0.0, 3, 0.0});
    const auto h = topic_count_histogram(constant, 5);
    CHECK(h == std::map<std::size_t, std::size_t>{{3, 10}});

    ChainTrace alt;
    for (std::size_t i = 1; i <= 20; ++i) alt.append({i, 0.0, i % 2 ? 3u : 4u, 0.0});
    const auto a = topic_count_histogram(alt, 0);
    CHECK(a == std::map<std::size_t, std::size_t>{{3, 10}, {4, 10}});
    std::size_t total = 0;
    for (auto [k, c] : topic_count_histogram(alt, 7)) total += c;
    CHECK(total == 13);
    CHECK_THROWS_AS(topic_count_histogram(alt, 20), std::invalid_argument);

    EvalReport rep;
    rep.k_histogram = a;
    CHECK(rep.mean_k_active() == 3.5);
  }

  TEST_CASE("trace iterations must increase") {
    ChainTrace t;
    t.append({1, 0.0, 1, 0.0});
    CHECK_THROWS_AS(t.append({1, 0.0, 1, 0.0}), std::logic_error);
  }
}
