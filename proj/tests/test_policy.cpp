#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "banditsum/policy.hpp"
#include "support.hpp"

using namespace banditsum;
using namespace banditsum::policy;
using testing_support::close_relative;

namespace {

PolicyConfig config(std::size_t m, double eps) {
  PolicyConfig c;
  c.summary_length = m;
  c.epsilon = eps;
  return c;
}

AffinityVector random_affinities(Rng& rng, std::size_t n, double lo = 0.05, double hi = 0.95) {
  AffinityVector a(n);
  for (auto& v : a) v = lo + (hi - lo) * uniform01(rng);
  return a;
}

IndexSequence random_sequence(Rng& rng, std::size_t n, std::size_t m) {
  IndexSequence all(n);
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t i = 0; i < m; ++i) std::swap(all[i], all[i + uniform_index(rng, n - i)]);
  all.resize(m);
  return all;
}

// Direct product of per-step probabilities.
double product_probability(const IndexSequence& seq, const AffinityVector& a, double eps) {
  std::vector<bool> taken(a.size(), false);
  double p = 1.0;
  for (std::size_t j = 0; j < seq.size(); ++j) {
    double z = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
      if (!taken[t]) z += std::max(a[t], 1e-6);
    }
    p *= eps / static_cast<double>(a.size() - j) + (1 - eps) * std::max(a[seq[j]], 1e-6) / z;
    taken[seq[j]] = true;
  }
  return p;
}

}  // namespace

TEST(PolicyConfig, Validation) {
  EXPECT_NO_THROW(PolicyConfig{}.validate());
  EXPECT_THROW(config(0, 0.1).validate(), std::invalid_argument);
  EXPECT_THROW(config(3, 1.5).validate(), std::invalid_argument);
  EXPECT_THROW(config(3, -0.1).validate(), std::invalid_argument);
  PolicyConfig c;
  c.affinity_floor = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_EQ(config(3, 0.1).effective_length(2), 2u);
  EXPECT_EQ(config(3, 0.1).effective_length(10), 3u);
}

TEST(LogProb, HandExamples) {
  const AffinityVector half{0.5, 0.5, 0.5};
  const IndexSequence first_two{0, 1};
  EXPECT_NEAR(log_prob(first_two, half, config(2, 0.0)), std::log(1.0 / 6.0), 1e-14);
  const AffinityVector a{0.8, 0.4, 0.2, 0.6};
  const IndexSequence pick{0, 3};
  EXPECT_NEAR(log_prob(pick, a, config(2, 0.0)), std::log(0.2), 1e-14);
  const AffinityVector b{0.9, 0.05, 0.3};
  for (const auto& seq : {IndexSequence{0, 1}, IndexSequence{2, 1}, IndexSequence{1, 0}}) {
    EXPECT_NEAR(log_prob(seq, b, config(2, 1.0)), std::log(1.0 / 6.0), 1e-14);
  }
}

TEST(LogProb, InvalidSequences) {
  const AffinityVector a{0.5, 0.5, 0.5};
  const IndexSequence dup{0, 0}, short_seq{0}, bad{0, 5};
  EXPECT_EQ(log_prob(dup, a, config(2, 0.1)), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(log_prob(short_seq, a, config(2, 0.1)), -std::numeric_limits<double>::infinity());
  EXPECT_THROW(log_prob(bad, a, config(2, 0.1)), std::out_of_range);
  const AffinityVector out_of_range{0.5, 1.5};
  EXPECT_THROW(validate_affinities(out_of_range), std::invalid_argument);
  EXPECT_THROW(validate_affinities(AffinityVector{}), std::invalid_argument);
}

TEST(LogProb, MatchesDirectProductOnRandomInstances) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 10);
    const std::size_t m = 1 + uniform_index(rng, n);
    const double eps = uniform01(rng) < 0.3 ? 0.0 : uniform01(rng);
    const auto a = random_affinities(rng, n, 0.0, 1.0);
    const auto seq = random_sequence(rng, n, m);
    EXPECT_NEAR(log_prob(seq, a, config(m, eps)), std::log(product_probability(seq, a, eps)), 1e-12);
  }
}

TEST(LogProbGrad, HandExamples) {
  const AffinityVector a{0.5, 0.5};
  const IndexSequence pick{0};
  const auto g = log_prob_grad(pick, a, config(1, 0.0));
  EXPECT_NEAR(g[0], 1.0, 1e-14);
  EXPECT_NEAR(g[1], -1.0, 1e-14);
  const AffinityVector b{0.2, 0.7, 0.4};
  const IndexSequence seq{1, 2};
  for (double v : log_prob_grad(seq, b, config(2, 1.0))) EXPECT_EQ(v, 0.0);
}

TEST(LogProbGrad, MatchesCentralDifferences) {
  Rng rng(99);
  const double h = 1e-5;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 8);
    const std::size_t m = 1 + uniform_index(rng, n);
    const double eps = trial % 3 == 0 ? 0.0 : uniform01(rng);
    const auto cfg = config(m, eps);
    auto a = random_affinities(rng, n);
    const auto seq = random_sequence(rng, n, m);
    const auto g = log_prob_grad(seq, a, cfg);
    for (std::size_t t = 0; t < n; ++t) {
      const double keep = a[t];
      a[t] = keep + h;
      const double up = log_prob(seq, a, cfg);
      a[t] = keep - h;
      const double down = log_prob(seq, a, cfg);
      a[t] = keep;
      const double fd = (up - down) / (2 * h);
      EXPECT_TRUE(close_relative(g[t], fd, 1e-4)) << "trial " << trial << " t " << t << ": " << g[t] << " vs " << fd;
    }
  }
}

TEST(LogProbGrad, FlooredEntriesGetZeroGradient) {
  const AffinityVector a{0.0, 0.6, 1e-9, 0.3};
  const IndexSequence seq{1, 3};
  const auto g = log_prob_grad(seq, a, config(2, 0.1));
  EXPECT_EQ(g[0], 0.0);
  EXPECT_EQ(g[2], 0.0);
  EXPECT_NE(g[1], 0.0);
}

TEST(GreedyDecode, Examples) {
  const AffinityVector a{0.1, 0.9, 0.3};
  EXPECT_EQ(greedy_decode(a, config(2, 0.1)), (IndexSequence{1, 2}));
  const AffinityVector flat{0.4, 0.4, 0.4};
  EXPECT_EQ(greedy_decode(flat, config(2, 0.1)), (IndexSequence{0, 1}));
  const AffinityVector one{0.2};
  EXPECT_EQ(greedy_decode(one, config(3, 0.1)), (IndexSequence{0}));
}

TEST(GreedyDecode, AttainsMaximumLogProb) {
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 6);
    const std::size_t m = 1 + uniform_index(rng, std::min<std::size_t>(3, n));
    const auto cfg = config(m, 0.0);
    const auto a = random_affinities(rng, n, 0.0, 1.0);
    const auto greedy = greedy_decode(a, cfg);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [seq, p] : enumerate_probabilities(a, cfg)) best = std::max(best, log_prob(seq, a, cfg));
    EXPECT_NEAR(log_prob(greedy, a, cfg), best, 1e-12);
  }
}

TEST(Sample, SingleSentenceDocument) {
  Rng rng(1);
  const AffinityVector a{0.3};
  for (double eps : {0.0, 0.1, 1.0}) EXPECT_EQ(sample(a, config(3, eps), rng), (IndexSequence{0}));
}

TEST(Sample, UniformCasesMatchOneSixth) {
  const std::size_t draws = 100000;
  for (auto [a, eps] : {std::pair{AffinityVector{0.9, 0.2, 0.05}, 1.0}, std::pair{AffinityVector{0.5, 0.5, 0.5}, 0.0}}) {
    Rng rng(3);
    std::map<IndexSequence, std::size_t> counts;
    for (std::size_t i = 0; i < draws; ++i) ++counts[sample(a, config(2, eps), rng)];
    ASSERT_EQ(counts.size(), 6u);
    for (const auto& [seq, c] : counts) EXPECT_NEAR(static_cast<double>(c) / draws, 1.0 / 6.0, 0.01);
  }
}

TEST(Sample, FrequenciesMatchEnumeratedProbabilities) {
  const AffinityVector a{0.9, 0.1, 0.5, 0.3};
  const auto cfg = config(2, 0.1);
  const auto probs = enumerate_probabilities(a, cfg);
  const std::size_t draws = 100000;
  Rng rng(8);
  std::map<IndexSequence, std::size_t> counts;
  for (std::size_t i = 0; i < draws; ++i) ++counts[sample(a, cfg, rng)];
  for (const auto& [seq, p] : probs) {
    const double freq = static_cast<double>(counts[seq]) / draws;
    const double se = std::sqrt(p * (1 - p) / draws);
    EXPECT_LE(std::abs(freq - p), 3 * se + 1e-12) << "sequence starting " << seq[0];
  }
}

TEST(Enumerate, SumsToOneAndMatchesLogProb) {
  Rng rng(4);
  for (std::size_t n = 1; n <= kMaxEnumerableSentences; ++n) {
    for (std::size_t m = 1; m <= n; ++m) {
      for (double eps : {0.0, 0.1, 1.0}) {
        const auto a = random_affinities(rng, n, 0.0, 1.0);
        const auto cfg = config(m, eps);
        double total = 0.0;
        for (const auto& [seq, p] : enumerate_probabilities(a, cfg)) {
          total += p;
          EXPECT_NEAR(p, std::exp(log_prob(seq, a, cfg)), 1e-12);
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
      }
    }
  }
}

TEST(Enumerate, Examples) {
  const AffinityVector a{0.2, 0.6, 0.4};
  EXPECT_EQ(enumerate_probabilities(a, config(2, 0.1)).size(), 6u);
  const AffinityVector degenerate{1.0, 0.0};
  const auto probs = enumerate_probabilities(degenerate, config(2, 0.0));
  EXPECT_NEAR(probs.at(IndexSequence{0, 1}), 1.0, 1e-5);
  EXPECT_THROW(enumerate_probabilities(AffinityVector(9, 0.5), config(2, 0.1)), std::invalid_argument);
}

TEST(Distribution, InvariantToAffinityScale) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 6);
    const auto a = random_affinities(rng, n, 0.1, 0.5);
    AffinityVector scaled = a;
    for (auto& v : scaled) v *= 2.0;
    const auto seq = random_sequence(rng, n, std::min<std::size_t>(3, n));
    const auto cfg = config(seq.size(), 0.1);
    EXPECT_NEAR(log_prob(seq, a, cfg), log_prob(seq, scaled, cfg), 1e-12);
  }
}

TEST(Distribution, EquivariantUnderPermutation) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 6);
    const auto a = random_affinities(rng, n);
    const auto perm = random_sequence(rng, n, n);
    AffinityVector permuted(n);
    for (std::size_t t = 0; t < n; ++t) permuted[perm[t]] = a[t];
    const auto seq = random_sequence(rng, n, std::min<std::size_t>(3, n));
    IndexSequence mapped;
    for (auto i : seq) mapped.push_back(perm[i]);
    const auto cfg = config(seq.size(), 0.1);
    EXPECT_NEAR(log_prob(seq, a, cfg), log_prob(mapped, permuted, cfg), 1e-12);
  }
}
