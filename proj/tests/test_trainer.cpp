#include <gtest/gtest.h>

#include "banditsum/evaluation.hpp"
#include "banditsum/trainer.hpp"
#include "support.hpp"

using namespace banditsum;
using namespace banditsum::trainer;
using namespace testing_support;

namespace {

std::unique_ptr<model::AffinityModel> bow_for(const text::Corpus& corpus, std::uint64_t seed) {
  return model::build_bag_of_words_model(model::Vocabulary::build(corpus), 8, 8, seed);
}

text::Corpus planted(std::size_t docs, std::uint64_t seed, const std::string& prefix = "doc") {
  text::SyntheticCorpusOptions o;
  o.n_docs = docs;
  o.seed = seed;
  o.id_prefix = prefix;
  return text::generate_synthetic_corpus(o);
}

}  // namespace

TEST(Baseline, Kinds) {
  const std::vector<double> rewards{0.2, 0.4};
  BaselineState none{BaselineKind::none};
  EXPECT_EQ(compute_baseline(none, rewards, 0.9), 0.0);
  BaselineState batch{BaselineKind::batch_average};
  EXPECT_NEAR(compute_baseline(batch, rewards, 0.9), 0.3, 1e-15);
  BaselineState greedy{BaselineKind::greedy_self_critical};
  EXPECT_EQ(compute_baseline(greedy, rewards, 0.9), 0.9);
}

TEST(Baseline, GlobalAverageIsReadBeforeUpdate) {
  BaselineState s{BaselineKind::global_average};
  const std::vector<double> first{0.2, 0.4}, second{1.0};
  EXPECT_EQ(compute_baseline(s, first, 0.0), 0.0);
  EXPECT_NEAR(s.running_mean, 0.3, 1e-15);
  EXPECT_NEAR(compute_baseline(s, second, 0.0), 0.3, 1e-15);
  EXPECT_NEAR(s.running_mean, 1.6 / 3.0, 1e-15);
  EXPECT_EQ(s.running_count, 3u);
}

TEST(Baseline, SelfCriticalIsOneWhenGreedySummaryIsTheReference) {
  const auto ex = make_example("d", {"a b", "c d", "e f"}, {"c d"});
  TrainConfig cfg;
  cfg.summary_length = 1;
  BaselineState s{BaselineKind::greedy_self_critical};
  const std::vector<double> affinities{0.1, 0.9, 0.2}, rewards{0.0};
  EXPECT_EQ(compute_baseline(s, ex, affinities, rewards, cfg), 1.0);
}

TEST(BaselineKind, ParsesNames) {
  for (auto k : {BaselineKind::none, BaselineKind::greedy_self_critical, BaselineKind::batch_average,
                 BaselineKind::global_average}) {
    EXPECT_EQ(parse_baseline_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_baseline_kind("median"), std::invalid_argument);
}

TEST(TrainConfig, DefaultsAndValidation) {
  const TrainConfig c;
  EXPECT_EQ(c.samples, 20u);
  EXPECT_EQ(c.summary_length, 3u);
  EXPECT_EQ(c.epsilon, 0.1);
  EXPECT_EQ(c.baseline, BaselineKind::greedy_self_critical);
  TrainConfig bad;
  bad.samples = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = TrainConfig{};
  bad.validation_interval = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(TrainStep, ZeroAdvantageLeavesParametersUnchanged) {
  // Every summary of one sentence scores the same.
  const auto ex = make_example("d", {"a b", "a b", "a b"}, {"a b"});
  const text::Corpus corpus{ex};
  auto m = bow_for(corpus, 1);
  TrainConfig cfg;
  cfg.summary_length = 1;
  cfg.adam.weight_decay = 0.0;
  cfg.adam.lr = 0.1;
  BaselineState baseline{cfg.baseline};
  auto adam = model::AdamState::for_params(m->params(), cfg.adam);
  Rng rng(3);
  const Eigen::VectorXd before = m->params().values();
  const auto step = train_step(*m, ex, cfg, baseline, adam, rng);
  EXPECT_EQ(step.baseline, step.greedy_reward);
  EXPECT_EQ(m->params().values(), before);
}

TEST(TrainStep, SingleSampleWithoutBaselineIsScoreTimesReward) {
  Rng data(4);
  const auto corpus = random_corpus(data, 5, 6, 5, 8);
  auto m = bow_for(corpus, 2);
  randomize_params(*m, data, 0.5);
  TrainConfig cfg;
  cfg.samples = 1;
  cfg.baseline = BaselineKind::none;
  for (const auto& ex : corpus) {
    BaselineState baseline{cfg.baseline};
    Rng rng(11);
    Rng replay = rng;
    const auto est = estimate_gradient(*m, ex, cfg, baseline, rng);
    const auto fwd = m->forward(ex.document);
    const auto seq = policy::sample(fwd.affinities, cfg.policy(), replay);
    ASSERT_EQ(est.sequences.front(), seq);
    const double r = rouge::reward(seq, ex.document, ex.reference).reward;
    auto g = policy::log_prob_grad(seq, fwd.affinities, cfg.policy());
    for (auto& x : g) x *= r;
    const auto want = m->backward(fwd.state, g);
    EXPECT_TRUE(est.param_grad.values.isApprox(want.values, 1e-12) ||
                (want.values.isZero(0.0) && est.param_grad.values.isZero(0.0)));
  }
}

TEST(TrainStep, SingleSentenceDocumentHasZeroGradientWithoutExploration) {
  const auto ex = make_example("d", {"only one sentence"}, {"one sentence"});
  const text::Corpus corpus{ex};
  auto m = bow_for(corpus, 3);
  TrainConfig cfg;
  cfg.epsilon = 0.0;
  cfg.baseline = BaselineKind::none;
  BaselineState baseline{cfg.baseline};
  Rng rng(5);
  const auto est = estimate_gradient(*m, ex, cfg, baseline, rng);
  EXPECT_TRUE(est.param_grad.values.isZero(0.0));
  EXPECT_GT(est.step.mean_sample_reward, 0.0);
}

TEST(Train, ZeroEpochsLeavesModelUnchanged) {
  const auto corpus = planted(10, 1);
  auto m = bow_for(corpus, 1);
  const Eigen::VectorXd before = m->params().values();
  TrainConfig cfg;
  cfg.epochs = 0;
  EXPECT_TRUE(train(*m, corpus, corpus, cfg).empty());
  EXPECT_EQ(m->params().values(), before);
}

TEST(Train, RejectsEmptyCorpora) {
  const auto corpus = planted(3, 1);
  auto m = bow_for(corpus, 1);
  EXPECT_THROW(train(*m, {}, corpus, TrainConfig{}), std::invalid_argument);
  EXPECT_THROW(train(*m, corpus, {}, TrainConfig{}), std::invalid_argument);
}

TEST(Train, SameSeedSameCurveAndParameters) {
  const auto corpus = planted(30, 2);
  const auto validation = planted(10, 3, "val");
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.validation_interval = 25;
  cfg.seed = 9;
  cfg.adam.lr = 0.01;
  auto a = bow_for(corpus, 5);
  auto b = bow_for(corpus, 5);
  const auto ma = train(*a, corpus, validation, cfg);
  const auto mb = train(*b, corpus, validation, cfg);
  ASSERT_EQ(ma.size(), 3u);
  ASSERT_EQ(mb.size(), 3u);
  EXPECT_EQ(ma.back().documents_seen, 60u);
  for (std::size_t i = 0; i < ma.size(); ++i) {
    EXPECT_EQ(ma[i].documents_seen, mb[i].documents_seen);
    EXPECT_EQ(ma[i].mean_sample_reward, mb[i].mean_sample_reward);
    EXPECT_EQ(ma[i].greedy_reward, mb[i].greedy_reward);
    EXPECT_EQ(ma[i].validation_mean_rouge_f1, mb[i].validation_mean_rouge_f1);
  }
  EXPECT_EQ(a->params().values(), b->params().values());

  cfg.seed = 10;
  auto c = bow_for(corpus, 5);
  train(*c, corpus, validation, cfg);
  EXPECT_NE(a->params().values(), c->params().values());
}

TEST(Train, CallbackSeesEveryRowAndRewardsStayInRange) {
  const auto corpus = planted(20, 4);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.validation_interval = 7;
  cfg.validation_limit = 5;
  auto m = bow_for(corpus, 1);
  std::size_t calls = 0;
  const auto metrics = train(*m, corpus, corpus, cfg, [&](const model::AffinityModel&, const TrainingMetrics&) { ++calls; });
  EXPECT_EQ(calls, metrics.size());
  EXPECT_EQ(metrics.size(), 3u);  // after 7, 14 and the final 20
  for (const auto& row : metrics) {
    for (double r : {row.mean_sample_reward, row.greedy_reward, row.validation_mean_rouge_f1}) {
      EXPECT_GE(r, 0.0);
      EXPECT_LE(r, 1.0);
    }
  }
}

TEST(Train, SampleRewardRisesOnPlantedCorpus) {
  const auto corpus = planted(100, 6);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.validation_interval = 100;
  cfg.adam.lr = 0.01;
  auto m = bow_for(corpus, 2);
  const auto metrics = train(*m, corpus, corpus, cfg);
  ASSERT_EQ(metrics.size(), 3u);
  EXPECT_GT(metrics.back().mean_sample_reward, metrics.front().mean_sample_reward);
}

TEST(ShuffledOrder, IsAPermutation) {
  Rng rng(1);
  auto order = shuffled_order(50, rng);
  std::sort(order.begin(), order.end());
  for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(order[i], i);
}
