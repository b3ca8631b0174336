#include "banditsum/comparator.hpp"

#include <cmath>
#include <stdexcept>

#include "banditsum/evaluation.hpp"
#include "banditsum/layers.hpp"

namespace banditsum::harness {

namespace {

// log(sigmoid(x)) without overflow.
double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

}  // namespace

SequentialComparator::SequentialComparator(std::unique_ptr<model::AffinityModel> network)
    : network_(std::move(network)) {
  if (!network_) throw std::invalid_argument("SequentialComparator: null network");
  count_weight_.add_segment("count_weight", 1);
}

SequentialComparator::SequentialComparator(const SequentialComparator& other)
    : network_(other.network_->clone()), count_weight_(other.count_weight_) {}

SequentialComparator& SequentialComparator::operator=(const SequentialComparator& other) {
  if (this != &other) {
    network_ = other.network_->clone();
    count_weight_ = other.count_weight_;
  }
  return *this;
}

SequentialComparator::Episode SequentialComparator::run(std::span<const double> logits,
                                                        std::size_t summary_length, Rng* rng) const {
  Episode ep;
  const double w = count_weight();
  std::size_t count = 0;
  for (std::size_t t = 0; t < logits.size() && count < summary_length; ++t) {
    const double x = logits[t] + w * static_cast<double>(count);
    const double p = model::layers::sigmoid(x);
    const bool include = rng ? uniform01(*rng) < p : p >= 0.5;
    ep.decisions.push_back(include);
    ep.probabilities.push_back(p);
    ep.counts.push_back(static_cast<double>(count));
    ep.log_prob += include ? log_sigmoid(x) : log_sigmoid(-x);
    if (include) {
      ep.selected.push_back(t);
      ++count;
    }
  }
  return ep;
}

SequentialComparator::Episode SequentialComparator::sample(std::span<const double> logits,
                                                           std::size_t summary_length, Rng& rng) const {
  return run(logits, summary_length, &rng);
}

SequentialComparator::Episode SequentialComparator::greedy(std::span<const double> logits,
                                                           std::size_t summary_length) const {
  return run(logits, summary_length, nullptr);
}

double SequentialComparator::log_prob(std::span<const double> logits, const std::vector<bool>& decisions,
                                      std::size_t summary_length) const {
  const double w = count_weight();
  std::size_t count = 0;
  double total = 0.0;
  std::size_t t = 0;
  for (; t < logits.size() && count < summary_length; ++t) {
    if (t >= decisions.size()) return -INFINITY;
    const double x = logits[t] + w * static_cast<double>(count);
    total += decisions[t] ? log_sigmoid(x) : log_sigmoid(-x);
    if (decisions[t]) ++count;
  }
  return t == decisions.size() ? total : -INFINITY;
}

policy::IndexSequence SequentialComparator::decode(const text::Document& document,
                                                   std::size_t summary_length) const {
  const auto fwd = network_->forward(document);
  const auto& logits = fwd.state.logits;
  return greedy(std::span<const double>(logits.data(), static_cast<std::size_t>(logits.size())),
                summary_length)
      .selected;
}

ComparatorGradient estimate_comparator_gradient(const SequentialComparator& comparator,
                                                const text::CorpusExample& example,
                                                const trainer::TrainConfig& cfg,
                                                trainer::BaselineState& baseline, Rng& rng) {
  const auto& network = comparator.network();
  const auto fwd = network.forward(example.document);
  const std::span<const double> logits(fwd.state.logits.data(),
                                       static_cast<std::size_t>(fwd.state.logits.size()));
  const std::size_t m = cfg.summary_length;

  std::vector<SequentialComparator::Episode> episodes;
  std::vector<double> rewards;
  for (std::size_t b = 0; b < cfg.samples; ++b) {
    episodes.push_back(comparator.sample(logits, m, rng));
    rewards.push_back(rouge::reward(episodes.back().selected, example.document, example.reference, cfg.rouge)
                          .reward);
  }
  const auto greedy = comparator.greedy(logits, m);

  ComparatorGradient out;
  out.step.greedy_reward = rouge::reward(greedy.selected, example.document, example.reference, cfg.rouge).reward;
  double sum = 0.0;
  for (double r : rewards) sum += r;
  out.step.mean_sample_reward = sum / static_cast<double>(rewards.size());
  out.step.baseline = trainer::compute_baseline(baseline, rewards, out.step.greedy_reward);

  std::vector<double> d_logits(logits.size(), 0.0);
  double d_count = 0.0;
  const double inv_b = 1.0 / static_cast<double>(cfg.samples);
  for (std::size_t b = 0; b < episodes.size(); ++b) {
    const double advantage = (rewards[b] - out.step.baseline) * inv_b;
    if (advantage == 0.0) continue;
    const auto& ep = episodes[b];
    for (std::size_t t = 0; t < ep.decisions.size(); ++t) {
      const double score = (ep.decisions[t] ? 1.0 : 0.0) - ep.probabilities[t];
      d_logits[t] += advantage * score;
      d_count += advantage * score * ep.counts[t];
    }
  }
  out.network_grad = network.backward_logits(fwd.state, d_logits);
  out.count_grad = model::GradVector{Eigen::VectorXd::Constant(1, d_count)};
  return out;
}

ComparatorTrainer::ComparatorTrainer(SequentialComparator& comparator, trainer::TrainConfig cfg)
    : comparator_(comparator),
      cfg_(std::move(cfg)),
      network_adam_(model::AdamState::for_params(comparator.network().params(), cfg_.adam)),
      count_adam_(model::AdamState::for_params(comparator.count_params(), cfg_.adam)),
      sample_rng_(derive_rng(cfg_.seed, 1)),
      order_rng_(derive_rng(cfg_.seed, 2)) {
  cfg_.validate();
  baseline_.kind = cfg_.baseline;
}

void ComparatorTrainer::run_epoch(const text::Corpus& corpus) {
  if (corpus.empty()) throw std::invalid_argument("train_sequential_comparator: empty corpus");
  for (std::size_t index : trainer::shuffled_order(corpus.size(), order_rng_)) {
    auto grad = estimate_comparator_gradient(comparator_, corpus[index], cfg_, baseline_, sample_rng_);
    model::adam_step(comparator_.network().params(), grad.network_grad, network_adam_);
    model::adam_step(comparator_.count_params(), grad.count_grad, count_adam_);
    ++documents_seen_;
  }
}

std::vector<ComparatorMetrics> train_sequential_comparator(SequentialComparator& comparator,
                                                           const text::Corpus& corpus,
                                                           const trainer::TrainConfig& cfg) {
  if (corpus.empty()) throw std::invalid_argument("train_sequential_comparator: empty corpus");
  auto evaluate_now = [&](std::size_t epoch) {
    const auto report = evaluate_selector(
        [&](const text::Document& d) { return comparator.decode(d, cfg.summary_length); }, corpus, cfg.rouge);
    return ComparatorMetrics{epoch, report.mean_reward};
  };
  std::vector<ComparatorMetrics> metrics{evaluate_now(0)};
  ComparatorTrainer trainer(comparator, cfg);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    trainer.run_epoch(corpus);
    metrics.push_back(evaluate_now(epoch));
  }
  return metrics;
}

}  // namespace banditsum::harness
