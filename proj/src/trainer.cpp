#include "banditsum/trainer.hpp"

#include <chrono>
#include <numeric>
#include <stdexcept>

#include "banditsum/evaluation.hpp"

namespace banditsum::trainer {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double mean(std::span<const double> xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::none: return "none";
    case BaselineKind::greedy_self_critical: return "greedy_self_critical";
    case BaselineKind::batch_average: return "batch_average";
    case BaselineKind::global_average: return "global_average";
  }
  return "unknown";
}

BaselineKind parse_baseline_kind(std::string_view name) {
  for (auto kind : {BaselineKind::none, BaselineKind::greedy_self_critical, BaselineKind::batch_average,
                    BaselineKind::global_average}) {
    if (name == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown baseline kind: " + std::string(name));
}

policy::PolicyConfig TrainConfig::policy() const {
  policy::PolicyConfig p;
  p.summary_length = summary_length;
  p.epsilon = epsilon;
  p.affinity_floor = affinity_floor;
  return p;
}

void TrainConfig::validate() const {
  if (samples < 1) throw std::invalid_argument("B (samples) must be at least 1");
  if (validation_interval < 1) throw std::invalid_argument("validation_interval must be at least 1");
  policy().validate();
}

double compute_baseline(BaselineState& state, std::span<const double> rewards, double greedy_reward) {
  switch (state.kind) {
    case BaselineKind::none:
      return 0.0;
    case BaselineKind::greedy_self_critical:
      return greedy_reward;
    case BaselineKind::batch_average:
      return mean(rewards);
    case BaselineKind::global_average: {
      const double used = state.running_mean;
      for (double r : rewards) {
        ++state.running_count;
        state.running_mean += (r - state.running_mean) / static_cast<double>(state.running_count);
      }
      return used;
    }
  }
  return 0.0;
}

double compute_baseline(BaselineState& state, const text::CorpusExample& example,
                        std::span<const double> affinities, std::span<const double> rewards,
                        const TrainConfig& cfg) {
  double greedy = 0.0;
  if (state.kind == BaselineKind::greedy_self_critical) {
    const auto indices = policy::greedy_decode(affinities, cfg.policy());
    greedy = rouge::reward(indices, example.document, example.reference, cfg.rouge).reward;
  }
  return compute_baseline(state, rewards, greedy);
}

GradientEstimate estimate_gradient(const model::AffinityModel& model, const text::CorpusExample& example,
                                   const TrainConfig& cfg, BaselineState& baseline, Rng& rng) {
  const policy::PolicyConfig pcfg = cfg.policy();
  const auto fwd = model.forward(example.document);
  const auto& affinities = fwd.affinities;

  GradientEstimate est;
  est.sequences.reserve(cfg.samples);
  est.rewards.reserve(cfg.samples);
  for (std::size_t b = 0; b < cfg.samples; ++b) {
    est.sequences.push_back(policy::sample(affinities, pcfg, rng));
    est.rewards.push_back(
        rouge::reward(est.sequences.back(), example.document, example.reference, cfg.rouge).reward);
  }

  const auto greedy = policy::greedy_decode(affinities, pcfg);
  est.step.greedy_reward = rouge::reward(greedy, example.document, example.reference, cfg.rouge).reward;
  est.step.mean_sample_reward = mean(est.rewards);
  est.step.baseline = compute_baseline(baseline, est.rewards, est.step.greedy_reward);

  est.affinity_grad.assign(affinities.size(), 0.0);
  const double inv_b = 1.0 / static_cast<double>(cfg.samples);
  for (std::size_t b = 0; b < cfg.samples; ++b) {
    const double advantage = est.rewards[b] - est.step.baseline;
    if (advantage == 0.0) continue;
    const auto g = policy::log_prob_grad(est.sequences[b], affinities, pcfg);
    for (std::size_t t = 0; t < g.size(); ++t) est.affinity_grad[t] += inv_b * advantage * g[t];
  }
  est.param_grad = model.backward(fwd.state, est.affinity_grad);
  return est;
}

StepResult train_step(model::AffinityModel& model, const text::CorpusExample& example,
                      const TrainConfig& cfg, BaselineState& baseline, model::AdamState& adam, Rng& rng) {
  GradientEstimate est = estimate_gradient(model, example, cfg, baseline, rng);
  model::adam_step(model.params(), est.param_grad, adam);
  return est.step;
}

std::vector<std::size_t> shuffled_order(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[uniform_index(rng, i)]);
  }
  return order;
}

BanditTrainer::BanditTrainer(model::AffinityModel& model, TrainConfig cfg)
    : model_(model),
      cfg_(std::move(cfg)),
      adam_(model::AdamState::for_params(model.params(), cfg_.adam)),
      sample_rng_(derive_rng(cfg_.seed, 1)),
      order_rng_(derive_rng(cfg_.seed, 2)),
      start_time_(now_seconds()) {
  cfg_.validate();
  baseline_.kind = cfg_.baseline;
}

void BanditTrainer::run_epoch(const text::Corpus& corpus, const text::Corpus* validation,
                              const ValidationCallback& on_validation) {
  if (corpus.empty()) throw std::invalid_argument("train: empty corpus");
  for (std::size_t index : shuffled_order(corpus.size(), order_rng_)) {
    const StepResult step = train_step(model_, corpus[index], cfg_, baseline_, adam_, sample_rng_);
    ++documents_seen_;
    interval_sample_reward_ += step.mean_sample_reward;
    interval_greedy_reward_ += step.greedy_reward;
    ++interval_count_;
    if (validation && documents_seen_ % cfg_.validation_interval == 0) record(validation, on_validation);
  }
}

void BanditTrainer::flush(const text::Corpus* validation, const ValidationCallback& on_validation) {
  if (interval_count_ > 0) record(validation, on_validation);
}

void BanditTrainer::record(const text::Corpus* validation, const ValidationCallback& on_validation) {
  TrainingMetrics row;
  row.documents_seen = documents_seen_;
  if (interval_count_ > 0) {
    row.mean_sample_reward = interval_sample_reward_ / static_cast<double>(interval_count_);
    row.greedy_reward = interval_greedy_reward_ / static_cast<double>(interval_count_);
  }
  if (validation && !validation->empty()) {
    const std::size_t limit = cfg_.validation_limit > 0 ? std::min(cfg_.validation_limit, validation->size())
                                                        : validation->size();
    const text::Corpus subset(validation->begin(), validation->begin() + static_cast<std::ptrdiff_t>(limit));
    harness::EvalOptions opts;
    opts.summary_length = cfg_.summary_length;
    opts.rouge = cfg_.rouge;
    row.validation_mean_rouge_f1 = harness::evaluate(model_, subset, opts).mean_reward;
  }
  row.wall_clock = now_seconds() - start_time_;
  interval_sample_reward_ = 0.0;
  interval_greedy_reward_ = 0.0;
  interval_count_ = 0;
  metrics_.push_back(row);
  if (on_validation) on_validation(model_, row);
}

std::vector<TrainingMetrics> train(model::AffinityModel& model, const text::Corpus& corpus,
                                   const text::Corpus& validation, const TrainConfig& cfg,
                                   const ValidationCallback& on_validation) {
  if (corpus.empty()) throw std::invalid_argument("train: empty training corpus");
  if (validation.empty()) throw std::invalid_argument("train: empty validation corpus");
  BanditTrainer trainer(model, cfg);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    trainer.run_epoch(corpus, &validation, on_validation);
  }
  trainer.flush(&validation, on_validation);
  return trainer.metrics();
}

}  // namespace banditsum::trainer
