#ifndef BANDITSUM_TRAINER_HPP
#define BANDITSUM_TRAINER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "banditsum/adam.hpp"
#include "banditsum/model.hpp"
#include "banditsum/policy.hpp"
#include "banditsum/random.hpp"
#include "banditsum/rouge.hpp"
#include "banditsum/text.hpp"

namespace banditsum::trainer {

enum class BaselineKind { none, greedy_self_critical, batch_average, global_average };

std::string to_string(BaselineKind kind);
/// Accepts the enumerator names; throws std::invalid_argument otherwise.
BaselineKind parse_baseline_kind(std::string_view name);

struct TrainConfig {
  /// B, index sequences sampled per document.
  std::size_t samples = 20;
  /// M, sentences per summary.
  std::size_t summary_length = 3;
  double epsilon = 0.1;
  double affinity_floor = 1e-6;
  BaselineKind baseline = BaselineKind::greedy_self_critical;
  std::size_t epochs = 1;
  std::uint64_t seed = 0;
  model::AdamConfig adam;
  std::size_t validation_interval = 1000;
  /// Validate on the first N validation documents; 0 means all of them.
  std::size_t validation_limit = 0;
  rouge::RougeOptions rouge;

  policy::PolicyConfig policy() const;
  void validate() const;
};

struct BaselineState {
  BaselineKind kind = BaselineKind::greedy_self_critical;
  double running_mean = 0.0;
  std::uint64_t running_count = 0;
};

/// r-bar for one update. `greedy_reward` is the reward of the greedy
/// decode under the current parameters and is only read for the
/// self-critical kind. The global average is read first and then updated
/// with `rewards`.
double compute_baseline(BaselineState& state, std::span<const double> rewards, double greedy_reward);

/// Convenience overload: decodes greedily from `affinities` to obtain the
/// self-critical reward.
double compute_baseline(BaselineState& state, const text::CorpusExample& example,
                        std::span<const double> affinities, std::span<const double> rewards,
                        const TrainConfig& cfg);

struct StepResult {
  /// Mean reward of the B samples, a one-document estimate of J(theta).
  double mean_sample_reward = 0.0;
  double greedy_reward = 0.0;
  double baseline = 0.0;
};

struct GradientEstimate {
  /// (1/B) sum_b d log p(i^b|d) / d affinity * (R(i^b, a) - r-bar)
  std::vector<double> affinity_grad;
  model::GradVector param_grad;
  StepResult step;
  std::vector<policy::IndexSequence> sequences;
  std::vector<double> rewards;
};

/// One forward pass, B samples, rewards, baseline and the chained gradient
/// of the sampled objective with respect to the model parameters.
GradientEstimate estimate_gradient(const model::AffinityModel& model, const text::CorpusExample& example,
                                   const TrainConfig& cfg, BaselineState& baseline, Rng& rng);

/// estimate_gradient followed by one ascent step of Adam.
StepResult train_step(model::AffinityModel& model, const text::CorpusExample& example,
                      const TrainConfig& cfg, BaselineState& baseline, model::AdamState& adam, Rng& rng);

struct TrainingMetrics {
  std::size_t documents_seen = 0;
  double mean_sample_reward = 0.0;
  double greedy_reward = 0.0;
  double validation_mean_rouge_f1 = 0.0;
  double wall_clock = 0.0;
};

/// Called after each validation pass with the new metrics row.
using ValidationCallback = std::function<void(const model::AffinityModel&, const TrainingMetrics&)>;

/// Owns the optimizer, baseline and random streams of one training run so
/// it can be advanced an epoch at a time.
class BanditTrainer {
 public:
  BanditTrainer(model::AffinityModel& model, TrainConfig cfg);

  /// One pass over `corpus` in a freshly shuffled order.
  void run_epoch(const text::Corpus& corpus, const text::Corpus* validation = nullptr,
                 const ValidationCallback& on_validation = {});

  const std::vector<TrainingMetrics>& metrics() const { return metrics_; }
  std::size_t documents_seen() const { return documents_seen_; }
  /// Adds a metrics row for documents seen since the last one, if any.
  void flush(const text::Corpus* validation, const ValidationCallback& on_validation = {});

 private:
  void record(const text::Corpus* validation, const ValidationCallback& on_validation);

  model::AffinityModel& model_;
  TrainConfig cfg_;
  BaselineState baseline_;
  model::AdamState adam_;
  Rng sample_rng_;
  Rng order_rng_;
  std::size_t documents_seen_ = 0;
  std::vector<TrainingMetrics> metrics_;
  double interval_sample_reward_ = 0.0;
  double interval_greedy_reward_ = 0.0;
  std::size_t interval_count_ = 0;
  double start_time_ = 0.0;
};

/// Runs cfg.epochs epochs of one update per document. Every
/// validation_interval documents (and once at the end) the model is
/// evaluated with greedy decoding on `validation` and a metrics row is
/// appended. Throws std::invalid_argument for empty corpora.
std::vector<TrainingMetrics> train(model::AffinityModel& model, const text::Corpus& corpus,
                                   const text::Corpus& validation, const TrainConfig& cfg,
                                   const ValidationCallback& on_validation = {});

/// Fisher-Yates order of [0, n) drawn from `rng`.
std::vector<std::size_t> shuffled_order(std::size_t n, Rng& rng);

}  // namespace banditsum::trainer

#endif  // BANDITSUM_TRAINER_HPP
