#ifndef BANDITSUM_COMPARATOR_HPP
#define BANDITSUM_COMPARATOR_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "banditsum/adam.hpp"
#include "banditsum/model.hpp"
#include "banditsum/random.hpp"
#include "banditsum/trainer.hpp"

namespace banditsum::harness {

/// Sequential binary-labeling policy: sentences are visited in document
/// order and each gets an include/exclude Bernoulli draw with probability
///
///   sigmoid(logit_t + count_weight * selected_so_far)
///
/// where logit_t is the pre-sigmoid output of the shared affinity network.
/// Visiting stops after M inclusions.
class SequentialComparator {
 public:
  explicit SequentialComparator(std::unique_ptr<model::AffinityModel> network);
  SequentialComparator(const SequentialComparator& other);
  SequentialComparator& operator=(const SequentialComparator& other);
  SequentialComparator(SequentialComparator&&) noexcept = default;
  SequentialComparator& operator=(SequentialComparator&&) noexcept = default;

  struct Episode {
    /// Included sentences, ascending.
    policy::IndexSequence selected;
    /// One entry per visited sentence.
    std::vector<bool> decisions;
    std::vector<double> probabilities;
    std::vector<double> counts;
    double log_prob = 0.0;
  };

  Episode sample(std::span<const double> logits, std::size_t summary_length, Rng& rng) const;
  /// Includes a sentence exactly when its probability is at least 0.5.
  Episode greedy(std::span<const double> logits, std::size_t summary_length) const;
  /// Log-probability of a given decision sequence, for gradient checks.
  double log_prob(std::span<const double> logits, const std::vector<bool>& decisions,
                  std::size_t summary_length) const;

  model::AffinityModel& network() { return *network_; }
  const model::AffinityModel& network() const { return *network_; }
  double count_weight() const { return count_weight_.values()(0); }
  model::ParamVector& count_params() { return count_weight_; }

  policy::IndexSequence decode(const text::Document& document, std::size_t summary_length) const;

 private:
  Episode run(std::span<const double> logits, std::size_t summary_length, Rng* rng) const;

  std::unique_ptr<model::AffinityModel> network_;
  model::ParamVector count_weight_;
};

struct ComparatorGradient {
  model::GradVector network_grad;
  model::GradVector count_grad;
  trainer::StepResult step;
};

/// REINFORCE estimate for one document: B sampled episodes, baseline as in
/// the bandit trainer, gradient of (1/B) sum_b log p(episode_b) (R_b - r-bar).
ComparatorGradient estimate_comparator_gradient(const SequentialComparator& comparator,
                                                const text::CorpusExample& example,
                                                const trainer::TrainConfig& cfg,
                                                trainer::BaselineState& baseline, Rng& rng);

class ComparatorTrainer {
 public:
  ComparatorTrainer(SequentialComparator& comparator, trainer::TrainConfig cfg);

  void run_epoch(const text::Corpus& corpus);
  std::size_t documents_seen() const { return documents_seen_; }

 private:
  SequentialComparator& comparator_;
  trainer::TrainConfig cfg_;
  trainer::BaselineState baseline_;
  model::AdamState network_adam_;
  model::AdamState count_adam_;
  Rng sample_rng_;
  Rng order_rng_;
  std::size_t documents_seen_ = 0;
};

struct ComparatorMetrics {
  std::size_t epoch = 0;
  double mean_reward = 0.0;
};

/// Trains `comparator` for cfg.epochs epochs on `corpus`, recording the
/// greedy-decode mean reward on `corpus` before training and after every epoch.
std::vector<ComparatorMetrics> train_sequential_comparator(SequentialComparator& comparator,
                                                           const text::Corpus& corpus,
                                                           const trainer::TrainConfig& cfg);

}  // namespace banditsum::harness

#endif  // BANDITSUM_COMPARATOR_HPP
