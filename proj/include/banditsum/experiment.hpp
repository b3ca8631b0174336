#ifndef BANDITSUM_EXPERIMENT_HPP
#define BANDITSUM_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "banditsum/model.hpp"
#include "banditsum/oracle.hpp"
#include "banditsum/trainer.hpp"

namespace banditsum::harness {

/// Builds a freshly initialized network for one trial.
using ModelFactory = std::function<std::unique_ptr<model::AffinityModel>(std::uint64_t seed)>;

struct ExperimentConfig {
  std::size_t sample_size = 1000;
  std::size_t subset_size = 50;
  std::size_t trials = 10;
  std::size_t epochs = 100;
  /// Shared training settings; `epochs` and `seed` inside are overridden per trial.
  trainer::TrainConfig train;
};

/// Mean reward of greedy decoding on the training subset, one entry per
/// epoch boundary (index 0 is the untrained policy).
struct TrialCurve {
  std::string method;
  std::string subset;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::vector<double> mean_f;
};

struct ExperimentReport {
  EarlyLateSplit split;
  std::vector<TrialCurve> curves;

  /// Across-trial mean curve for one method/subset pair.
  std::vector<double> mean_curve(const std::string& method, const std::string& subset) const;
  /// Final-epoch values of every trial for one method/subset pair.
  std::vector<double> final_values(const std::string& method, const std::string& subset) const;
};

inline constexpr const char* kBanditMethod = "bandit";
inline constexpr const char* kSequentialMethod = "sequential";

/// Trains the bandit trainer and the sequential comparator `trials` times
/// for `epochs` epochs on each of D_early and D_late, evaluating after
/// every epoch on the subset being trained on. Trial k uses seed
/// train.seed + k for both initialization and training.
ExperimentReport run_early_late_experiment(const text::Corpus& corpus, const ExperimentConfig& config,
                                           const ModelFactory& factory);

/// Same, on subsets that are already split.
ExperimentReport run_early_late_experiment(EarlyLateSplit split, const ExperimentConfig& config,
                                           const ModelFactory& factory);

/// method,subset,trial,seed,epoch,mean_f
std::string curves_csv(const ExperimentReport& report);
/// method,subset,epoch,mean_f,std_error,trials
std::string summary_csv(const ExperimentReport& report);
/// subset,id,mean_index,oracle_reward
std::string split_csv(const ExperimentReport& report);

}  // namespace banditsum::harness

#endif  // BANDITSUM_EXPERIMENT_HPP
