#include "banditsum/experiment.hpp"

#include <cmath>
#include <stdexcept>

#include "banditsum/comparator.hpp"
#include "banditsum/csv.hpp"
#include "banditsum/evaluation.hpp"

namespace banditsum::harness {

namespace {

TrialCurve run_bandit_trial(const text::Corpus& subset, const ExperimentConfig& config,
                            const ModelFactory& factory, std::uint64_t seed) {
  TrialCurve curve;
  auto network = factory(seed);
  trainer::TrainConfig cfg = config.train;
  cfg.seed = seed;
  EvalOptions opts;
  opts.summary_length = cfg.summary_length;
  opts.rouge = cfg.rouge;

  trainer::BanditTrainer bandit(*network, cfg);
  curve.mean_f.push_back(evaluate(*network, subset, opts).mean_reward);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    bandit.run_epoch(subset);
    curve.mean_f.push_back(evaluate(*network, subset, opts).mean_reward);
  }
  return curve;
}

TrialCurve run_sequential_trial(const text::Corpus& subset, const ExperimentConfig& config,
                                const ModelFactory& factory, std::uint64_t seed) {
  TrialCurve curve;
  SequentialComparator comparator(factory(seed));
  trainer::TrainConfig cfg = config.train;
  cfg.seed = seed;
  cfg.epochs = config.epochs;
  for (const auto& m : train_sequential_comparator(comparator, subset, cfg)) curve.mean_f.push_back(m.mean_reward);
  return curve;
}

}  // namespace

std::vector<double> ExperimentReport::mean_curve(const std::string& method, const std::string& subset) const {
  std::vector<double> mean;
  std::size_t n = 0;
  for (const auto& c : curves) {
    if (c.method != method || c.subset != subset) continue;
    if (mean.empty()) mean.assign(c.mean_f.size(), 0.0);
    for (std::size_t e = 0; e < c.mean_f.size(); ++e) mean[e] += c.mean_f[e];
    ++n;
  }
  for (double& v : mean) v /= static_cast<double>(n);
  return mean;
}

std::vector<double> ExperimentReport::final_values(const std::string& method, const std::string& subset) const {
  std::vector<double> out;
  for (const auto& c : curves) {
    if (c.method == method && c.subset == subset) out.push_back(c.mean_f.back());
  }
  return out;
}

ExperimentReport run_early_late_experiment(const text::Corpus& corpus, const ExperimentConfig& config,
                                           const ModelFactory& factory) {
  return run_early_late_experiment(
      split_early_late(corpus, config.sample_size, config.subset_size, config.train.summary_length), config,
      factory);
}

ExperimentReport run_early_late_experiment(EarlyLateSplit split, const ExperimentConfig& config,
                                           const ModelFactory& factory) {
  if (config.trials < 1) throw std::invalid_argument("early-late experiment needs at least one trial");
  if (split.early.empty() || split.late.empty()) {
    throw std::invalid_argument("early-late experiment needs non-empty subsets");
  }
  ExperimentReport report;
  report.split = std::move(split);
  const std::pair<const char*, const text::Corpus*> subsets[] = {{"early", &report.split.early},
                                                                 {"late", &report.split.late}};
  for (const char* method : {kBanditMethod, kSequentialMethod}) {
    for (const auto& [name, subset] : subsets) {
      for (std::size_t trial = 0; trial < config.trials; ++trial) {
        const std::uint64_t seed = config.train.seed + trial;
        TrialCurve curve = std::string(method) == kBanditMethod
                               ? run_bandit_trial(*subset, config, factory, seed)
                               : run_sequential_trial(*subset, config, factory, seed);
        curve.method = method;
        curve.subset = name;
        curve.trial = trial;
        curve.seed = seed;
        report.curves.push_back(std::move(curve));
      }
    }
  }
  return report;
}

std::string curves_csv(const ExperimentReport& report) {
  std::string out = "method,subset,trial,seed,epoch,mean_f\n";
  for (const auto& c : report.curves) {
    for (std::size_t e = 0; e < c.mean_f.size(); ++e) {
      out += c.method + ',' + c.subset + ',' + std::to_string(c.trial) + ',' + std::to_string(c.seed) + ',' +
             std::to_string(e) + ',' + csv::number(c.mean_f[e]) + '\n';
    }
  }
  return out;
}

std::string summary_csv(const ExperimentReport& report) {
  std::string out = "method,subset,epoch,mean_f,std_error,trials\n";
  for (const char* method : {kBanditMethod, kSequentialMethod}) {
    for (const char* subset : {"early", "late"}) {
      std::vector<const TrialCurve*> group;
      for (const auto& c : report.curves) {
        if (c.method == method && c.subset == subset) group.push_back(&c);
      }
      if (group.empty()) continue;
      const std::size_t epochs = group.front()->mean_f.size();
      const double k = static_cast<double>(group.size());
      for (std::size_t e = 0; e < epochs; ++e) {
        double mean = 0.0;
        for (const auto* c : group) mean += c->mean_f[e];
        mean /= k;
        double var = 0.0;
        for (const auto* c : group) var += (c->mean_f[e] - mean) * (c->mean_f[e] - mean);
        const double se = group.size() > 1 ? std::sqrt(var / (k - 1.0) / k) : 0.0;
        out += std::string(method) + ',' + subset + ',' + std::to_string(e) + ',' + csv::number(mean) + ',' +
               csv::number(se) + ',' + std::to_string(group.size()) + '\n';
      }
    }
  }
  return out;
}

std::string split_csv(const ExperimentReport& report) {
  std::string out = "subset,id,mean_index,oracle_reward\n";
  auto emit = [&out](const char* name, const text::Corpus& docs, const std::vector<OracleLabels>& labels) {
    for (std::size_t i = 0; i < docs.size(); ++i) {
      out += std::string(name) + ',' + csv::field(docs[i].id()) + ',' + csv::number(labels[i].mean_index) + ',' +
             csv::number(labels[i].oracle_reward) + '\n';
    }
  };
  emit("early", report.split.early, report.split.early_labels);
  emit("late", report.split.late, report.split.late_labels);
  return out;
}

}  // namespace banditsum::harness
