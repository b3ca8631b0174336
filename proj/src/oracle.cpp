#include "banditsum/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace banditsum::harness {

double mean_label_index(std::span<const std::size_t> indices, std::size_t n_sentences) {
  if (indices.empty() || n_sentences == 0) return 1.0;
  double sum = 0.0;
  for (std::size_t i : indices) sum += static_cast<double>(i + 1);
  return sum / (static_cast<double>(indices.size()) * static_cast<double>(n_sentences));
}

OracleLabels oracle_labels(const text::CorpusExample& example, std::size_t summary_length,
                           const rouge::RougeOptions& options) {
  if (summary_length == 0) throw std::invalid_argument("oracle_labels: M must be at least 1");
  const auto& doc = example.document;
  const std::size_t n = doc.size();

  policy::IndexSequence chosen;
  double best_reward = 0.0;
  std::vector<bool> used(n, false);
  while (chosen.size() < std::min(summary_length, n)) {
    double round_best = best_reward;
    std::size_t round_pick = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (used[t]) continue;
      policy::IndexSequence candidate = chosen;
      candidate.insert(std::upper_bound(candidate.begin(), candidate.end(), t), t);
      const double r = rouge::reward(candidate, doc, example.reference, options).reward;
      if (r > round_best) {
        round_best = r;
        round_pick = t;
      }
    }
    if (round_pick == n) break;
    used[round_pick] = true;
    chosen.insert(std::upper_bound(chosen.begin(), chosen.end(), round_pick), round_pick);
    best_reward = round_best;
  }

  OracleLabels labels;
  labels.indices = std::move(chosen);
  labels.mean_index = mean_label_index(labels.indices, n);
  labels.oracle_reward = best_reward;
  return labels;
}

EarlyLateSplit split_early_late(const text::Corpus& corpus, std::size_t sample_size,
                                std::size_t subset_size, std::size_t summary_length) {
  if (sample_size > corpus.size()) {
    throw std::invalid_argument("split_early_late: sample size " + std::to_string(sample_size) +
                                " exceeds corpus size " + std::to_string(corpus.size()));
  }
  if (2 * subset_size > sample_size) {
    throw std::invalid_argument("split_early_late: two subsets of " + std::to_string(subset_size) +
                                " do not fit in a sample of " + std::to_string(sample_size));
  }

  std::vector<OracleLabels> labels;
  labels.reserve(sample_size);
  for (std::size_t i = 0; i < sample_size; ++i) labels.push_back(oracle_labels(corpus[i], summary_length));

  std::vector<std::size_t> order(sample_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (labels[a].mean_index != labels[b].mean_index) return labels[a].mean_index < labels[b].mean_index;
    return corpus[a].id() < corpus[b].id();
  });

  EarlyLateSplit split;
  for (std::size_t k = 0; k < subset_size; ++k) {
    split.early.push_back(corpus[order[k]]);
    split.early_labels.push_back(labels[order[k]]);
  }
  for (std::size_t k = sample_size - subset_size; k < sample_size; ++k) {
    split.late.push_back(corpus[order[k]]);
    split.late_labels.push_back(labels[order[k]]);
  }
  return split;
}

}  // namespace banditsum::harness
