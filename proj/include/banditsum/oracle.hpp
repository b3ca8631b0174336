#ifndef BANDITSUM_ORACLE_HPP
#define BANDITSUM_ORACLE_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "banditsum/policy.hpp"
#include "banditsum/rouge.hpp"
#include "banditsum/text.hpp"

namespace banditsum::harness {

struct OracleLabels {
  /// Chosen sentences, ascending (0-based).
  policy::IndexSequence indices;
  /// Mean 1-based position over the document length, in (0, 1]. An empty
  /// label set counts as 1.0.
  double mean_index = 1.0;
  double oracle_reward = 0.0;
};

/// Mean of the 1-based positions of `indices` divided by n_sentences.
double mean_label_index(std::span<const std::size_t> indices, std::size_t n_sentences);

/// Greedy forward selection of up to M sentences, each step adding the
/// sentence that most increases the reward of the selection (rendered in
/// document order). Stops early when nothing improves; ties go to the
/// smaller index. Throws std::invalid_argument for M = 0.
OracleLabels oracle_labels(const text::CorpusExample& example, std::size_t summary_length,
                           const rouge::RougeOptions& options = {});

struct EarlyLateSplit {
  text::Corpus early;
  text::Corpus late;
  std::vector<OracleLabels> early_labels;
  std::vector<OracleLabels> late_labels;
};

/// Labels the first sample_size documents, orders them by ascending
/// mean_index (ties by id) and returns the first and last subset_size.
/// Throws std::invalid_argument when sample_size exceeds the corpus or
/// 2 * subset_size exceeds sample_size.
EarlyLateSplit split_early_late(const text::Corpus& corpus, std::size_t sample_size,
                                std::size_t subset_size, std::size_t summary_length);

}  // namespace banditsum::harness

#endif  // BANDITSUM_ORACLE_HPP
