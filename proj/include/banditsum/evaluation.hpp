#ifndef BANDITSUM_EVALUATION_HPP
#define BANDITSUM_EVALUATION_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "banditsum/model.hpp"
#include "banditsum/policy.hpp"
#include "banditsum/rouge.hpp"
#include "banditsum/text.hpp"

namespace banditsum::harness {

struct DocumentScore {
  std::string id;
  /// Selected sentences in document order.
  policy::IndexSequence indices;
  rouge::RougeReward scores;
};

struct EvalReport {
  std::vector<DocumentScore> documents;
  double mean_rouge1_f1 = 0.0;
  double mean_rouge2_f1 = 0.0;
  double mean_rougeL_f1 = 0.0;
  /// Corpus mean of the per-document reward (average of the three F1s).
  double mean_reward = 0.0;
};

struct EvalOptions {
  std::size_t summary_length = 3;
  /// When > 0, also stop adding sentences once the summary would exceed
  /// this many tokens (the first pick is always kept).
  std::size_t word_budget = 0;
  rouge::RougeOptions rouge;
};

using Selector = std::function<policy::IndexSequence(const text::Document&)>;

/// The first min(k, N_d) sentences. Throws std::invalid_argument for k = 0.
policy::IndexSequence lead_k(const text::Document& document, std::size_t k);

/// Picks sentences by descending affinity under the length limits of
/// `options` and returns them in document order.
policy::IndexSequence select_summary(const text::Document& document,
                                     std::span<const double> affinities, const EvalOptions& options);

/// Scores selector output (rendered in document order) on every example.
/// Throws std::invalid_argument for an empty corpus.
EvalReport evaluate_selector(const Selector& selector, const text::Corpus& corpus,
                             const rouge::RougeOptions& rouge_options = {});

/// Greedy test-time decode of `model` on each document.
EvalReport evaluate(const model::AffinityModel& model, const text::Corpus& corpus,
                    const EvalOptions& options);
EvalReport evaluate(const model::AffinityModel& model, const text::Corpus& corpus,
                    std::size_t summary_length);

}  // namespace banditsum::harness

#endif  // BANDITSUM_EVALUATION_HPP
