#ifndef BANDITSUM_ROUGE_HPP
#define BANDITSUM_ROUGE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "banditsum/text.hpp"

namespace banditsum::rouge {

using TokenSpan = std::span<const std::string>;

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static RougeScore from_counts(double overlap, double hyp_total, double ref_total);
};

/// Per-variant scores and their mean, the scalar training reward.
struct RougeReward {
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rougeL;
  double reward = 0.0;
};

struct RougeOptions {
  /// Porter-stem tokens before matching.
  bool stem = false;
  /// Summary-level union-LCS for ROUGE-L instead of one LCS over the
  /// concatenated sequences.
  bool union_lcs = false;
};

/// Harmonic mean of precision and recall, 0 when both are 0.
double f1_score(double precision, double recall);

/// Clipped n-gram overlap. Sequences shorter than n contribute no n-grams.
RougeScore rouge_n(TokenSpan hypothesis, TokenSpan reference, std::size_t n);

std::size_t lcs_length(TokenSpan a, TokenSpan b);
RougeScore rouge_l(TokenSpan hypothesis, TokenSpan reference);

/// Summary-level ROUGE-L: for each reference sentence the union of its LCS
/// hits against every hypothesis sentence, with hits clipped by remaining
/// token counts.
RougeScore rouge_l_summary(const std::vector<text::TokenList>& hypothesis,
                           const std::vector<text::TokenList>& reference);

/// Scores hypothesis sentences against reference sentences. The n-gram and
/// sequence-level LCS variants see the sentences concatenated in order.
RougeReward score(const std::vector<text::TokenList>& hypothesis,
                  const std::vector<text::TokenList>& reference,
                  const RougeOptions& options = {});

/// Reward of the summary induced by `indices`, sentences concatenated in
/// index-sequence order. Throws std::out_of_range for a bad index.
RougeReward reward(std::span<const std::size_t> indices, const text::Document& document,
                   const text::ReferenceSummary& reference, const RougeOptions& options = {});

}  // namespace banditsum::rouge

#endif  // BANDITSUM_ROUGE_HPP
