#ifndef BANDITSUM_POLICY_HPP
#define BANDITSUM_POLICY_HPP

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "banditsum/random.hpp"

namespace banditsum::policy {

/// Per-sentence inclusion propensities in [0, 1].
using AffinityVector = std::vector<double>;

/// Ordered, duplicate-free sentence indices: the bandit action.
using IndexSequence = std::vector<std::size_t>;

struct PolicyConfig {
  std::size_t summary_length = 3;
  double epsilon = 0.1;
  double affinity_floor = 1e-6;

  /// Throws std::invalid_argument unless M >= 1, epsilon in [0, 1] and
  /// the floor lies in (0, 1e-3].
  void validate() const;
  /// min(M, N_d).
  std::size_t effective_length(std::size_t n_sentences) const;
};

/// Throws std::invalid_argument for an empty vector or an entry outside [0, 1].
void validate_affinities(std::span<const double> affinities);

/// Draws min(M, N_d) indices by repeated normalize-and-sample over the
/// unselected sentences; each round explores uniformly with probability
/// epsilon. Entries are clamped to [floor, 1] first.
IndexSequence sample(std::span<const double> affinities, const PolicyConfig& cfg, Rng& rng);

/// Log-probability of an index sequence under the sampling process:
///
///   sum_j log( eps / (N - j + 1) + (1 - eps) * a[i_j] / (sum of a over unselected) )
///
/// Returns -infinity for sequences of the wrong length or with repeated
/// indices. Throws std::out_of_range for an index >= N.
double log_prob(std::span<const std::size_t> indices, std::span<const double> affinities,
                const PolicyConfig& cfg);

/// Exact gradient of log_prob with respect to each affinity entry. Entries
/// clamped by the floor (or above 1) get zero gradient. Throws
/// std::invalid_argument when the sequence has probability zero.
std::vector<double> log_prob_grad(std::span<const std::size_t> indices,
                                  std::span<const double> affinities, const PolicyConfig& cfg);

/// The min(M, N_d) highest-affinity indices in descending affinity order,
/// ties toward the smaller index. Epsilon is ignored.
IndexSequence greedy_decode(std::span<const double> affinities, const PolicyConfig& cfg);

inline constexpr std::size_t kMaxEnumerableSentences = 8;

/// Probability of every valid index sequence. Throws std::invalid_argument
/// when N_d > kMaxEnumerableSentences.
std::map<IndexSequence, double> enumerate_probabilities(std::span<const double> affinities,
                                                        const PolicyConfig& cfg);

}  // namespace banditsum::policy

#endif  // BANDITSUM_POLICY_HPP
