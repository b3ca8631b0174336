#include "banditsum/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace banditsum::policy {

namespace {

std::vector<double> floored(std::span<const double> affinities, double floor) {
  std::vector<double> out(affinities.size());
  for (std::size_t t = 0; t < affinities.size(); ++t) {
    out[t] = std::clamp(affinities[t], floor, 1.0);
  }
  return out;
}

void check_range(std::span<const std::size_t> indices, std::size_t n) {
  for (std::size_t i : indices) {
    if (i >= n) {
      throw std::out_of_range("sentence index " + std::to_string(i) + " out of range for " +
                              std::to_string(n) + " sentences");
    }
  }
}

bool has_support(std::span<const std::size_t> indices, std::size_t n, const PolicyConfig& cfg) {
  if (indices.size() != cfg.effective_length(n)) return false;
  std::vector<bool> seen(n, false);
  for (std::size_t i : indices) {
    if (seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

}  // namespace

void PolicyConfig::validate() const {
  if (summary_length < 1) throw std::invalid_argument("summary length M must be at least 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (!(affinity_floor > 0.0 && affinity_floor <= 1e-3)) {
    throw std::invalid_argument("affinity floor must lie in (0, 1e-3]");
  }
}

std::size_t PolicyConfig::effective_length(std::size_t n_sentences) const {
  return std::min(summary_length, n_sentences);
}

void validate_affinities(std::span<const double> affinities) {
  if (affinities.empty()) throw std::invalid_argument("affinity vector is empty");
  for (double a : affinities) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("affinity outside [0, 1]");
  }
}

IndexSequence sample(std::span<const double> affinities, const PolicyConfig& cfg, Rng& rng) {
  const std::size_t n = affinities.size();
  const std::vector<double> a = floored(affinities, cfg.affinity_floor);
  std::vector<std::size_t> remaining(n);
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});

  IndexSequence picked;
  const std::size_t rounds = cfg.effective_length(n);
  picked.reserve(rounds);
  for (std::size_t round = 0; round < rounds; ++round) {
    std::size_t slot = remaining.size() - 1;
    if (uniform01(rng) < cfg.epsilon) {
      slot = uniform_index(rng, remaining.size());
    } else {
      double total = 0.0;
      for (std::size_t t : remaining) total += a[t];
      double target = uniform01(rng) * total;
      for (std::size_t k = 0; k < remaining.size(); ++k) {
        target -= a[remaining[k]];
        if (target < 0.0) {
          slot = k;
          break;
        }
      }
    }
    picked.push_back(remaining[slot]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(slot));
  }
  return picked;
}

double log_prob(std::span<const std::size_t> indices, std::span<const double> affinities,
                const PolicyConfig& cfg) {
  const std::size_t n = affinities.size();
  check_range(indices, n);
  if (!has_support(indices, n, cfg)) return -std::numeric_limits<double>::infinity();

  const std::vector<double> a = floored(affinities, cfg.affinity_floor);
  std::vector<bool> selected(n, false);
  double total = 0.0;
  for (std::size_t j = 0; j < indices.size(); ++j) {
    double rest = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      if (!selected[t]) rest += a[t];
    }
    const double uniform = cfg.epsilon / static_cast<double>(n - j);
    total += std::log(uniform + (1.0 - cfg.epsilon) * a[indices[j]] / rest);
    selected[indices[j]] = true;
  }
  return total;
}

std::vector<double> log_prob_grad(std::span<const std::size_t> indices,
                                  std::span<const double> affinities, const PolicyConfig& cfg) {
  const std::size_t n = affinities.size();
  check_range(indices, n);
  if (!has_support(indices, n, cfg)) {
    throw std::invalid_argument("log_prob_grad: index sequence has probability zero");
  }

  const std::vector<double> a = floored(affinities, cfg.affinity_floor);
  std::vector<double> grad(n, 0.0);
  std::vector<bool> selected(n, false);
  for (std::size_t j = 0; j < indices.size(); ++j) {
    double rest = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      if (!selected[t]) rest += a[t];
    }
    const std::size_t pick = indices[j];
    const double ratio = a[pick] / rest;
    const double term = cfg.epsilon / static_cast<double>(n - j) + (1.0 - cfg.epsilon) * ratio;
    // d term / d a_t = (1 - eps) * ([t == pick] - ratio) / rest for unselected t.
    const double scale = (1.0 - cfg.epsilon) / (rest * term);
    for (std::size_t t = 0; t < n; ++t) {
      if (selected[t]) continue;
      grad[t] += scale * ((t == pick ? 1.0 : 0.0) - ratio);
    }
    selected[pick] = true;
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (affinities[t] < cfg.affinity_floor || affinities[t] > 1.0) grad[t] = 0.0;
  }
  return grad;
}

IndexSequence greedy_decode(std::span<const double> affinities, const PolicyConfig& cfg) {
  const std::vector<double> a = floored(affinities, cfg.affinity_floor);
  IndexSequence order(a.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t x, std::size_t y) { return a[x] > a[y]; });
  order.resize(cfg.effective_length(a.size()));
  return order;
}

std::map<IndexSequence, double> enumerate_probabilities(std::span<const double> affinities,
                                                        const PolicyConfig& cfg) {
  const std::size_t n = affinities.size();
  if (n > kMaxEnumerableSentences) {
    throw std::invalid_argument("enumerate_probabilities: " + std::to_string(n) +
                                " sentences exceeds the limit of " +
                                std::to_string(kMaxEnumerableSentences));
  }
  const std::vector<double> a = floored(affinities, cfg.affinity_floor);
  const std::size_t depth = cfg.effective_length(n);

  std::map<IndexSequence, double> out;
  IndexSequence prefix;
  std::vector<bool> selected(n, false);

  auto expand = [&](auto&& self, double prob) -> void {
    if (prefix.size() == depth) {
      out.emplace(prefix, prob);
      return;
    }
    double rest = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      if (!selected[t]) rest += a[t];
    }
    const double uniform = cfg.epsilon / static_cast<double>(n - prefix.size());
    for (std::size_t t = 0; t < n; ++t) {
      if (selected[t]) continue;
      const double step = uniform + (1.0 - cfg.epsilon) * a[t] / rest;
      selected[t] = true;
      prefix.push_back(t);
      self(self, prob * step);
      prefix.pop_back();
      selected[t] = false;
    }
  };
  expand(expand, 1.0);
  return out;
}

}  // namespace banditsum::policy
