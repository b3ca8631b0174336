#ifndef BANDITSUM_TESTS_SUPPORT_HPP
#define BANDITSUM_TESTS_SUPPORT_HPP

#include <cmath>
#include <string>
#include <vector>

#include "banditsum/model.hpp"
#include "banditsum/policy.hpp"
#include "banditsum/random.hpp"
#include "banditsum/text.hpp"

namespace testing_support {

inline banditsum::text::CorpusExample make_example(const std::string& id, const std::vector<std::string>& sentences,
                                                   const std::vector<std::string>& abstract) {
  using namespace banditsum::text;
  std::vector<Sentence> doc, ref;
  for (const auto& s : sentences) doc.emplace_back(s);
  for (const auto& s : abstract) ref.emplace_back(s);
  return CorpusExample{Document(id, std::move(doc)), ReferenceSummary(std::move(ref))};
}

// Random token sequence over a small alphabet so that overlaps are common.
inline std::vector<std::string> random_tokens(banditsum::Rng& rng, std::size_t max_len, std::size_t alphabet) {
  const std::size_t len = banditsum::uniform_index(rng, max_len + 1);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < len; ++i) out.push_back("t" + std::to_string(banditsum::uniform_index(rng, alphabet)));
  return out;
}

inline std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
  return out;
}

// Relative agreement used for finite-difference checks. Values that are both
// below `abs_floor` in magnitude are treated as equal, since central
// differences cannot resolve them relative to their size.
inline bool close_relative(double a, double b, double rel, double abs_floor = 1e-8) {
  const double diff = std::abs(a - b);
  return diff <= abs_floor || diff <= rel * std::max(std::abs(a), std::abs(b));
}


// Documents of random words "v0".."v{alphabet-1}".
inline banditsum::text::Corpus random_corpus(banditsum::Rng& rng, std::size_t docs, std::size_t max_sentences,
                                             std::size_t max_words, std::size_t alphabet) {
  banditsum::text::Corpus out;
  for (std::size_t d = 0; d < docs; ++d) {
    const std::size_t n = 1 + banditsum::uniform_index(rng, max_sentences);
    std::vector<std::string> sentences;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t len = 1 + banditsum::uniform_index(rng, max_words);
      std::vector<std::string> words;
      for (std::size_t w = 0; w < len; ++w) words.push_back("v" + std::to_string(banditsum::uniform_index(rng, alphabet)));
      sentences.push_back(join(words));
    }
    out.push_back(make_example("r" + std::to_string(d), sentences, {sentences.front()}));
  }
  return out;
}

// Spreads the parameters over [-scale, scale] so that gradients are not tiny.
inline void randomize_params(banditsum::model::AffinityModel& m, banditsum::Rng& rng, double scale) {
  auto& v = m.params().values();
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = scale * (2.0 * banditsum::uniform01(rng) - 1.0);
}

struct GradientCheck {
  std::size_t checked = 0;
  std::size_t failed = 0;
  double worst_relative = 0.0;
};

// Compares `analytic` against central differences of `objective` over every
// parameter (or `max_coords` evenly spaced ones).
template <class Objective>
GradientCheck check_against_central_differences(banditsum::model::AffinityModel& m, const Eigen::VectorXd& analytic,
                                                Objective&& objective, double step, double rel,
                                                std::size_t max_coords = 0) {
  GradientCheck out;
  auto& v = m.params().values();
  const std::size_t n = static_cast<std::size_t>(v.size());
  const std::size_t stride = max_coords == 0 || max_coords >= n ? 1 : n / max_coords;
  for (std::size_t k = 0; k < n; k += stride) {
    const double keep = v(k);
    v(k) = keep + step;
    const double up = objective();
    v(k) = keep - step;
    const double down = objective();
    v(k) = keep;
    const double fd = (up - down) / (2 * step);
    ++out.checked;
    if (!close_relative(analytic(k), fd, rel)) {
      ++out.failed;
      out.worst_relative = std::max(out.worst_relative, std::abs(analytic(k) - fd) /
                                                            std::max(std::abs(analytic(k)), std::abs(fd)));
    }
  }
  return out;
}

}  // namespace testing_support

#endif
