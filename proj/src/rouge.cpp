#include "banditsum/rouge.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "banditsum/porter_stemmer.hpp"

namespace banditsum::rouge {

namespace {

using NgramCounts = std::unordered_map<std::string, std::size_t>;

NgramCounts count_ngrams(TokenSpan tokens, std::size_t n, std::size_t& total) {
  NgramCounts counts;
  total = 0;
  if (tokens.size() < n) return counts;
  std::string key;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    key.clear();
    for (std::size_t k = 0; k < n; ++k) {
      if (k) key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++counts[key];
    ++total;
  }
  return counts;
}

text::TokenList concat(const std::vector<text::TokenList>& sentences) {
  text::TokenList out;
  for (const auto& s : sentences) out.insert(out.end(), s.begin(), s.end());
  return out;
}

std::vector<text::TokenList> stemmed(const std::vector<text::TokenList>& sentences) {
  std::vector<text::TokenList> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    text::TokenList t;
    t.reserve(s.size());
    for (const auto& tok : s) t.push_back(porter_stem(tok));
    out.push_back(std::move(t));
  }
  return out;
}

// Positions in `ref` that take part in one LCS between `ref` and `hyp`.
std::vector<std::size_t> lcs_positions(TokenSpan ref, TokenSpan hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  std::vector<std::size_t> table((n + 1) * (m + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return table[i * (m + 1) + j]; };
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      at(i, j) = ref[i - 1] == hyp[j - 1] ? at(i - 1, j - 1) + 1 : std::max(at(i - 1, j), at(i, j - 1));
    }
  }
  std::vector<std::size_t> positions;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 && j > 0) {
    if (ref[i - 1] == hyp[j - 1]) {
      positions.push_back(i - 1);
      --i;
      --j;
    } else if (at(i - 1, j) >= at(i, j - 1)) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(positions.begin(), positions.end());
  return positions;
}

}  // namespace

double f1_score(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

RougeScore RougeScore::from_counts(double overlap, double hyp_total, double ref_total) {
  RougeScore s;
  s.precision = hyp_total > 0.0 ? overlap / hyp_total : 0.0;
  s.recall = ref_total > 0.0 ? overlap / ref_total : 0.0;
  s.f1 = f1_score(s.precision, s.recall);
  return s;
}

RougeScore rouge_n(TokenSpan hypothesis, TokenSpan reference, std::size_t n) {
  if (n == 0) throw std::invalid_argument("rouge_n: n must be at least 1");
  std::size_t hyp_total = 0;
  std::size_t ref_total = 0;
  const NgramCounts hyp = count_ngrams(hypothesis, n, hyp_total);
  const NgramCounts ref = count_ngrams(reference, n, ref_total);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : hyp) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }
  return RougeScore::from_counts(static_cast<double>(overlap), static_cast<double>(hyp_total),
                                 static_cast<double>(ref_total));
}

std::size_t lcs_length(TokenSpan a, TokenSpan b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> curr(b.size() + 1, 0);
  for (const auto& x : a) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      curr[j] = x == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], curr[j - 1]);
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

RougeScore rouge_l(TokenSpan hypothesis, TokenSpan reference) {
  const double lcs = static_cast<double>(lcs_length(hypothesis, reference));
  return RougeScore::from_counts(lcs, static_cast<double>(hypothesis.size()),
                                 static_cast<double>(reference.size()));
}

RougeScore rouge_l_summary(const std::vector<text::TokenList>& hypothesis,
                           const std::vector<text::TokenList>& reference) {
  std::unordered_map<std::string, std::size_t> hyp_counts;
  std::unordered_map<std::string, std::size_t> ref_counts;
  std::size_t hyp_total = 0;
  std::size_t ref_total = 0;
  for (const auto& s : hypothesis) {
    for (const auto& t : s) ++hyp_counts[t];
    hyp_total += s.size();
  }
  for (const auto& s : reference) {
    for (const auto& t : s) ++ref_counts[t];
    ref_total += s.size();
  }

  std::size_t hits = 0;
  for (const auto& ref_sentence : reference) {
    std::vector<bool> in_union(ref_sentence.size(), false);
    for (const auto& hyp_sentence : hypothesis) {
      for (std::size_t p : lcs_positions(ref_sentence, hyp_sentence)) in_union[p] = true;
    }
    for (std::size_t p = 0; p < ref_sentence.size(); ++p) {
      if (!in_union[p]) continue;
      const auto& tok = ref_sentence[p];
      auto& hc = hyp_counts[tok];
      auto& rc = ref_counts[tok];
      if (hc > 0 && rc > 0) {
        ++hits;
        --hc;
        --rc;
      }
    }
  }
  return RougeScore::from_counts(static_cast<double>(hits), static_cast<double>(hyp_total),
                                 static_cast<double>(ref_total));
}

RougeReward score(const std::vector<text::TokenList>& hypothesis,
                  const std::vector<text::TokenList>& reference, const RougeOptions& options) {
  const auto hyp_sentences = options.stem ? stemmed(hypothesis) : hypothesis;
  const auto ref_sentences = options.stem ? stemmed(reference) : reference;
  const text::TokenList hyp = concat(hyp_sentences);
  const text::TokenList ref = concat(ref_sentences);

  RougeReward out;
  out.rouge1 = rouge_n(hyp, ref, 1);
  out.rouge2 = rouge_n(hyp, ref, 2);
  out.rougeL = options.union_lcs ? rouge_l_summary(hyp_sentences, ref_sentences) : rouge_l(hyp, ref);
  out.reward = (out.rouge1.f1 + out.rouge2.f1 + out.rougeL.f1) / 3.0;
  return out;
}

RougeReward reward(std::span<const std::size_t> indices, const text::Document& document,
                   const text::ReferenceSummary& reference, const RougeOptions& options) {
  std::vector<text::TokenList> hyp;
  hyp.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= document.size()) {
      throw std::out_of_range("sentence index " + std::to_string(i) + " out of range for document " +
                              document.id());
    }
    hyp.push_back(document.sentence(i).tokens());
  }
  std::vector<text::TokenList> ref;
  ref.reserve(reference.sentences().size());
  for (const auto& s : reference.sentences()) ref.push_back(s.tokens());
  return score(hyp, ref, options);
}

}  // namespace banditsum::rouge
