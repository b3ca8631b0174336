#include "banditsum/evaluation.hpp"

#include <algorithm>
#include <stdexcept>

namespace banditsum::harness {

policy::IndexSequence lead_k(const text::Document& document, std::size_t k) {
  if (k == 0) throw std::invalid_argument("lead_k: k must be at least 1");
  policy::IndexSequence out(std::min(k, document.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

policy::IndexSequence select_summary(const text::Document& document,
                                     std::span<const double> affinities, const EvalOptions& options) {
  policy::PolicyConfig cfg;
  cfg.summary_length = options.summary_length;
  cfg.epsilon = 0.0;
  policy::IndexSequence ranked = policy::greedy_decode(affinities, cfg);
  if (options.word_budget > 0) {
    std::size_t words = 0;
    std::size_t keep = 0;
    for (; keep < ranked.size(); ++keep) {
      const std::size_t len = document.sentence(ranked[keep]).tokens().size();
      if (keep > 0 && words + len > options.word_budget) break;
      words += len;
    }
    ranked.resize(keep);
  }
  std::sort(ranked.begin(), ranked.end());
  return ranked;
}

EvalReport evaluate_selector(const Selector& selector, const text::Corpus& corpus,
                             const rouge::RougeOptions& rouge_options) {
  if (corpus.empty()) throw std::invalid_argument("evaluate: empty corpus");
  EvalReport report;
  report.documents.reserve(corpus.size());
  for (const auto& ex : corpus) {
    DocumentScore doc;
    doc.id = ex.id();
    doc.indices = selector(ex.document);
    std::sort(doc.indices.begin(), doc.indices.end());
    doc.scores = rouge::reward(doc.indices, ex.document, ex.reference, rouge_options);
    report.mean_rouge1_f1 += doc.scores.rouge1.f1;
    report.mean_rouge2_f1 += doc.scores.rouge2.f1;
    report.mean_rougeL_f1 += doc.scores.rougeL.f1;
    report.mean_reward += doc.scores.reward;
    report.documents.push_back(std::move(doc));
  }
  const double n = static_cast<double>(corpus.size());
  report.mean_rouge1_f1 /= n;
  report.mean_rouge2_f1 /= n;
  report.mean_rougeL_f1 /= n;
  report.mean_reward /= n;
  return report;
}

EvalReport evaluate(const model::AffinityModel& model, const text::Corpus& corpus,
                    const EvalOptions& options) {
  return evaluate_selector(
      [&](const text::Document& document) {
        const auto fwd = model.forward(document);
        return select_summary(document, fwd.affinities, options);
      },
      corpus, options.rouge);
}

EvalReport evaluate(const model::AffinityModel& model, const text::Corpus& corpus,
                    std::size_t summary_length) {
  EvalOptions options;
  options.summary_length = summary_length;
  return evaluate(model, corpus, options);
}

}  // namespace banditsum::harness
