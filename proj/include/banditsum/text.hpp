#ifndef BANDITSUM_TEXT_HPP
#define BANDITSUM_TEXT_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace banditsum::text {

using TokenList = std::vector<std::string>;

/// Lowercases ASCII letters and splits on every maximal run of
/// non-alphanumeric ASCII characters. Bytes >= 0x80 are kept inside tokens
/// so UTF-8 words survive intact.
TokenList tokenize(std::string_view text);

class Sentence {
 public:
  explicit Sentence(std::string original);

  const std::string& original() const { return original_; }
  const TokenList& tokens() const { return tokens_; }

 private:
  std::string original_;
  TokenList tokens_;
};

/// A source document: the bandit context. Always holds at least one
/// sentence and every sentence has at least one token.
class Document {
 public:
  Document(std::string id, std::vector<Sentence> sentences,
           std::optional<std::string> raw_text = std::nullopt);

  const std::string& id() const { return id_; }
  const std::vector<Sentence>& sentences() const { return sentences_; }
  const Sentence& sentence(std::size_t index) const { return sentences_.at(index); }
  std::size_t size() const { return sentences_.size(); }
  const std::optional<std::string>& raw_text() const { return raw_text_; }

 private:
  std::string id_;
  std::vector<Sentence> sentences_;
  std::optional<std::string> raw_text_;
};

class ReferenceSummary {
 public:
  explicit ReferenceSummary(std::vector<Sentence> sentences);

  const std::vector<Sentence>& sentences() const { return sentences_; }
  /// All reference tokens, sentence after sentence.
  TokenList tokens() const;

 private:
  std::vector<Sentence> sentences_;
};

struct CorpusExample {
  Document document;
  ReferenceSummary reference;

  const std::string& id() const { return document.id(); }
};

using Corpus = std::vector<CorpusExample>;

/// Reads a JSONL corpus: one {"id", "sentences", "abstract"} object per line.
/// Blank lines are skipped; sentences that tokenize to nothing are dropped.
/// Throws std::runtime_error naming the line or id on bad input.
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::string_view jsonl);

/// Writes the corpus back in the same schema using the original sentence text.
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);
std::string serialize_corpus(const Corpus& corpus);

struct SyntheticCorpusOptions {
  std::size_t n_docs = 100;
  std::size_t n_sentences = 10;
  std::vector<std::size_t> planted_positions = {0, 1, 2};
  std::size_t vocab_size = 200;
  std::size_t sentence_length = 8;
  std::uint64_t seed = 0;
  std::string id_prefix = "doc";
};

/// Random-token documents whose reference is the concatenation of the
/// sentences at the planted positions.
///
/// The vocabulary "w0".."w{V-1}" is split in half: planted sentences draw
/// from the lower (salient) half and all other sentences from the upper
/// half. Within one document tokens are drawn without replacement, so the
/// sentences of a document are pairwise token-disjoint.
Corpus generate_synthetic_corpus(const SyntheticCorpusOptions& options);

}  // namespace banditsum::text

#endif  // BANDITSUM_TEXT_HPP
