#ifndef BANDITSUM_MODEL_HPP
#define BANDITSUM_MODEL_HPP

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "banditsum/layers.hpp"
#include "banditsum/params.hpp"
#include "banditsum/policy.hpp"
#include "banditsum/text.hpp"

namespace banditsum::model {

/// Word to row mapping. Row 0 is the reserved unknown token.
class Vocabulary {
 public:
  static constexpr std::string_view kUnknown = "<unk>";

  Vocabulary();
  explicit Vocabulary(std::vector<std::string> words);

  /// Most frequent document tokens first (ties alphabetical), capped so the
  /// total size including <unk> is at most max_size; 0 means no cap.
  static Vocabulary build(const text::Corpus& corpus, std::size_t max_size = 0);

  std::size_t id(const std::string& word) const;
  bool contains(const std::string& word) const;
  const std::vector<std::string>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

class AffinityModel;

/// Everything the backward pass needs from one forward pass.
struct EncoderState {
  struct Cache {
    virtual ~Cache() = default;
  };

  const AffinityModel* owner = nullptr;
  /// h_t for each sentence, the decoder input.
  std::vector<Eigen::VectorXd> sentence_reprs;
  std::vector<Eigen::VectorXd> decoder_hidden;
  Eigen::VectorXd logits;
  std::shared_ptr<const Cache> encoder_cache;
};

struct ForwardResult {
  policy::AffinityVector affinities;
  EncoderState state;
};

/// A document encoder producing h_t per sentence followed by a
/// one-hidden-layer tanh perceptron and a sigmoid output unit.
class AffinityModel {
 public:
  virtual ~AffinityModel() = default;

  virtual std::string kind() const = 0;
  virtual std::unique_ptr<AffinityModel> clone() const = 0;
  /// Builder settings as key/value pairs, enough to rebuild the layout.
  virtual std::vector<std::pair<std::string, std::size_t>> settings() const = 0;

  ForwardResult forward(const text::Document& document) const;

  /// Gradient of sum_t d_affinities[t] * affinity_t.
  GradVector backward(const EncoderState& state, std::span<const double> d_affinities) const;
  /// Gradient of sum_t d_logits[t] * logit_t, the pre-sigmoid outputs.
  GradVector backward_logits(const EncoderState& state, std::span<const double> d_logits) const;

  ParamVector& params() { return params_; }
  const ParamVector& params() const { return params_; }
  const Vocabulary& vocabulary() const { return vocab_; }

  /// Name of the word-embedding segment.
  static constexpr std::string_view kEmbeddingSegment = "embedding";
  const layers::Embedding& embedding() const { return embedding_; }

  /// Zeroes the final output weights and bias so every affinity is 0.5.
  void zero_output_layer();

 protected:
  AffinityModel(Vocabulary vocab, std::size_t embed_dim);

  /// Call once all layers are registered: adds the decoder and initializes
  /// every weight uniformly in [-0.1, 0.1] and every bias to zero.
  void finish(std::size_t repr_dim, std::size_t decoder_hidden, std::uint64_t seed);

  virtual void encode(const text::Document& document, EncoderState& state) const = 0;
  virtual void encode_backward(const EncoderState& state, const std::vector<Eigen::VectorXd>& d_reprs,
                               Eigen::VectorXd& grad) const = 0;
  /// Hook for layer-specific initial values (e.g. LSTM forget-gate bias).
  virtual void post_init() {}

  std::vector<std::size_t> token_ids(const text::Sentence& sentence) const;

  Vocabulary vocab_;
  ParamVector params_;
  layers::Embedding embedding_;

 private:
  layers::Linear decoder_hidden_;
  layers::Linear decoder_out_;
};

/// Mean word embedding per sentence fed straight into the decoder; sentences
/// are scored independently of each other.
class BagOfWordsModel final : public AffinityModel {
 public:
  BagOfWordsModel(Vocabulary vocab, std::size_t embed_dim, std::size_t hidden_dim,
                  std::uint64_t seed);

  std::string kind() const override { return "bag_of_words"; }
  std::unique_ptr<AffinityModel> clone() const override;
  std::vector<std::pair<std::string, std::size_t>> settings() const override;

 protected:
  void encode(const text::Document& document, EncoderState& state) const override;
  void encode_backward(const EncoderState& state, const std::vector<Eigen::VectorXd>& d_reprs,
                       Eigen::VectorXd& grad) const override;

 private:
  std::size_t embed_dim_;
  std::size_t hidden_dim_;
};

struct RecurrentConfig {
  std::size_t embed_dim = 100;
  std::size_t word_hidden = 200;
  std::size_t sent_hidden = 200;
  std::size_t sent_layers = 2;
  std::size_t mlp_hidden = 100;
};

/// Word-level BiLSTM averaged over words, then a stacked sentence-level
/// BiLSTM over the document, then the decoder. Each h_t depends on every
/// sentence of the document.
class RecurrentModel final : public AffinityModel {
 public:
  RecurrentModel(Vocabulary vocab, const RecurrentConfig& config, std::uint64_t seed);

  std::string kind() const override { return "recurrent"; }
  std::unique_ptr<AffinityModel> clone() const override;
  std::vector<std::pair<std::string, std::size_t>> settings() const override;

 protected:
  void encode(const text::Document& document, EncoderState& state) const override;
  void encode_backward(const EncoderState& state, const std::vector<Eigen::VectorXd>& d_reprs,
                       Eigen::VectorXd& grad) const override;
  void post_init() override;

 private:
  RecurrentConfig config_;
  layers::BiLstm word_rnn_;
  std::vector<layers::BiLstm> sentence_rnn_;
};

std::unique_ptr<AffinityModel> build_bag_of_words_model(Vocabulary vocab, std::size_t embed_dim,
                                                        std::size_t hidden_dim, std::uint64_t seed);

std::unique_ptr<AffinityModel> build_recurrent_model(Vocabulary vocab, std::size_t embed_dim,
                                                     std::size_t word_hidden, std::size_t sent_hidden,
                                                     std::size_t sent_layers, std::size_t mlp_hidden,
                                                     std::uint64_t seed);

/// Overwrites embedding rows of in-vocabulary words from a "word v1 ... vD"
/// text file and returns how many rows were written. Throws
/// std::runtime_error naming the line on a dimension mismatch.
std::size_t load_embeddings(AffinityModel& model, const std::filesystem::path& path);

/// JSON container with the builder settings, vocabulary, segment table and
/// parameter values. Values round-trip exactly.
void save_checkpoint(const AffinityModel& model, const std::filesystem::path& path);
std::string serialize_checkpoint(const AffinityModel& model);
std::unique_ptr<AffinityModel> load_checkpoint(const std::filesystem::path& path);
std::unique_ptr<AffinityModel> parse_checkpoint(std::string_view json);

}  // namespace banditsum::model

#endif  // BANDITSUM_MODEL_HPP
