#include "banditsum/model.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "banditsum/random.hpp"
#include "json.hpp"

namespace banditsum::model {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(std::vector<std::string> words) {
  words_.reserve(words.size() + 1);
  words_.emplace_back(kUnknown);
  index_.emplace(std::string(kUnknown), 0);
  for (auto& w : words) {
    if (index_.count(w)) continue;
    index_.emplace(w, words_.size());
    words_.push_back(std::move(w));
  }
}

Vocabulary Vocabulary::build(const text::Corpus& corpus, std::size_t max_size) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& ex : corpus) {
    for (const auto& s : ex.document.sentences()) {
      for (const auto& t : s.tokens()) ++counts[t];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (max_size > 0 && ranked.size() > max_size - 1) ranked.resize(max_size - 1);
  std::vector<std::string> words;
  words.reserve(ranked.size());
  for (auto& [w, c] : ranked) words.push_back(w);
  return Vocabulary(std::move(words));
}

std::size_t Vocabulary::id(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? 0 : it->second;
}

bool Vocabulary::contains(const std::string& word) const { return index_.count(word) > 0; }

// ---------------------------------------------------------------------------
// AffinityModel

AffinityModel::AffinityModel(Vocabulary vocab, std::size_t embed_dim)
    : vocab_(std::move(vocab)) {
  if (embed_dim < 1) throw std::invalid_argument("embedding dimension must be at least 1");
  embedding_ = layers::Embedding(params_, std::string(kEmbeddingSegment), vocab_.size(), embed_dim);
}

void AffinityModel::finish(std::size_t repr_dim, std::size_t decoder_hidden, std::uint64_t seed) {
  if (decoder_hidden < 1) throw std::invalid_argument("decoder hidden size must be at least 1");
  decoder_hidden_ = layers::Linear(params_, "decoder.hidden", repr_dim, decoder_hidden);
  decoder_out_ = layers::Linear(params_, "decoder.out", decoder_hidden, 1);

  Rng rng(seed);
  for (const auto& seg : params_.segments()) {
    auto values = params_.view(seg.name);
    const bool is_bias = seg.name.size() >= 2 && seg.name.compare(seg.name.size() - 2, 2, ".b") == 0;
    for (double& v : values) v = is_bias ? 0.0 : -0.1 + 0.2 * uniform01(rng);
  }
  post_init();
}

void AffinityModel::zero_output_layer() {
  for (double& v : params_.view("decoder.out.W")) v = 0.0;
  for (double& v : params_.view("decoder.out.b")) v = 0.0;
}

std::vector<std::size_t> AffinityModel::token_ids(const text::Sentence& sentence) const {
  std::vector<std::size_t> ids;
  ids.reserve(sentence.tokens().size());
  for (const auto& t : sentence.tokens()) ids.push_back(vocab_.id(t));
  return ids;
}

ForwardResult AffinityModel::forward(const text::Document& document) const {
  ForwardResult out;
  EncoderState& state = out.state;
  state.owner = this;
  encode(document, state);

  const std::size_t n = state.sentence_reprs.size();
  const VectorXd& p = params_.values();
  state.decoder_hidden.resize(n);
  state.logits.resize(static_cast<Index>(n));
  out.affinities.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    state.decoder_hidden[t] = decoder_hidden_.forward(p, state.sentence_reprs[t]).array().tanh();
    const double logit = decoder_out_.forward(p, state.decoder_hidden[t])(0);
    state.logits(static_cast<Index>(t)) = logit;
    out.affinities[t] = layers::sigmoid(logit);
  }
  return out;
}

GradVector AffinityModel::backward(const EncoderState& state,
                                   std::span<const double> d_affinities) const {
  if (d_affinities.size() != static_cast<std::size_t>(state.logits.size())) {
    throw std::invalid_argument("backward: gradient length does not match the document");
  }
  std::vector<double> d_logits(d_affinities.size());
  for (std::size_t t = 0; t < d_logits.size(); ++t) {
    const double a = layers::sigmoid(state.logits(static_cast<Index>(t)));
    d_logits[t] = d_affinities[t] * a * (1.0 - a);
  }
  return backward_logits(state, d_logits);
}

GradVector AffinityModel::backward_logits(const EncoderState& state,
                                          std::span<const double> d_logits) const {
  if (state.owner != this) throw std::invalid_argument("backward: state comes from another model");
  const std::size_t n = state.sentence_reprs.size();
  if (d_logits.size() != n) {
    throw std::invalid_argument("backward: gradient length does not match the document");
  }
  const VectorXd& p = params_.values();
  GradVector grad = GradVector::zeros_like(params_);

  std::vector<VectorXd> d_reprs(n);
  VectorXd dy(1);
  for (std::size_t t = 0; t < n; ++t) {
    dy(0) = d_logits[t];
    const VectorXd& hidden = state.decoder_hidden[t];
    VectorXd d_hidden = decoder_out_.backward(p, grad.values, hidden, dy);
    d_hidden.array() *= 1.0 - hidden.array().square();
    d_reprs[t] = decoder_hidden_.backward(p, grad.values, state.sentence_reprs[t], d_hidden);
  }
  encode_backward(state, d_reprs, grad.values);

  for (const auto& seg : params_.segments()) {
    if (!seg.trainable) {
      grad.values.segment(static_cast<Index>(seg.offset), static_cast<Index>(seg.length)).setZero();
    }
  }
  return grad;
}

// ---------------------------------------------------------------------------
// BagOfWordsModel

namespace {

struct BagOfWordsCache final : EncoderState::Cache {
  std::vector<std::vector<std::size_t>> ids;
};

struct RecurrentCache final : EncoderState::Cache {
  std::vector<std::vector<std::size_t>> ids;
  std::vector<layers::BiLstmCache> word;
  std::vector<layers::BiLstmCache> sentence;
};

}  // namespace

BagOfWordsModel::BagOfWordsModel(Vocabulary vocab, std::size_t embed_dim, std::size_t hidden_dim,
                                 std::uint64_t seed)
    : AffinityModel(std::move(vocab), embed_dim), embed_dim_(embed_dim), hidden_dim_(hidden_dim) {
  finish(embed_dim, hidden_dim, seed);
}

std::unique_ptr<AffinityModel> BagOfWordsModel::clone() const {
  return std::make_unique<BagOfWordsModel>(*this);
}

std::vector<std::pair<std::string, std::size_t>> BagOfWordsModel::settings() const {
  return {{"embed_dim", embed_dim_}, {"hidden_dim", hidden_dim_}};
}

void BagOfWordsModel::encode(const text::Document& document, EncoderState& state) const {
  auto cache = std::make_shared<BagOfWordsCache>();
  const VectorXd& p = params_.values();
  state.sentence_reprs.clear();
  for (const auto& sentence : document.sentences()) {
    auto ids = token_ids(sentence);
    VectorXd sum = VectorXd::Zero(static_cast<Index>(embed_dim_));
    for (std::size_t id : ids) sum += embedding_.row(p, id);
    state.sentence_reprs.push_back(sum / static_cast<double>(ids.size()));
    cache->ids.push_back(std::move(ids));
  }
  state.encoder_cache = std::move(cache);
}

void BagOfWordsModel::encode_backward(const EncoderState& state,
                                      const std::vector<VectorXd>& d_reprs, VectorXd& grad) const {
  const auto* cache = dynamic_cast<const BagOfWordsCache*>(state.encoder_cache.get());
  if (!cache) throw std::invalid_argument("backward: encoder state does not match the model");
  for (std::size_t t = 0; t < d_reprs.size(); ++t) {
    const auto& ids = cache->ids[t];
    const VectorXd d_row = d_reprs[t] / static_cast<double>(ids.size());
    for (std::size_t id : ids) embedding_.accumulate(grad, id, d_row);
  }
}

// ---------------------------------------------------------------------------
// RecurrentModel

RecurrentModel::RecurrentModel(Vocabulary vocab, const RecurrentConfig& config, std::uint64_t seed)
    : AffinityModel(std::move(vocab), config.embed_dim), config_(config) {
  if (config.word_hidden < 1 || config.sent_hidden < 1 || config.sent_layers < 1) {
    throw std::invalid_argument("recurrent model dimensions must be at least 1");
  }
  word_rnn_ = layers::BiLstm(params_, "word_rnn", config.embed_dim, config.word_hidden);
  std::size_t in = word_rnn_.output_dim();
  for (std::size_t l = 0; l < config.sent_layers; ++l) {
    sentence_rnn_.emplace_back(params_, "sentence_rnn." + std::to_string(l), in, config.sent_hidden);
    in = sentence_rnn_.back().output_dim();
  }
  finish(in, config.mlp_hidden, seed);
}

void RecurrentModel::post_init() {
  auto set_forget_bias = [this](const layers::Lstm& cell) {
    auto b = params_.view(cell.bias_segment());
    const std::size_t h = cell.hidden();
    std::fill(b.begin() + static_cast<std::ptrdiff_t>(h), b.begin() + static_cast<std::ptrdiff_t>(2 * h), 1.0);
  };
  set_forget_bias(word_rnn_.forward_cell());
  set_forget_bias(word_rnn_.backward_cell());
  for (const auto& layer : sentence_rnn_) {
    set_forget_bias(layer.forward_cell());
    set_forget_bias(layer.backward_cell());
  }
}

std::unique_ptr<AffinityModel> RecurrentModel::clone() const {
  return std::make_unique<RecurrentModel>(*this);
}

std::vector<std::pair<std::string, std::size_t>> RecurrentModel::settings() const {
  return {{"embed_dim", config_.embed_dim},     {"word_hidden", config_.word_hidden},
          {"sent_hidden", config_.sent_hidden}, {"sent_layers", config_.sent_layers},
          {"mlp_hidden", config_.mlp_hidden}};
}

void RecurrentModel::encode(const text::Document& document, EncoderState& state) const {
  auto cache = std::make_shared<RecurrentCache>();
  const VectorXd& p = params_.values();
  const std::size_t n = document.size();
  const Index e = static_cast<Index>(config_.embed_dim);

  MatrixXd sentences(static_cast<Index>(word_rnn_.output_dim()), static_cast<Index>(n));
  cache->word.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    auto ids = token_ids(document.sentence(s));
    MatrixXd words(e, static_cast<Index>(ids.size()));
    for (std::size_t w = 0; w < ids.size(); ++w) words.col(static_cast<Index>(w)) = embedding_.row(p, ids[w]);
    sentences.col(static_cast<Index>(s)) = word_rnn_.forward(p, words, cache->word[s]).rowwise().mean();
    cache->ids.push_back(std::move(ids));
  }

  cache->sentence.resize(sentence_rnn_.size());
  MatrixXd h = std::move(sentences);
  for (std::size_t l = 0; l < sentence_rnn_.size(); ++l) {
    h = sentence_rnn_[l].forward(p, h, cache->sentence[l]);
  }

  state.sentence_reprs.resize(n);
  for (std::size_t s = 0; s < n; ++s) state.sentence_reprs[s] = h.col(static_cast<Index>(s));
  state.encoder_cache = std::move(cache);
}

void RecurrentModel::encode_backward(const EncoderState& state, const std::vector<VectorXd>& d_reprs,
                                     VectorXd& grad) const {
  const auto* cache = dynamic_cast<const RecurrentCache*>(state.encoder_cache.get());
  if (!cache) throw std::invalid_argument("backward: encoder state does not match the model");
  const VectorXd& p = params_.values();
  const std::size_t n = d_reprs.size();

  MatrixXd d_h(d_reprs.front().size(), static_cast<Index>(n));
  for (std::size_t s = 0; s < n; ++s) d_h.col(static_cast<Index>(s)) = d_reprs[s];
  for (std::size_t l = sentence_rnn_.size(); l-- > 0;) {
    d_h = sentence_rnn_[l].backward(p, grad, cache->sentence[l], d_h);
  }

  for (std::size_t s = 0; s < n; ++s) {
    const auto& ids = cache->ids[s];
    const Index len = static_cast<Index>(ids.size());
    const MatrixXd d_words_out =
        (d_h.col(static_cast<Index>(s)) / static_cast<double>(len)).replicate(1, len);
    const MatrixXd d_words = word_rnn_.backward(p, grad, cache->word[s], d_words_out);
    for (std::size_t w = 0; w < ids.size(); ++w) {
      embedding_.accumulate(grad, ids[w], d_words.col(static_cast<Index>(w)));
    }
  }
}

// ---------------------------------------------------------------------------
// Builders, embeddings and checkpoints

std::unique_ptr<AffinityModel> build_bag_of_words_model(Vocabulary vocab, std::size_t embed_dim,
                                                        std::size_t hidden_dim, std::uint64_t seed) {
  return std::make_unique<BagOfWordsModel>(std::move(vocab), embed_dim, hidden_dim, seed);
}

std::unique_ptr<AffinityModel> build_recurrent_model(Vocabulary vocab, std::size_t embed_dim,
                                                     std::size_t word_hidden, std::size_t sent_hidden,
                                                     std::size_t sent_layers, std::size_t mlp_hidden,
                                                     std::uint64_t seed) {
  RecurrentConfig config{embed_dim, word_hidden, sent_hidden, sent_layers, mlp_hidden};
  return std::make_unique<RecurrentModel>(std::move(vocab), config, seed);
}

std::size_t load_embeddings(AffinityModel& model, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embeddings: " + path.string());
  const std::size_t dim = model.embedding().dim();
  auto table = model.params().view(AffinityModel::kEmbeddingSegment);

  std::set<std::size_t> written;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> values;
    double v = 0.0;
    while (fields >> v) values.push_back(v);
    if (!fields.eof()) {
      throw std::runtime_error("embeddings line " + std::to_string(line_no) + ": unparsable value");
    }
    if (values.size() != dim) {
      throw std::runtime_error("embeddings line " + std::to_string(line_no) + ": expected " +
                               std::to_string(dim) + " values, got " + std::to_string(values.size()));
    }
    if (!model.vocabulary().contains(word)) continue;
    const std::size_t id = model.vocabulary().id(word);
    std::copy(values.begin(), values.end(), table.begin() + static_cast<std::ptrdiff_t>(id * dim));
    written.insert(id);
  }
  return written.size();
}

std::string serialize_checkpoint(const AffinityModel& model) {
  nlohmann::json j;
  j["format"] = "banditsum-checkpoint";
  j["version"] = 1;
  j["kind"] = model.kind();
  auto& settings = j["settings"] = nlohmann::json::object();
  for (const auto& [k, v] : model.settings()) settings[k] = v;
  j["vocabulary"] = model.vocabulary().words();
  auto& segments = j["segments"] = nlohmann::json::array();
  for (const auto& s : model.params().segments()) {
    segments.push_back({{"name", s.name}, {"offset", s.offset}, {"length", s.length},
                        {"trainable", s.trainable}});
  }
  const auto& values = model.params().values();
  j["values"] = std::vector<double>(values.data(), values.data() + values.size());
  return j.dump();
}

void save_checkpoint(const AffinityModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path.string());
  out << serialize_checkpoint(model) << '\n';
}

std::unique_ptr<AffinityModel> parse_checkpoint(std::string_view json) {
  const auto j = nlohmann::json::parse(json);
  if (j.value("format", "") != "banditsum-checkpoint") throw std::runtime_error("not a checkpoint");
  auto words = j.at("vocabulary").get<std::vector<std::string>>();
  if (words.empty() || words.front() != Vocabulary::kUnknown) {
    throw std::runtime_error("checkpoint vocabulary must start with <unk>");
  }
  words.erase(words.begin());
  Vocabulary vocab(std::move(words));
  const auto& s = j.at("settings");
  auto get = [&s](const char* key) { return s.at(key).get<std::size_t>(); };

  std::unique_ptr<AffinityModel> model;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "bag_of_words") {
    model = build_bag_of_words_model(std::move(vocab), get("embed_dim"), get("hidden_dim"), 0);
  } else if (kind == "recurrent") {
    model = build_recurrent_model(std::move(vocab), get("embed_dim"), get("word_hidden"),
                                  get("sent_hidden"), get("sent_layers"), get("mlp_hidden"), 0);
  } else {
    throw std::runtime_error("unknown model kind in checkpoint: " + kind);
  }

  const auto& segments = j.at("segments");
  const auto& layout = model->params().segments();
  if (segments.size() != layout.size()) throw std::runtime_error("checkpoint segment table mismatch");
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto& seg = segments[i];
    if (seg.at("name").get<std::string>() != layout[i].name ||
        seg.at("offset").get<std::size_t>() != layout[i].offset ||
        seg.at("length").get<std::size_t>() != layout[i].length) {
      throw std::runtime_error("checkpoint segment table mismatch at " + layout[i].name);
    }
    model->params().set_trainable(layout[i].name, seg.at("trainable").get<bool>());
  }
  const auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != model->params().size()) throw std::runtime_error("checkpoint value count mismatch");
  std::copy(values.begin(), values.end(), model->params().values().data());
  return model;
}

std::unique_ptr<AffinityModel> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_checkpoint(buffer.str());
}

}  // namespace banditsum::model
