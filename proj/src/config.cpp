#include "banditsum/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace banditsum::config {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t to_size(std::string_view v) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw std::invalid_argument("expected a non-negative integer");
  return out;
}

std::uint64_t to_u64(std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw std::invalid_argument("expected a non-negative integer");
  return out;
}

double to_double(std::string_view v) {
  const std::string s(v);
  std::size_t used = 0;
  const double out = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("expected a number");
  return out;
}

bool to_bool(std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("expected true or false");
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"B", [](RunConfig& c, std::string_view v) { c.train.samples = to_size(v); }},
      {"M", [](RunConfig& c, std::string_view v) { c.train.summary_length = to_size(v); }},
      {"epsilon", [](RunConfig& c, std::string_view v) { c.train.epsilon = to_double(v); }},
      {"affinity_floor", [](RunConfig& c, std::string_view v) { c.train.affinity_floor = to_double(v); }},
      {"baseline", [](RunConfig& c, std::string_view v) { c.train.baseline = trainer::parse_baseline_kind(v); }},
      {"epochs", [](RunConfig& c, std::string_view v) { c.train.epochs = to_size(v); }},
      {"seed", [](RunConfig& c, std::string_view v) { c.train.seed = to_u64(v); }},
      {"validation_interval", [](RunConfig& c, std::string_view v) { c.train.validation_interval = to_size(v); }},
      {"validation_limit", [](RunConfig& c, std::string_view v) { c.train.validation_limit = to_size(v); }},
      {"stem", [](RunConfig& c, std::string_view v) { c.train.rouge.stem = to_bool(v); }},
      {"union_lcs", [](RunConfig& c, std::string_view v) { c.train.rouge.union_lcs = to_bool(v); }},
      {"lr", [](RunConfig& c, std::string_view v) { c.train.adam.lr = to_double(v); }},
      {"beta1", [](RunConfig& c, std::string_view v) { c.train.adam.beta1 = to_double(v); }},
      {"beta2", [](RunConfig& c, std::string_view v) { c.train.adam.beta2 = to_double(v); }},
      {"eps_stab", [](RunConfig& c, std::string_view v) { c.train.adam.eps_stab = to_double(v); }},
      {"weight_decay", [](RunConfig& c, std::string_view v) { c.train.adam.weight_decay = to_double(v); }},
      {"clip_norm", [](RunConfig& c, std::string_view v) { c.train.adam.clip_norm = to_double(v); }},
      {"model",
       [](RunConfig& c, std::string_view v) {
         if (v != "bag_of_words" && v != "recurrent") throw std::invalid_argument("expected bag_of_words or recurrent");
         c.model.kind = std::string(v);
       }},
      {"vocab_size", [](RunConfig& c, std::string_view v) { c.model.vocab_size = to_size(v); }},
      {"embed_dim", [](RunConfig& c, std::string_view v) { c.model.embed_dim = to_size(v); }},
      {"hidden_dim", [](RunConfig& c, std::string_view v) { c.model.hidden_dim = to_size(v); }},
      {"word_hidden", [](RunConfig& c, std::string_view v) { c.model.word_hidden = to_size(v); }},
      {"sent_hidden", [](RunConfig& c, std::string_view v) { c.model.sent_hidden = to_size(v); }},
      {"sent_layers", [](RunConfig& c, std::string_view v) { c.model.sent_layers = to_size(v); }},
      {"mlp_hidden", [](RunConfig& c, std::string_view v) { c.model.mlp_hidden = to_size(v); }},
      {"embeddings", [](RunConfig& c, std::string_view v) { c.model.embeddings = std::string(v); }},
  };
  return table;
}

// Shortest representation that parses back to the same double.
std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::unique_ptr<model::AffinityModel> ModelSpec::build(const text::Corpus& corpus, std::uint64_t seed) const {
  return build(model::Vocabulary::build(corpus, vocab_size), seed);
}

std::unique_ptr<model::AffinityModel> ModelSpec::build(model::Vocabulary vocab, std::uint64_t seed) const {
  std::unique_ptr<model::AffinityModel> out;
  if (kind == "bag_of_words") {
    out = model::build_bag_of_words_model(std::move(vocab), embed_dim, hidden_dim, seed);
  } else if (kind == "recurrent") {
    out = model::build_recurrent_model(std::move(vocab), embed_dim, word_hidden, sent_hidden, sent_layers,
                                       mlp_hidden, seed);
  } else {
    throw std::invalid_argument("unknown model kind: " + kind);
  }
  if (!embeddings.empty()) model::load_embeddings(*out, embeddings);
  return out;
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::set<std::string, std::less<>> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw std::runtime_error(where + ": expected key=value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw std::runtime_error(where + ": unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) {
      throw std::runtime_error(where + ": duplicate key '" + std::string(key) + "'");
    }
    try {
      it->second(config, value);
    } catch (const std::exception& e) {
      throw std::runtime_error(where + ": bad value for '" + std::string(key) + "': " + e.what());
    }
  }
  config.train.validate();
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string render_config(const RunConfig& c) {
  std::ostringstream out;
  const auto& t = c.train;
  out << "B = " << t.samples << '\n'
      << "M = " << t.summary_length << '\n'
      << "epsilon = " << shortest(t.epsilon) << '\n'
      << "affinity_floor = " << shortest(t.affinity_floor) << '\n'
      << "baseline = " << trainer::to_string(t.baseline) << '\n'
      << "epochs = " << t.epochs << '\n'
      << "seed = " << t.seed << '\n'
      << "validation_interval = " << t.validation_interval << '\n'
      << "validation_limit = " << t.validation_limit << '\n'
      << "stem = " << (t.rouge.stem ? "true" : "false") << '\n'
      << "union_lcs = " << (t.rouge.union_lcs ? "true" : "false") << '\n'
      << "lr = " << shortest(t.adam.lr) << '\n'
      << "beta1 = " << shortest(t.adam.beta1) << '\n'
      << "beta2 = " << shortest(t.adam.beta2) << '\n'
      << "eps_stab = " << shortest(t.adam.eps_stab) << '\n'
      << "weight_decay = " << shortest(t.adam.weight_decay) << '\n'
      << "clip_norm = " << shortest(t.adam.clip_norm) << '\n'
      << "model = " << c.model.kind << '\n'
      << "vocab_size = " << c.model.vocab_size << '\n'
      << "embed_dim = " << c.model.embed_dim << '\n'
      << "hidden_dim = " << c.model.hidden_dim << '\n'
      << "word_hidden = " << c.model.word_hidden << '\n'
      << "sent_hidden = " << c.model.sent_hidden << '\n'
      << "sent_layers = " << c.model.sent_layers << '\n'
      << "mlp_hidden = " << c.model.mlp_hidden << '\n';
  if (!c.model.embeddings.empty()) out << "embeddings = " << c.model.embeddings << '\n';
  return out.str();
}

}  // namespace banditsum::config
