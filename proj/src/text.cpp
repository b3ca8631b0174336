#include "banditsum/text.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "banditsum/random.hpp"
#include "json.hpp"

namespace banditsum::text {

namespace {

bool is_token_char(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

std::vector<Sentence> to_sentences(const nlohmann::json& list) {
  std::vector<Sentence> out;
  out.reserve(list.size());
  for (const auto& item : list) {
    Sentence s(item.get<std::string>());
    if (!s.tokens().empty()) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TokenList tokenize(std::string_view text) {
  TokenList tokens;
  std::string current;
  for (unsigned char c : text) {
    if (is_token_char(c)) {
      current.push_back(lower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Sentence::Sentence(std::string original)
    : original_(std::move(original)), tokens_(tokenize(original_)) {}

Document::Document(std::string id, std::vector<Sentence> sentences,
                   std::optional<std::string> raw_text)
    : id_(std::move(id)), sentences_(std::move(sentences)), raw_text_(std::move(raw_text)) {
  if (sentences_.empty()) throw std::invalid_argument("empty document: " + id_);
  for (const auto& s : sentences_) {
    if (s.tokens().empty()) {
      throw std::invalid_argument("sentence without tokens in document: " + id_);
    }
  }
}

ReferenceSummary::ReferenceSummary(std::vector<Sentence> sentences)
    : sentences_(std::move(sentences)) {
  if (sentences_.empty()) throw std::invalid_argument("empty reference summary");
}

TokenList ReferenceSummary::tokens() const {
  TokenList out;
  for (const auto& s : sentences_) out.insert(out.end(), s.tokens().begin(), s.tokens().end());
  return out;
}

Corpus parse_corpus(std::string_view jsonl) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    std::size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == jsonl.size()) break;
      continue;
    }

    nlohmann::json obj;
    std::string id;
    try {
      obj = nlohmann::json::parse(line);
      id = obj.at("id").get<std::string>();
      if (!obj.at("sentences").is_array() || !obj.at("abstract").is_array()) {
        throw std::runtime_error("\"sentences\" and \"abstract\" must be arrays");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("malformed corpus line " + std::to_string(line_no) + ": " +
                               e.what());
    }

    std::vector<Sentence> sentences;
    std::vector<Sentence> abstract;
    try {
      sentences = to_sentences(obj.at("sentences"));
      abstract = to_sentences(obj.at("abstract"));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("malformed corpus line " + std::to_string(line_no) + ": " +
                               e.what());
    }
    if (sentences.empty()) throw std::runtime_error("empty document: " + id);
    if (abstract.empty()) throw std::runtime_error("empty abstract: " + id);
    if (!seen.insert(id).second) throw std::runtime_error("duplicate document id: " + id);

    corpus.push_back(CorpusExample{Document(id, std::move(sentences)),
                                   ReferenceSummary(std::move(abstract))});
    if (end == jsonl.size()) break;
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_corpus(buffer.str());
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& ex : corpus) {
    nlohmann::json obj;
    obj["id"] = ex.id();
    auto& sentences = obj["sentences"] = nlohmann::json::array();
    for (const auto& s : ex.document.sentences()) sentences.push_back(s.original());
    auto& abstract = obj["abstract"] = nlohmann::json::array();
    for (const auto& s : ex.reference.sentences()) abstract.push_back(s.original());
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write corpus: " + path.string());
  out << serialize_corpus(corpus);
}

Corpus generate_synthetic_corpus(const SyntheticCorpusOptions& options) {
  const std::size_t n = options.n_sentences;
  if (n == 0) throw std::invalid_argument("n_sentences must be at least 1");
  if (options.sentence_length == 0) throw std::invalid_argument("sentence_length must be at least 1");
  if (options.planted_positions.empty()) {
    throw std::invalid_argument("at least one planted position is required");
  }
  std::vector<bool> planted(n, false);
  for (std::size_t p : options.planted_positions) {
    if (p >= n) {
      throw std::invalid_argument("planted position " + std::to_string(p) +
                                  " out of range for " + std::to_string(n) + " sentences");
    }
    if (planted[p]) throw std::invalid_argument("duplicate planted position " + std::to_string(p));
    planted[p] = true;
  }

  const std::size_t salient = options.vocab_size / 2;
  const std::size_t ordinary = options.vocab_size - salient;
  const std::size_t n_planted = options.planted_positions.size();
  if (salient < n_planted * options.sentence_length ||
      ordinary < (n - n_planted) * options.sentence_length) {
    throw std::invalid_argument("vocab_size too small for token-disjoint sentences");
  }

  Rng rng(options.seed);
  std::vector<std::size_t> salient_pool(salient);
  std::vector<std::size_t> ordinary_pool(ordinary);

  // Partial Fisher-Yates: the first `count` entries become a fresh sample.
  auto draw = [&rng](std::vector<std::size_t>& pool, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t j = i + uniform_index(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
  };
  auto render = [](const std::vector<std::size_t>& ids, std::size_t from, std::size_t len) {
    std::string s;
    for (std::size_t k = 0; k < len; ++k) {
      if (k) s += ' ';
      s += 'w';
      s += std::to_string(ids[from + k]);
    }
    return s + '.';
  };

  Corpus corpus;
  corpus.reserve(options.n_docs);
  const std::size_t len = options.sentence_length;
  for (std::size_t d = 0; d < options.n_docs; ++d) {
    std::iota(salient_pool.begin(), salient_pool.end(), std::size_t{0});
    std::iota(ordinary_pool.begin(), ordinary_pool.end(), salient);
    draw(salient_pool, n_planted * len);
    draw(ordinary_pool, (n - n_planted) * len);

    std::vector<std::string> texts(n);
    std::size_t next_salient = 0;
    std::size_t next_ordinary = 0;
    for (std::size_t t = 0; t < n; ++t) {
      if (planted[t]) {
        texts[t] = render(salient_pool, next_salient, len);
        next_salient += len;
      } else {
        texts[t] = render(ordinary_pool, next_ordinary, len);
        next_ordinary += len;
      }
    }

    std::vector<Sentence> sentences;
    sentences.reserve(n);
    for (const auto& t : texts) sentences.emplace_back(t);
    std::vector<Sentence> reference;
    for (std::size_t p : options.planted_positions) reference.emplace_back(texts[p]);

    corpus.push_back(CorpusExample{
        Document(options.id_prefix + "-" + std::to_string(d), std::move(sentences)),
        ReferenceSummary(std::move(reference))});
  }
  return corpus;
}

}  // namespace banditsum::text
