#include <gtest/gtest.h>

#include <set>

#include "banditsum/text.hpp"
#include "support.hpp"

using namespace banditsum::text;

TEST(Tokenize, LowercasesAndSplitsOnPunctuation) {
  EXPECT_EQ(tokenize("The Cat, sat!"), (TokenList{"the", "cat", "sat"}));
  EXPECT_EQ(tokenize("U.S.-based 3rd"), (TokenList{"u", "s", "based", "3rd"}));
  EXPECT_TRUE(tokenize(" ,;- ").empty());
}

TEST(Tokenize, KeepsNonAsciiBytesInsideTokens) {
  EXPECT_EQ(tokenize("caf\xc3\xa9 ole"), (TokenList{"caf\xc3\xa9", "ole"}));
}

TEST(Document, RejectsEmptyAndTokenlessInput) {
  EXPECT_THROW(Document("d", {}), std::invalid_argument);
  EXPECT_THROW(Document("d", {Sentence("ok"), Sentence("...")}), std::invalid_argument);
  EXPECT_THROW(ReferenceSummary({}), std::invalid_argument);
}

TEST(Corpus, ParsesAndDropsTokenlessSentences) {
  const auto corpus = parse_corpus(
      R"({"id":"a","sentences":["One two.","--","Three."],"abstract":["one"]})"
      "\n\n"
      R"({"id":"b","sentences":["x"],"abstract":["y z"]})");
  ASSERT_EQ(corpus.size(), 2u);
  EXPECT_EQ(corpus[0].document.size(), 2u);
  EXPECT_EQ(corpus[0].document.sentence(1).original(), "Three.");
  EXPECT_EQ(corpus[1].reference.tokens(), (TokenList{"y", "z"}));
}

TEST(Corpus, ErrorsNameTheProblem) {
  auto message = [](std::string_view text) {
    try {
      parse_corpus(text);
    } catch (const std::runtime_error& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("{not json").find("malformed corpus line 1"), std::string::npos);
  EXPECT_NE(message("\n{\"id\":\"a\",\"sentences\":[]}").find("malformed corpus line 2"), std::string::npos);
  EXPECT_EQ(message(R"({"id":"a","sentences":["!!"],"abstract":["x"]})"), "empty document: a");
  EXPECT_EQ(message(R"({"id":"a","sentences":["x"],"abstract":[]})"), "empty abstract: a");
  EXPECT_EQ(message(R"({"id":"a","sentences":["x"],"abstract":["x"]})"
                    "\n"
                    R"({"id":"a","sentences":["y"],"abstract":["y"]})"),
            "duplicate document id: a");
}

TEST(Corpus, SerializeRoundTrips) {
  SyntheticCorpusOptions opts;
  opts.n_docs = 5;
  const auto corpus = generate_synthetic_corpus(opts);
  const auto text = serialize_corpus(corpus);
  const auto again = parse_corpus(text);
  EXPECT_EQ(serialize_corpus(again), text);
}

TEST(Synthetic, IsDeterministicPerSeed) {
  SyntheticCorpusOptions opts;
  opts.n_docs = 20;
  opts.seed = 11;
  const auto a = serialize_corpus(generate_synthetic_corpus(opts));
  EXPECT_EQ(a, serialize_corpus(generate_synthetic_corpus(opts)));
  opts.seed = 12;
  EXPECT_NE(a, serialize_corpus(generate_synthetic_corpus(opts)));
}

TEST(Synthetic, ReferenceIsThePlantedSentences) {
  SyntheticCorpusOptions opts;
  opts.n_docs = 30;
  opts.planted_positions = {7, 2, 9};
  for (const auto& ex : generate_synthetic_corpus(opts)) {
    ASSERT_EQ(ex.document.size(), opts.n_sentences);
    ASSERT_EQ(ex.reference.sentences().size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_EQ(ex.reference.sentences()[k].tokens(), ex.document.sentence(opts.planted_positions[k]).tokens());
    }
    std::set<std::string> seen;
    for (const auto& s : ex.document.sentences()) {
      EXPECT_EQ(s.tokens().size(), opts.sentence_length);
      for (const auto& t : s.tokens()) EXPECT_TRUE(seen.insert(t).second) << "token repeated: " << t;
    }
  }
}

TEST(Synthetic, SalientVocabularyOnlyInPlantedSentences) {
  SyntheticCorpusOptions opts;
  opts.n_docs = 10;
  opts.vocab_size = 160;
  for (const auto& ex : generate_synthetic_corpus(opts)) {
    for (std::size_t i = 0; i < ex.document.size(); ++i) {
      const bool planted = i < 3;
      for (const auto& t : ex.document.sentence(i).tokens()) {
        const int k = std::stoi(t.substr(1));
        EXPECT_EQ(k < 80, planted) << t << " in sentence " << i;
      }
    }
  }
}

TEST(Synthetic, RejectsBadOptions) {
  SyntheticCorpusOptions opts;
  opts.planted_positions = {10};
  EXPECT_THROW(generate_synthetic_corpus(opts), std::invalid_argument);
  opts.planted_positions = {1, 1};
  EXPECT_THROW(generate_synthetic_corpus(opts), std::invalid_argument);
  opts.planted_positions = {0};
  opts.vocab_size = 20;
  EXPECT_THROW(generate_synthetic_corpus(opts), std::invalid_argument);
}

TEST(Synthetic, PlantedAtLastAndOutOfRange) {
  SyntheticCorpusOptions opts;
  opts.n_docs = 1;
  opts.n_sentences = 5;
  opts.planted_positions = {4};
  const auto corpus = generate_synthetic_corpus(opts);
  EXPECT_EQ(corpus[0].reference.tokens(), corpus[0].document.sentence(4).tokens());
  opts.planted_positions = {9};
  EXPECT_THROW(generate_synthetic_corpus(opts), std::invalid_argument);
}
