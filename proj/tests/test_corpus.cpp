#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "relex/corpus.h"
#include "relex/synthetic.h"

using namespace relex;

namespace {

std::vector<Sentence> parse(const std::string& text, ParseOptions opts = {}) {
  std::istringstream in(text);
  return parse_corpus(in, "test", opts);
}

const char* kTwoTokens =
    "1\tYates\tNNP\t2\tnsubj\tU-PER\n"
    "2\tlives\tVBZ\t0\troot\tO\n";

}  // namespace

TEST_CASE("minimal sentence with one relation") {
  std::string text =
      "1\tYates\tNNP\t3\tnsubj\tU-PER\n"
      "2\tin\tIN\t3\tprep\tO\n"
      "3\tlives\tVBZ\t0\troot\tU-LOC\n"
      "#rel\t1\t3\tLIVES_IN\n";
  auto corpus = parse(text);
  REQUIRE(corpus.size() == 1);
  CHECK(corpus[0].size() == 3);
  REQUIRE(corpus[0].relations.size() == 1);
  CHECK(corpus[0].relations[0].arg1_last == 1);
  CHECK(corpus[0].relations[0].type == "LIVES_IN");
  REQUIRE(corpus[0].entities.size() == 2);
  CHECK(corpus[0].entities[0] == EntitySpan{"PER", 1, 1});
}

TEST_CASE("empty file gives empty corpus; #doc lines ignored") {
  CHECK(parse("").empty());
  CHECK(parse("\n\n").empty());
  auto corpus = parse("#doc anything goes here\n" + std::string(kTwoTokens));
  CHECK(corpus.size() == 1);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse("1\tYates\tNNP\t2\n"), doctest::Contains("test:1"),
                       std::runtime_error);
  // head out of range
  CHECK_THROWS_AS(parse("1\tYates\tNNP\t5\tnsubj\tO\n"), std::exception);
  // relation argument out of range
  CHECK_THROWS_AS(parse(std::string(kTwoTokens) + "#rel\t1\t9\tX\n"), std::exception);
  // relation argument must end an entity
  CHECK_THROWS_WITH_AS(parse(std::string(kTwoTokens) + "#rel\t1\t2\tX\n"),
                       doctest::Contains("not the last word of an entity"),
                       std::runtime_error);
  // ill-formed gold tags are rejected (no silent repair at load)
  CHECK_THROWS_WITH_AS(parse("1\tYates\tNNP\t2\tnsubj\tI-PER\n"
                             "2\tlives\tVBZ\t0\troot\tL-PER\n"),
                       doctest::Contains("ill-formed"), std::runtime_error);
  // unknown comment
  CHECK_THROWS_AS(parse("#foo\n"), std::runtime_error);
  // out-of-sequence index
  CHECK_THROWS_AS(parse("2\tYates\tNNP\t0\troot\tO\n"), std::runtime_error);
}

TEST_CASE("semeval mode permits relation arguments without entities") {
  std::string text = std::string(kTwoTokens) + "#rel\t1\t2\tCAUSE\n";
  ParseOptions opts;
  opts.require_entity_args = false;
  auto corpus = parse(text, opts);
  CHECK(corpus[0].relations.size() == 1);
}

TEST_CASE("synthetic corpus round-trips byte-identically") {
  SyntheticOptions opts;
  opts.n = 5;
  opts.seed = 7;
  auto corpus = gen_synthetic(opts);
  std::ostringstream first;
  write_corpus(first, corpus);
  std::istringstream in(first.str());
  auto reparsed = parse_corpus(in, "roundtrip");
  std::ostringstream second;
  write_corpus(second, reparsed);
  CHECK(first.str() == second.str());
  CHECK(reparsed.size() == corpus.size());
}

TEST_CASE("BILOU encoding of a two-token person") {
  TagAlphabet tags({"LOC", "PER"});
  auto ids = encode_bilou({{"PER", 1, 2}}, 2, tags);
  REQUIRE(ids.size() == 2);
  CHECK(tags.name(ids[0]) == "B-PER");
  CHECK(tags.name(ids[1]) == "L-PER");

  auto none = encode_bilou({}, 3, tags);
  for (int id : none) CHECK(id == tags.o_id());

  CHECK_THROWS_WITH_AS(encode_bilou({{"PER", 1, 2}, {"LOC", 2, 3}}, 3, tags),
                       doctest::Contains("overlap"), std::invalid_argument);
}

TEST_CASE("BILOU repair decoding") {
  TagAlphabet tags({"LOC", "PER"});
  auto id = [&](const std::string& s) { return tags.parse(s); };

  auto spans = decode_bilou({id("B-PER"), id("L-PER"), id("O"), id("U-LOC")}, tags);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == EntitySpan{"PER", 1, 2});
  CHECK(spans[1] == EntitySpan{"LOC", 4, 4});

  CHECK(decode_bilou({id("I-PER"), id("L-PER")}, tags).empty());
  CHECK(decode_bilou({id("B-PER"), id("L-LOC")}, tags).empty());
  // A second B can start the maximal well-formed run.
  auto repaired = decode_bilou({id("B-PER"), id("B-PER"), id("L-PER")}, tags);
  REQUIRE(repaired.size() == 1);
  CHECK(repaired[0] == EntitySpan{"PER", 2, 3});
}

TEST_CASE("BILOU round trip on random valid span sets") {
  TagAlphabet tags({"LOC", "ORG", "PER"});
  std::mt19937 rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = std::uniform_int_distribution<int>(1, 12)(rng);
    std::vector<EntitySpan> spans;
    int pos = 1;
    while (pos <= n) {
      int remaining = n - pos + 1;
      int len = std::uniform_int_distribution<int>(1, std::min(3, remaining))(rng);
      if (std::bernoulli_distribution(0.5)(rng)) {
        int type = std::uniform_int_distribution<int>(0, 2)(rng);
        spans.push_back({tags.types()[static_cast<size_t>(type)], pos, pos + len - 1});
      }
      pos += len;
    }
    auto decoded = decode_bilou(encode_bilou(spans, n, tags), tags);
    REQUIRE(decoded == spans);
  }
}

TEST_CASE("legal next tags") {
  TagAlphabet tags({"LOC", "PER"});
  auto id = [&](const std::string& s) { return tags.parse(s); };
  auto legal = legal_next_tags(id("B-PER"), tags);
  for (int t = 0; t < tags.size(); ++t) {
    bool expect = (t == id("I-PER") || t == id("L-PER"));
    CHECK(legal[static_cast<size_t>(t)] == expect);
  }
  // After O everything except I-* and L-* is legal.
  legal = legal_next_tags(id("O"), tags);
  CHECK(legal[static_cast<size_t>(id("O"))]);
  CHECK(legal[static_cast<size_t>(id("B-PER"))]);
  CHECK(legal[static_cast<size_t>(id("U-LOC"))]);
  CHECK_FALSE(legal[static_cast<size_t>(id("I-PER"))]);
  CHECK_FALSE(legal[static_cast<size_t>(id("L-LOC"))]);
  // U-LOC allows a fresh B-PER.
  CHECK(legal_next_tags(id("U-LOC"), tags)[static_cast<size_t>(id("B-PER"))]);
  // Sentence-final position forbids B/I.
  auto final_legal = legal_next_tags(id("O"), tags, /*last=*/true);
  CHECK_FALSE(final_legal[static_cast<size_t>(id("B-PER"))]);
  CHECK(final_legal[static_cast<size_t>(id("U-PER"))]);
  auto final_after_b = legal_next_tags(id("B-PER"), tags, /*last=*/true);
  CHECK_FALSE(final_after_b[static_cast<size_t>(id("I-PER"))]);
  CHECK(final_after_b[static_cast<size_t>(id("L-PER"))]);
}

TEST_CASE("legal transitions cover exactly what encodings produce") {
  TagAlphabet tags({"LOC", "PER"});
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    int n = std::uniform_int_distribution<int>(1, 10)(rng);
    std::vector<EntitySpan> spans;
    int pos = 1;
    while (pos <= n) {
      int len = std::uniform_int_distribution<int>(1, std::min(4, n - pos + 1))(rng);
      if (std::bernoulli_distribution(0.6)(rng)) {
        spans.push_back({std::bernoulli_distribution(0.5)(rng) ? "LOC" : "PER", pos,
                         pos + len - 1});
      }
      pos += len;
    }
    auto ids = encode_bilou(spans, n, tags);
    int prev = tags.o_id();
    for (size_t t = 0; t < ids.size(); ++t) {
      auto legal = legal_next_tags(prev, tags, t + 1 == ids.size());
      CHECK(legal[static_cast<size_t>(ids[t])]);
      prev = ids[t];
    }
  }
}

TEST_CASE("vocabulary construction and unknown words") {
  std::string text =
      "1\tAlice\tNNP\t2\tnsubj\tU-PER\n"
      "2\tmet\tVBD\t0\troot\tO\n"
      "3\tAlice\tNNP\t2\tdobj\tU-PER\n"
      "\n"
      "1\tBob\tNNP\t2\tnsubj\tU-PER\n"
      "2\tslept\tVBD\t0\troot\tO\n";
  auto corpus = parse(text);

  Vocabulary v1 = build_vocab(corpus, 1);
  CHECK(v1.words.find("Alice") > 0);
  CHECK(v1.words.find("Bob") > 0);
  CHECK(v1.words.get("unseen") == Vocabulary::kUnk);

  // min_word_freq 2: the hapax Bob maps to UNK.
  Vocabulary v2 = build_vocab(corpus, 2);
  CHECK(v2.words.find("Alice") > 0);
  CHECK(v2.words.find("Bob") == -1);
  CHECK(v2.words.get("Bob") == Vocabulary::kUnk);
}

TEST_CASE("word vector loading with case fallback") {
  std::string text =
      "1\tChicago\tNNP\t2\tnsubj\tU-LOC\n"
      "2\tsleeps\tVBZ\t0\troot\tO\n";
  auto corpus = parse(text);
  Vocabulary vocab = build_vocab(corpus, 1);
  int chicago = vocab.words.find("Chicago");
  REQUIRE(chicago > 0);

  Tensor table(vocab.words.size(), 3);
  std::istringstream vectors("2 3\nchicago 1.5 -2 0.25\nparis 9 9 9\n");
  int covered = load_word_vectors(vectors, vocab, table);
  CHECK(covered == 1);  // lowercase fallback matches exactly once
  CHECK(table.at(chicago, 0) == 1.5);
  CHECK(table.at(chicago, 2) == 0.25);

  // No known words: nothing changes.
  Tensor table2(vocab.words.size(), 3);
  std::istringstream none("berlin 1 2 3\n");
  CHECK(load_word_vectors(none, vocab, table2) == 0);
  for (double x : table2.data) CHECK(x == 0.0);

  // Dimension mismatch is an error.
  Tensor table3(vocab.words.size(), 3);
  std::istringstream bad("chicago 1 2\n");
  CHECK_THROWS_WITH_AS(load_word_vectors(bad, vocab, table3), doctest::Contains("dimension"),
                       std::runtime_error);
}

TEST_CASE("word vector file without a header line") {
  std::string text = "1\tParis\tNNP\t0\troot\tU-LOC\n";
  auto corpus = parse(text);
  Vocabulary vocab = build_vocab(corpus, 1);
  Tensor table(vocab.words.size(), 2);
  std::istringstream vectors("paris 4 5\nrome 1 1\n");
  CHECK(load_word_vectors(vectors, vocab, table) == 1);
  CHECK(table.at(vocab.words.find("Paris"), 1) == 5.0);
}
