#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "relex/corpus.h"
#include "relex/encoder.h"
#include "relex/gradcheck.h"
#include "relex/model.h"
#include "relex/synthetic.h"

using namespace relex;

namespace {

Vocabulary toy_vocab() {
  SyntheticOptions opts;
  opts.n = 6;
  opts.seed = 11;
  return build_vocab(gen_synthetic(opts), 1, "");
}

}  // namespace

TEST_CASE("embed_token has word+pos length and accepts UNK") {
  Vocabulary vocab = toy_vocab();
  ParamStore store;
  std::mt19937 rng(1);
  EmbedTables tables = make_embed_tables(store, vocab, 200, 25, 25, 25, rng);
  Graph g;
  int x = embed_token(g, tables, vocab.words.get("nosuchword"), vocab.pos.get("NNP"), 0.0);
  CHECK(g.value(x).rows == 225);
  // UNK row, not an error
  const Tensor& row = g.value(x);
  for (int j = 0; j < 200; ++j) {
    CHECK(row[j] == tables.word->value.at(Vocabulary::kUnk, j));
  }
  CHECK_THROWS_AS(g.lookup(*tables.word, vocab.words.size()), std::out_of_range);
}

TEST_CASE("embedding gradient reaches exactly the two looked-up rows") {
  Vocabulary vocab = toy_vocab();
  ParamStore store;
  std::mt19937 rng(2);
  EmbedTables tables = make_embed_tables(store, vocab, 8, 4, 4, 4, rng);
  int wid = 3, pid = 1;
  Graph g;
  int x = embed_token(g, tables, wid, pid, 0.0);
  g.backward(g.sum(x));
  for (int r = 0; r < tables.word->rows(); ++r) {
    for (int c = 0; c < tables.word->cols(); ++c) {
      CHECK(tables.word->grad.at(r, c) == (r == wid ? 1.0 : 0.0));
    }
  }
  for (int r = 0; r < tables.pos->rows(); ++r) {
    for (int c = 0; c < tables.pos->cols(); ++c) {
      CHECK(tables.pos->grad.at(r, c) == (r == pid ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("lstm_step zero cases") {
  ParamStore store;
  std::mt19937 rng(3);
  LstmGates gates = make_lstm_gates(store, "seq.fwd", 3, 4, kSeqGroup, 0.0, rng);
  // All-zero weights and inputs: h = c = 0.
  for (const auto& p : store.all()) p->value.zero();
  Graph g;
  LstmState prev{g.zeros(4), g.zeros(4)};
  LstmState out = lstm_step(g, gates, g.zeros(3), prev);
  for (int j = 0; j < 4; ++j) {
    CHECK(g.value(out.h)[j] == 0.0);
    CHECK(g.value(out.c)[j] == 0.0);
  }
  // c_prev of ones with zero weights: forget gate 0.5 halves the cell.
  Tensor ones(4, 1);
  ones.fill(1.0);
  Graph g2;
  LstmState prev2{g2.zeros(4), g2.input(ones)};
  LstmState out2 = lstm_step(g2, gates, g2.zeros(3), prev2);
  const double expect_h = 0.5 * std::tanh(0.5);
  for (int j = 0; j < 4; ++j) {
    CHECK(g2.value(out2.c)[j] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g2.value(out2.h)[j] == doctest::Approx(expect_h).epsilon(1e-12));
  }
}

TEST_CASE("lstm_step gradients on all 12 parameter tensors") {
  ParamStore store;
  std::mt19937 rng(4);
  LstmGates gates = make_lstm_gates(store, "seq.fwd", 7, 5, kSeqGroup, 0.1, rng);
  Parameter* x = store.add("x", 7, 1, kEmbedGroup, false);
  Parameter* h0 = store.add("h0", 5, 1, kEmbedGroup, false);
  Parameter* c0 = store.add("c0", 5, 1, kEmbedGroup, false);
  for (Parameter* p : {x, h0, c0}) init_uniform(p->value, -1, 1, rng);
  Tensor ch(5, 1), cc(5, 1);
  init_uniform(ch, -1, 1, rng);
  init_uniform(cc, -1, 1, rng);
  auto forward = [&](Graph& g) {
    LstmState prev{g.param(*h0), g.param(*c0)};
    LstmState s = lstm_step(g, gates, g.param(*x), prev);
    return g.add(g.sum(g.cmult(s.h, g.input(ch))), g.sum(g.cmult(s.c, g.input(cc))));
  };
  Graph g;
  g.backward(forward(g));
  auto report = fd_compare(store, [&] {
    Graph h;
    return h.value(forward(h))[0];
  });
  CHECK(report.max_rel <= 1e-6);
  long expected = 4 * (5 * 7) + 4 * (5 * 5) + 4 * 5 + 7 + 5 + 5;
  CHECK(report.checked == expected);
}

TEST_CASE("sequence layer shapes: single token and paper dims") {
  Vocabulary vocab = toy_vocab();
  ModelConfig cfg;  // paper dims by default
  cfg.dropout = 0.0;
  std::mt19937 rng(5);
  Model model(cfg, vocab, rng);
  Sentence sent;
  Token t;
  t.index = 1;
  t.form = "Alice";
  t.pos = "NNP";
  t.head = 0;
  t.deprel = "root";
  sent.tokens.push_back(t);
  Graph g;
  std::vector<int> svecs = model.run_sequence(g, sent);
  REQUIRE(svecs.size() == 1);
  CHECK(g.value(svecs[0]).rows == 200);  // 2 x 100
}

TEST_CASE("reversing the sentence mirrors s_t with tied directions") {
  Vocabulary vocab = toy_vocab();
  ModelConfig cfg;
  cfg.word_dim = 10;
  cfg.pos_dim = 4;
  cfg.dep_dim = 4;
  cfg.label_dim = 4;
  cfg.seq_hidden = 6;
  cfg.dropout = 0.0;
  std::mt19937 rng(6);
  Model model(cfg, vocab, rng);
  // Tie the two directions.
  auto tie = [&](Parameter* a, Parameter* b) { b->value = a->value; };
  LstmGates& f = model.seq().fwd;
  LstmGates& b = model.seq().bwd;
  tie(f.Wi, b.Wi); tie(f.Wf, b.Wf); tie(f.Wo, b.Wo); tie(f.Wu, b.Wu);
  tie(f.Ui, b.Ui); tie(f.Uf, b.Uf); tie(f.Uo, b.Uo); tie(f.Uu, b.Uu);
  tie(f.bi, b.bi); tie(f.bf, b.bf); tie(f.bo, b.bo); tie(f.bu, b.bu);

  SyntheticOptions so;
  so.n = 1;
  so.seed = 21;
  Sentence sent = gen_synthetic(so)[0];
  Sentence reversed;
  for (int i = sent.size() - 1; i >= 0; --i) {
    Token t = sent.tokens[static_cast<size_t>(i)];
    t.index = sent.size() - i;
    t.head = 0;  // heads are irrelevant to the sequence layer
    reversed.tokens.push_back(t);
  }
  Graph g1, g2;
  std::vector<int> s_fwd = model.run_sequence(g1, sent);
  std::vector<int> s_rev = model.run_sequence(g2, reversed);
  const int n = sent.size();
  const int h = cfg.seq_hidden;
  for (int t = 0; t < n; ++t) {
    const Tensor& a = g1.value(s_fwd[static_cast<size_t>(t)]);
    const Tensor& b2 = g2.value(s_rev[static_cast<size_t>(n - 1 - t)]);
    for (int j = 0; j < h; ++j) {
      CHECK(a[j] == doctest::Approx(b2[h + j]).epsilon(1e-12));
      CHECK(a[h + j] == doctest::Approx(b2[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("every token influences every s_t (bidirectionality)") {
  Vocabulary vocab = toy_vocab();
  ModelConfig cfg;
  cfg.word_dim = 8;
  cfg.pos_dim = 3;
  cfg.dep_dim = 3;
  cfg.label_dim = 3;
  cfg.seq_hidden = 5;
  cfg.dropout = 0.0;
  std::mt19937 rng(7);
  Model model(cfg, vocab, rng);
  SyntheticOptions so;
  so.n = 1;
  so.seed = 33;
  Sentence sent = gen_synthetic(so)[0];
  REQUIRE(sent.size() >= 3);
  // Gradient of each single s_t w.r.t. every token's word row is nonzero.
  for (int t = 0; t < sent.size(); ++t) {
    model.store().zero_grads();
    Graph g;
    std::vector<int> svecs = model.run_sequence(g, sent);
    g.backward(g.sum(svecs[static_cast<size_t>(t)]));
    for (const Token& tok : sent.tokens) {
      int row = model.vocab().words.get(tok.form);
      double sum = 0.0;
      for (int c = 0; c < model.tables().word->cols(); ++c) {
        sum += std::fabs(model.tables().word->grad.at(row, c));
      }
      CHECK(sum > 0.0);
    }
  }
}

TEST_CASE("lstm hidden states stay inside (-1, 1)") {
  ParamStore store;
  std::mt19937 rng(8);
  LstmGates gates = make_lstm_gates(store, "seq.fwd", 6, 5, kSeqGroup, 0.0, rng);
  for (const auto& p : store.all()) init_uniform(p->value, -3.0, 3.0, rng);
  for (int trial = 0; trial < 50; ++trial) {
    Tensor x(6, 1), h0(5, 1), c0(5, 1);
    init_uniform(x, -5, 5, rng);
    init_uniform(h0, -1, 1, rng);
    init_uniform(c0, -8, 8, rng);
    Graph g;
    LstmState prev{g.input(h0), g.input(c0)};
    LstmState out = lstm_step(g, gates, g.input(x), prev);
    for (int j = 0; j < 5; ++j) {
      CHECK(std::fabs(g.value(out.h)[j]) < 1.0);
    }
  }
}
