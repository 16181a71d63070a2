#include "relex/encoder.h"

#include <stdexcept>

#include "relex/corpus.h"

namespace relex {

EmbedTables make_embed_tables(ParamStore& store, const Vocabulary& vocab, int word_dim,
                              int pos_dim, int dep_dim, int label_dim, std::mt19937& rng) {
  EmbedTables t;
  t.word = store.add("emb.word", vocab.words.size(), word_dim, kEmbedGroup, false);
  t.pos = store.add("emb.pos", vocab.pos.size(), pos_dim, kEmbedGroup, false);
  t.dep = store.add("emb.dep", vocab.deps.size(), dep_dim, kEmbedGroup, false);
  t.label = store.add("emb.label", vocab.tags.size(), label_dim, kEmbedGroup, false);
  for (Parameter* p : {t.word, t.pos, t.dep, t.label}) {
    init_uniform(p->value, -0.1, 0.1, rng);
  }
  return t;
}

LstmGates make_lstm_gates(ParamStore& store, const std::string& prefix, int input_dim,
                          int hidden, unsigned group, double forget_bias,
                          std::mt19937& rng) {
  LstmGates g;
  g.Wi = store.add(prefix + ".Wi", hidden, input_dim, group, true);
  g.Wf = store.add(prefix + ".Wf", hidden, input_dim, group, true);
  g.Wo = store.add(prefix + ".Wo", hidden, input_dim, group, true);
  g.Wu = store.add(prefix + ".Wu", hidden, input_dim, group, true);
  g.Ui = store.add(prefix + ".Ui", hidden, hidden, group, true);
  g.Uf = store.add(prefix + ".Uf", hidden, hidden, group, true);
  g.Uo = store.add(prefix + ".Uo", hidden, hidden, group, true);
  g.Uu = store.add(prefix + ".Uu", hidden, hidden, group, true);
  g.bi = store.add(prefix + ".bi", hidden, 1, group, false);
  g.bf = store.add(prefix + ".bf", hidden, 1, group, false);
  g.bo = store.add(prefix + ".bo", hidden, 1, group, false);
  g.bu = store.add(prefix + ".bu", hidden, 1, group, false);
  for (Parameter* p : {g.Wi, g.Wf, g.Wo, g.Wu, g.Ui, g.Uf, g.Uo, g.Uu}) {
    init_xavier(p->value, rng);
  }
  g.bf->value.fill(forget_bias);
  return g;
}

SeqLstmParams make_seq_lstm(ParamStore& store, int input_dim, int hidden,
                            double forget_bias, std::mt19937& rng) {
  SeqLstmParams p;
  p.input_dim = input_dim;
  p.hidden = hidden;
  p.fwd = make_lstm_gates(store, "seq.fwd", input_dim, hidden, kSeqGroup, forget_bias, rng);
  p.bwd = make_lstm_gates(store, "seq.bwd", input_dim, hidden, kSeqGroup, forget_bias, rng);
  return p;
}

int embed_token(Graph& g, const EmbedTables& tables, int word_id, int pos_id,
                double dropout_p) {
  int x = g.concat({g.lookup(*tables.word, word_id), g.lookup(*tables.pos, pos_id)});
  return g.dropout(x, dropout_p);
}

LstmState lstm_step(Graph& g, const LstmGates& p, int x, const LstmState& prev) {
  int i_pre = g.affine(g.param(*p.Wi), x, g.param(*p.bi));
  int f_pre = g.affine(g.param(*p.Wf), x, g.param(*p.bf));
  int o_pre = g.affine(g.param(*p.Wo), x, g.param(*p.bo));
  int u_pre = g.affine(g.param(*p.Wu), x, g.param(*p.bu));
  if (prev.h >= 0) {
    i_pre = g.add(i_pre, g.matvec(g.param(*p.Ui), prev.h));
    f_pre = g.add(f_pre, g.matvec(g.param(*p.Uf), prev.h));
    o_pre = g.add(o_pre, g.matvec(g.param(*p.Uo), prev.h));
    u_pre = g.add(u_pre, g.matvec(g.param(*p.Uu), prev.h));
  }
  int i = g.sigmoid(i_pre);
  int f = g.sigmoid(f_pre);
  int o = g.sigmoid(o_pre);
  int u = g.tanh(u_pre);
  LstmState out;
  int iu = g.cmult(i, u);
  out.c = (prev.c >= 0) ? g.add(iu, g.cmult(f, prev.c)) : iu;
  out.h = g.cmult(o, g.tanh(out.c));
  return out;
}

std::vector<int> sequence_layer(Graph& g, const SeqLstmParams& p,
                                const std::vector<int>& inputs) {
  const int n = static_cast<int>(inputs.size());
  if (n == 0) throw std::invalid_argument("sequence_layer: empty sentence");
  std::vector<int> fwd_h(static_cast<size_t>(n)), bwd_h(static_cast<size_t>(n));
  LstmState state;
  for (int t = 0; t < n; ++t) {
    state = lstm_step(g, p.fwd, inputs[static_cast<size_t>(t)], state);
    fwd_h[static_cast<size_t>(t)] = state.h;
  }
  state = LstmState{};
  for (int t = n - 1; t >= 0; --t) {
    state = lstm_step(g, p.bwd, inputs[static_cast<size_t>(t)], state);
    bwd_h[static_cast<size_t>(t)] = state.h;
  }
  std::vector<int> s(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) {
    s[static_cast<size_t>(t)] = g.concat({fwd_h[static_cast<size_t>(t)], bwd_h[static_cast<size_t>(t)]});
  }
  return s;
}

}  // namespace relex
