#include "relex/entity.h"

#include <stdexcept>

namespace relex {

EntityHeadParams make_entity_head(ParamStore& store, int input_dim, int hidden,
                                  int n_tags, std::mt19937& rng) {
  EntityHeadParams p;
  p.hidden = hidden;
  p.Wh = store.add("ent.Wh", hidden, input_dim, kEntityGroup, true);
  p.bh = store.add("ent.bh", hidden, 1, kEntityGroup, false);
  p.Wy = store.add("ent.Wy", n_tags, hidden, kEntityGroup, true);
  p.by = store.add("ent.by", n_tags, 1, kEntityGroup, false);
  init_xavier(p.Wh->value, rng);
  init_xavier(p.Wy->value, rng);
  return p;
}

EntityScores entity_scores(Graph& g, const EntityHeadParams& p, int s_t,
                           int prev_label_emb, double dropout_p) {
  EntityScores out;
  int in = g.concat({s_t, prev_label_emb});
  out.hidden = g.tanh(g.affine(g.param(*p.Wh), in, g.param(*p.bh)));
  int dropped = g.dropout(out.hidden, dropout_p);
  out.logits = g.affine(g.param(*p.Wy), dropped, g.param(*p.by));
  return out;
}

int masked_argmax(const Tensor& logits, const std::vector<bool>& legal) {
  int best = -1;
  for (int j = 0; j < logits.size(); ++j) {
    if (!legal[static_cast<size_t>(j)]) continue;
    if (best < 0 || logits[j] > logits[best]) best = j;
  }
  if (best < 0) throw std::logic_error("masked_argmax: no legal tag");
  return best;
}

std::vector<TagDecision> decode_entities(Graph& g, const EntityHeadParams& head,
                                         const EmbedTables& tables,
                                         const std::vector<int>& svecs,
                                         const TagAlphabet& alphabet,
                                         const EntityDecodeOptions& opts,
                                         std::mt19937* rng) {
  const int n = static_cast<int>(svecs.size());
  if (opts.training && (!opts.gold || static_cast<int>(opts.gold->size()) != n)) {
    throw std::invalid_argument("decode_entities: training needs gold tags");
  }
  if (opts.training && !rng) {
    throw std::invalid_argument("decode_entities: training needs an rng");
  }
  std::vector<TagDecision> out(static_cast<size_t>(n));
  std::vector<bool> all_legal(static_cast<size_t>(alphabet.size()), true);
  int prev_fed = alphabet.o_id();  // virtual sentence-start label
  for (int t = 0; t < n; ++t) {
    TagDecision& d = out[static_cast<size_t>(t)];
    int v_prev = g.lookup(*tables.label, prev_fed);
    EntityScores scores =
        entity_scores(g, head, svecs[static_cast<size_t>(t)], v_prev, opts.dropout);
    d.logits = scores.logits;
    const bool last = (t == n - 1);
    std::vector<bool> legal = legal_next_tags(prev_fed, alphabet, last);
    d.chosen = masked_argmax(g.value(scores.logits), opts.constrained ? legal : all_legal);
    if (opts.training) {
      const int gold = (*opts.gold)[static_cast<size_t>(t)];
      d.loss = g.pick_neg_log_softmax(scores.logits, gold);
      bool flip = std::bernoulli_distribution(opts.epsilon)(*rng);
      d.fed = (flip && legal[static_cast<size_t>(gold)]) ? gold : d.chosen;
    } else {
      d.fed = d.chosen;
    }
    prev_fed = d.fed;
  }
  return out;
}

}  // namespace relex
