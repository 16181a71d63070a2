#include "relex/model.h"

#include <map>
#include <set>
#include <tuple>

namespace relex {

Model::Model(const ModelConfig& cfg, Vocabulary vocab, std::mt19937& rng)
    : cfg_(cfg), vocab_(std::move(vocab)) {
  tables_ = make_embed_tables(store_, vocab_, cfg_.word_dim, cfg_.pos_dim, cfg_.dep_dim,
                              cfg_.label_dim, rng);
  seq_ = make_seq_lstm(store_, cfg_.seq_input_dim(), cfg_.seq_hidden, cfg_.forget_bias, rng);
  entity_ = make_entity_head(store_, cfg_.entity_input_dim(), cfg_.ent_hidden,
                             vocab_.tags.size(), rng);
  tree_ = make_tree_lstm(store_, cfg_.tree_input_dim(), cfg_.tree_hidden, cfg_.forget_bias,
                         rng);
  relation_ = make_relation_head(store_, cfg_.relation_input_dim(), cfg_.rel_hidden,
                                 vocab_.rels.size(), rng);
}

std::vector<int> Model::run_sequence(Graph& g, const Sentence& sent) {
  std::vector<int> xs;
  xs.reserve(sent.tokens.size());
  for (const Token& t : sent.tokens) {
    xs.push_back(embed_token(g, tables_, vocab_.words.get(t.form), vocab_.pos.get(t.pos),
                             cfg_.dropout));
  }
  return sequence_layer(g, seq_, xs);
}

std::vector<int> Model::gold_tag_ids(const Sentence& sent) const {
  return encode_bilou(sent.entities, sent.size(), vocab_.tags);
}

namespace {

struct PairStates {
  TreeStates up, down;
};

// Dependency-layer scoring shared by training and prediction. Tree states are
// computed once per unordered pair (both candidate orders read the same
// structure); dependency inputs are cached per (token, structure-root) use.
void candidate_logits(Model& m, Graph& g, const Sentence& sent,
                      const std::vector<RelationCandidate>& cands,
                      const std::vector<int>& svecs, const std::vector<int>& fed,
                      std::vector<int>& out) {
  const int n = sent.size();
  std::vector<int> x_normal(static_cast<size_t>(n) + 1, -1);
  std::vector<int> x_root(static_cast<size_t>(n) + 1, -1);
  auto dep_x = [&](int tok, bool is_root) {
    int& slot = is_root ? x_root[static_cast<size_t>(tok)] : x_normal[static_cast<size_t>(tok)];
    if (slot >= 0) return slot;
    int dep_id = is_root ? Vocabulary::kRootDep
                         : m.vocab().deps.get(sent.tokens[static_cast<size_t>(tok) - 1].deprel);
    int label_id = m.config().semeval ? -1 : fed[static_cast<size_t>(tok) - 1];
    slot = dependency_input(g, svecs[static_cast<size_t>(tok) - 1], *m.tables().dep, dep_id,
                            *m.tables().label, label_id);
    return slot;
  };
  std::map<const PathStructure*, PairStates> cache;
  for (const RelationCandidate& cand : cands) {
    const PathStructure* s = cand.structure.get();
    auto it = cache.find(s);
    if (it == cache.end()) {
      std::vector<int> inputs(static_cast<size_t>(n) + 1, -1);
      for (int node : s->nodes) inputs[static_cast<size_t>(node)] = dep_x(node, node == s->root);
      PairStates ps;
      ps.up = tree_bottom_up(g, m.tree().up, *s, inputs);
      ps.down = tree_top_down(g, m.tree().down, *s, inputs);
      it = cache.emplace(s, std::move(ps)).first;
    }
    int d = relation_vector(g, cand, it->second.up, it->second.down, svecs,
                            m.config().pair_feature);
    out.push_back(classify_relation(g, m.relation_head(), d, m.config().dropout));
  }
}

}  // namespace

LossResult Model::build_loss(Graph& g, const Sentence& sent, const LossOptions& opts,
                             std::mt19937* rng) {
  LossResult out;
  std::vector<int> svecs = run_sequence(g, sent);
  std::vector<int> fed;
  std::vector<int> ent_losses;
  if (cfg_.semeval) {
    // entity detection omitted
  } else if (opts.fixed_tags) {
    fed = *opts.fixed_tags;
  } else {
    std::vector<int> gold = gold_tag_ids(sent);
    EntityDecodeOptions d;
    d.training = true;
    d.epsilon = opts.epsilon;
    d.gold = &gold;
    d.constrained = cfg_.constrained;
    d.dropout = cfg_.dropout;
    std::vector<TagDecision> decisions =
        decode_entities(g, entity_, tables_, svecs, vocab_.tags, d, rng);
    fed.reserve(decisions.size());
    for (const TagDecision& dec : decisions) {
      fed.push_back(dec.fed);
      if (opts.entity_loss) ent_losses.push_back(dec.loss);
    }
  }

  std::vector<int> rel_losses;
  if (opts.relation_loss) {
    DepTree tree = validate_tree(sent);
    std::vector<RelationCandidate> cands;
    if (cfg_.semeval) {
      cands = build_given_pair_candidates(tree, cfg_.structure, cfg_.candidates, sent,
                                          vocab_.rels, vocab_.negative_relation);
    } else {
      std::vector<EntitySpan> detected = decode_bilou(fed, vocab_.tags);
      cands = build_candidates(detected, tree, cfg_.structure, cfg_.candidates, sent,
                               vocab_.rels, vocab_.negative_relation);
    }
    out.n_candidates = static_cast<int>(cands.size());
    if (!cands.empty()) {
      std::vector<int> logits;
      candidate_logits(*this, g, sent, cands, svecs, fed, logits);
      for (size_t i = 0; i < cands.size(); ++i) {
        rel_losses.push_back(g.pick_neg_log_softmax(logits[i], cands[i].gold_label));
      }
    }
  }

  std::vector<int> parts;
  if (!ent_losses.empty()) parts.push_back(g.scale(g.add(ent_losses), opts.w_ent));
  if (!rel_losses.empty()) parts.push_back(g.scale(g.add(rel_losses), opts.w_rel));
  if (parts.empty()) return out;
  out.loss = parts.size() == 1 ? parts[0] : g.add(parts);
  out.value = g.value(out.loss)[0];
  return out;
}

SentencePrediction Model::predict(const Sentence& sent, const std::vector<int>* fixed_tags) {
  Graph g(false);
  SentencePrediction out;
  std::vector<int> svecs = run_sequence(g, sent);
  std::vector<int> fed;
  if (cfg_.semeval) {
    out.tags.assign(static_cast<size_t>(sent.size()), vocab_.tags.o_id());
  } else if (fixed_tags) {
    fed = *fixed_tags;
    out.tags = fed;
    out.entities = decode_bilou(out.tags, vocab_.tags);
  } else {
    EntityDecodeOptions d;
    d.constrained = cfg_.constrained;
    std::vector<TagDecision> decisions =
        decode_entities(g, entity_, tables_, svecs, vocab_.tags, d, nullptr);
    for (const TagDecision& dec : decisions) {
      out.tags.push_back(dec.chosen);
      fed.push_back(dec.fed);
    }
    out.entities = decode_bilou(out.tags, vocab_.tags);
  }

  DepTree tree = validate_tree(sent);
  std::vector<RelationCandidate> cands;
  if (cfg_.semeval) {
    cands = build_given_pair_candidates(tree, cfg_.structure, cfg_.candidates, sent,
                                        vocab_.rels, vocab_.negative_relation);
  } else {
    cands = build_candidates(out.entities, tree, cfg_.structure, cfg_.candidates, sent,
                             vocab_.rels, vocab_.negative_relation);
  }
  if (cands.empty() || vocab_.rels.n_types() == 0) return out;

  std::vector<int> logits;
  candidate_logits(*this, g, sent, cands, svecs, fed, logits);
  std::vector<DirPrediction> preds(cands.size());
  for (size_t i = 0; i < cands.size(); ++i) {
    Tensor p = softmax(g.value(logits[i]));
    int label = argmax(p);
    preds[i] = {label, p[label]};
  }

  std::set<std::tuple<int, int, std::string>> seen;
  auto add_relation = [&](const std::optional<PredictedRelation>& r) {
    if (!r) return;
    if (seen.insert(std::make_tuple(r->arg1_last, r->arg2_last, r->type)).second) {
      out.relations.push_back(*r);
    }
  };
  if (cfg_.candidates == CandidateMode::kLeftToRight) {
    for (size_t i = 0; i < cands.size(); ++i) {
      if (!vocab_.rels.is_negative(preds[i].label)) {
        add_relation(directed_relation(cands[i], preds[i].label, vocab_.rels));
      }
    }
  } else {
    for (size_t i = 0; i + 1 < cands.size(); i += 2) {
      add_relation(resolve_directions(cands[i], preds[i], cands[i + 1], preds[i + 1],
                                      vocab_.rels));
    }
  }
  return out;
}

void Model::save(std::ostream& os) const { save_params(os, {{"", &store_}}); }

void Model::load(std::istream& is) { load_params(is, {{"", &store_}}); }

}  // namespace relex
