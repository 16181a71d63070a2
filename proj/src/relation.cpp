#include "relex/relation.h"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace relex {

namespace {

const char* kTypeTag[2] = {"on", "off"};

}  // namespace

TreeLstmParams make_tree_lstm(ParamStore& store, int input_dim, int hidden,
                              double forget_bias, std::mt19937& rng) {
  TreeLstmParams p;
  p.input_dim = input_dim;
  p.hidden = hidden;
  auto make_dir = [&](const std::string& prefix) {
    TreeDirParams d;
    d.Wi = store.add(prefix + ".Wi", hidden, input_dim, kTreeGroup, true);
    d.Wf = store.add(prefix + ".Wf", hidden, input_dim, kTreeGroup, true);
    d.Wo = store.add(prefix + ".Wo", hidden, input_dim, kTreeGroup, true);
    d.Wu = store.add(prefix + ".Wu", hidden, input_dim, kTreeGroup, true);
    for (int m = 0; m < 2; ++m) {
      d.Ui[m] = store.add(prefix + ".Ui." + kTypeTag[m], hidden, hidden, kTreeGroup, true);
      d.Uo[m] = store.add(prefix + ".Uo." + kTypeTag[m], hidden, hidden, kTreeGroup, true);
      d.Uu[m] = store.add(prefix + ".Uu." + kTypeTag[m], hidden, hidden, kTreeGroup, true);
      for (int l = 0; l < 2; ++l) {
        d.Uf[m][l] = store.add(prefix + ".Uf." + kTypeTag[m] + "_" + kTypeTag[l], hidden,
                               hidden, kTreeGroup, true);
      }
    }
    d.bi = store.add(prefix + ".bi", hidden, 1, kTreeGroup, false);
    d.bf = store.add(prefix + ".bf", hidden, 1, kTreeGroup, false);
    d.bo = store.add(prefix + ".bo", hidden, 1, kTreeGroup, false);
    d.bu = store.add(prefix + ".bu", hidden, 1, kTreeGroup, false);
    for (Parameter* w : {d.Wi, d.Wf, d.Wo, d.Wu}) init_xavier(w->value, rng);
    for (int m = 0; m < 2; ++m) {
      init_xavier(d.Ui[m]->value, rng);
      init_xavier(d.Uo[m]->value, rng);
      init_xavier(d.Uu[m]->value, rng);
      for (int l = 0; l < 2; ++l) init_xavier(d.Uf[m][l]->value, rng);
    }
    d.bf->value.fill(forget_bias);
    return d;
  };
  p.up = make_dir("tree.up");
  p.down = make_dir("tree.down");
  return p;
}

int dependency_input(Graph& g, int s_t, Parameter& dep_table, int dep_id,
                     Parameter& label_table, int label_id) {
  std::vector<int> parts = {s_t, g.lookup(dep_table, dep_id)};
  if (label_id >= 0) parts.push_back(g.lookup(label_table, label_id));
  return g.concat(parts);
}

namespace {

// Shared cell body for one tree node given its already-computed predecessor
// states (children bottom-up, the parent top-down). f gates are built per
// receiving type; each predecessor contributes through the matrices of its
// own type.
void tree_node(Graph& g, const TreeDirParams& p, int x,
               const std::vector<std::pair<int, NodeType>>& preds,  // (token, type)
               const TreeStates& states, int node, TreeStates& out) {
  int i_pre = g.affine(g.param(*p.Wi), x, g.param(*p.bi));
  int o_pre = g.affine(g.param(*p.Wo), x, g.param(*p.bo));
  int u_pre = g.affine(g.param(*p.Wu), x, g.param(*p.bu));
  int f_base = g.affine(g.param(*p.Wf), x, g.param(*p.bf));

  std::vector<int> i_terms = {i_pre}, o_terms = {o_pre}, u_terms = {u_pre};
  bool recv_type_present[2] = {false, false};
  for (const auto& [tok, type] : preds) {
    int h = states.h[static_cast<size_t>(tok)];
    i_terms.push_back(g.matvec(g.param(*p.Ui[type]), h));
    o_terms.push_back(g.matvec(g.param(*p.Uo[type]), h));
    u_terms.push_back(g.matvec(g.param(*p.Uu[type]), h));
    recv_type_present[type] = true;
  }
  int i = g.sigmoid(i_terms.size() == 1 ? i_pre : g.add(i_terms));
  int o = g.sigmoid(o_terms.size() == 1 ? o_pre : g.add(o_terms));
  int u = g.tanh(u_terms.size() == 1 ? u_pre : g.add(u_terms));

  // One forget pre-activation per receiving type present among predecessors:
  // f_{tk} = sigma(Wf x + sum_l Uf[m(k)][m(l)] h_l + bf).
  int f_gate[2] = {-1, -1};
  for (int recv = 0; recv < 2; ++recv) {
    if (!recv_type_present[recv]) continue;
    std::vector<int> f_terms = {f_base};
    for (const auto& [tok, type] : preds) {
      f_terms.push_back(g.matvec(g.param(*p.Uf[recv][type]), states.h[static_cast<size_t>(tok)]));
    }
    f_gate[recv] = g.sigmoid(g.add(f_terms));
  }

  std::vector<int> c_terms = {g.cmult(i, u)};
  for (const auto& [tok, type] : preds) {
    c_terms.push_back(g.cmult(f_gate[type], states.c[static_cast<size_t>(tok)]));
  }
  out.c[static_cast<size_t>(node)] = c_terms.size() == 1 ? c_terms[0] : g.add(c_terms);
  out.h[static_cast<size_t>(node)] =
      g.cmult(o, g.tanh(out.c[static_cast<size_t>(node)]));
}

std::vector<int> structure_postorder(const PathStructure& s) {
  // Children before parents; a node's children are visited in ascending
  // token order so summation order is canonical.
  std::vector<int> order;
  order.reserve(s.nodes.size());
  std::vector<std::pair<int, bool>> stack = {{s.root, false}};
  while (!stack.empty()) {
    auto [node, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      order.push_back(node);
      continue;
    }
    stack.emplace_back(node, true);
    const auto& kids = s.children[static_cast<size_t>(node)];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, false);
  }
  return order;
}

}  // namespace

TreeStates tree_bottom_up(Graph& g, const TreeDirParams& p, const PathStructure& s,
                          const std::vector<int>& inputs) {
  TreeStates out;
  out.h.assign(s.parent.size(), -1);
  out.c.assign(s.parent.size(), -1);
  for (int node : structure_postorder(s)) {
    std::vector<int> kids = s.children[static_cast<size_t>(node)];
    std::sort(kids.begin(), kids.end());
    std::vector<std::pair<int, NodeType>> preds;
    preds.reserve(kids.size());
    for (int k : kids) preds.emplace_back(k, s.node_type[static_cast<size_t>(k)]);
    tree_node(g, p, inputs[static_cast<size_t>(node)], preds, out, node, out);
  }
  return out;
}

TreeStates tree_top_down(Graph& g, const TreeDirParams& p, const PathStructure& s,
                         const std::vector<int>& inputs) {
  TreeStates out;
  out.h.assign(s.parent.size(), -1);
  out.c.assign(s.parent.size(), -1);
  std::vector<int> order = structure_postorder(s);
  std::reverse(order.begin(), order.end());  // parents before children
  for (int node : order) {
    std::vector<std::pair<int, NodeType>> preds;
    int parent = s.parent[static_cast<size_t>(node)];
    if (node != s.root && parent != 0) {
      preds.emplace_back(parent, s.node_type[static_cast<size_t>(parent)]);
    }
    tree_node(g, p, inputs[static_cast<size_t>(node)], preds, out, node, out);
  }
  return out;
}

CandidateMode parse_candidate_mode(const std::string& name) {
  if (name == "both") return CandidateMode::kBoth;
  if (name == "l2r") return CandidateMode::kLeftToRight;
  if (name == "neg_sample") return CandidateMode::kNegSampling;
  throw std::invalid_argument("unknown candidate mode: " + name +
                              " (expected both, l2r, or neg_sample)");
}

std::string candidate_mode_name(CandidateMode mode) {
  switch (mode) {
    case CandidateMode::kBoth: return "both";
    case CandidateMode::kLeftToRight: return "l2r";
    case CandidateMode::kNegSampling: return "neg_sample";
  }
  return "?";
}

namespace {

// Gold label for an ordered candidate: the typed directed label when a gold
// relation connects the two argument tokens and both detected spans match
// the gold spans exactly; negative otherwise.
int candidate_gold_label(const RelationCandidate& cand, const Sentence& gold,
                         const RelAlphabet& rels, const std::string& negative_relation,
                         bool spans_must_match) {
  for (const RelationInstance& r : gold.relations) {
    bool fwd = (r.arg1_last == cand.first && r.arg2_last == cand.second);
    bool rev = (r.arg1_last == cand.second && r.arg2_last == cand.first);
    if (!fwd && !rev) continue;
    if (r.type == negative_relation) return rels.negative_id();
    int type = rels.type_index(r.type);
    if (type < 0) return rels.negative_id();
    if (spans_must_match) {
      auto gold_span_ending = [&](int end) -> const EntitySpan* {
        for (const EntitySpan& s : gold.entities) {
          if (s.end == end) return &s;
        }
        return nullptr;
      };
      const EntitySpan* g1 = gold_span_ending(cand.first);
      const EntitySpan* g2 = gold_span_ending(cand.second);
      if (!g1 || !g2 || !(*g1 == cand.first_span) || !(*g2 == cand.second_span)) {
        return rels.negative_id();
      }
    }
    return fwd ? rels.fwd_id(type) : rels.rev_id(type);
  }
  return rels.negative_id();
}

}  // namespace

std::vector<RelationCandidate> build_candidates(const std::vector<EntitySpan>& detected,
                                                const DepTree& tree, StructureKind kind,
                                                CandidateMode mode, const Sentence& gold,
                                                const RelAlphabet& rels,
                                                const std::string& negative_relation) {
  std::vector<RelationCandidate> out;
  if (detected.size() < 2) return out;
  std::vector<EntitySpan> ends = detected;
  std::sort(ends.begin(), ends.end(),
            [](const EntitySpan& a, const EntitySpan& b) { return a.end < b.end; });
  const int k = static_cast<int>(ends.size());
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      std::shared_ptr<PathStructure> structure = std::make_shared<PathStructure>(
          extract_structure(tree, ends[static_cast<size_t>(a)].end,
                            ends[static_cast<size_t>(b)].end, kind));
      auto emit = [&](const EntitySpan& first, const EntitySpan& second, bool force_neg) {
        RelationCandidate c;
        c.first = first.end;
        c.second = second.end;
        c.first_span = first;
        c.second_span = second;
        c.structure = structure;
        c.gold_label = force_neg ? rels.negative_id()
                                 : candidate_gold_label(c, gold, rels, negative_relation,
                                                        /*spans_must_match=*/true);
        out.push_back(std::move(c));
      };
      emit(ends[static_cast<size_t>(a)], ends[static_cast<size_t>(b)], false);
      if (mode == CandidateMode::kBoth) {
        emit(ends[static_cast<size_t>(b)], ends[static_cast<size_t>(a)], false);
      } else if (mode == CandidateMode::kNegSampling) {
        emit(ends[static_cast<size_t>(b)], ends[static_cast<size_t>(a)], true);
      }
    }
  }
  return out;
}

std::vector<RelationCandidate> build_given_pair_candidates(
    const DepTree& tree, StructureKind kind, CandidateMode mode, const Sentence& gold,
    const RelAlphabet& rels, const std::string& negative_relation) {
  std::vector<RelationCandidate> out;
  for (const RelationInstance& r : gold.relations) {
    int lo = std::min(r.arg1_last, r.arg2_last);
    int hi = std::max(r.arg1_last, r.arg2_last);
    auto structure =
        std::make_shared<PathStructure>(extract_structure(tree, lo, hi, kind));
    auto emit = [&](int first, int second, bool force_neg) {
      RelationCandidate c;
      c.first = first;
      c.second = second;
      c.first_span = EntitySpan{"", first, first};
      c.second_span = EntitySpan{"", second, second};
      c.structure = structure;
      c.gold_label = force_neg ? rels.negative_id()
                               : candidate_gold_label(c, gold, rels, negative_relation,
                                                      /*spans_must_match=*/false);
      out.push_back(std::move(c));
    };
    emit(lo, hi, false);
    if (mode == CandidateMode::kBoth) {
      emit(hi, lo, false);
    } else if (mode == CandidateMode::kNegSampling) {
      emit(hi, lo, true);
    }
  }
  return out;
}

RelationHeadParams make_relation_head(ParamStore& store, int input_dim, int hidden,
                                      int n_labels, std::mt19937& rng) {
  RelationHeadParams p;
  p.hidden = hidden;
  p.Wh = store.add("rel.Wh", hidden, input_dim, kRelationGroup, true);
  p.bh = store.add("rel.bh", hidden, 1, kRelationGroup, false);
  p.Wy = store.add("rel.Wy", n_labels, hidden, kRelationGroup, true);
  p.by = store.add("rel.by", n_labels, 1, kRelationGroup, false);
  init_xavier(p.Wh->value, rng);
  init_xavier(p.Wy->value, rng);
  return p;
}

namespace {

int span_mean(Graph& g, const EntitySpan& span, const std::vector<int>& svecs) {
  std::vector<int> parts;
  for (int t = span.start; t <= span.end; ++t) {
    parts.push_back(svecs[static_cast<size_t>(t) - 1]);
  }
  if (parts.size() == 1) return parts[0];
  return g.scale(g.add(parts), 1.0 / static_cast<double>(parts.size()));
}

}  // namespace

int relation_vector(Graph& g, const RelationCandidate& cand, const TreeStates& up,
                    const TreeStates& down, const std::vector<int>& svecs, bool pair_on) {
  const PathStructure& s = *cand.structure;
  std::vector<int> parts = {up.h[static_cast<size_t>(s.anchor)],
                            down.h[static_cast<size_t>(cand.first)],
                            down.h[static_cast<size_t>(cand.second)]};
  if (pair_on) {
    parts.push_back(span_mean(g, cand.first_span, svecs));
    parts.push_back(span_mean(g, cand.second_span, svecs));
  }
  return g.concat(parts);
}

int classify_relation(Graph& g, const RelationHeadParams& p, int d, double dropout_p) {
  int hidden = g.tanh(g.affine(g.param(*p.Wh), d, g.param(*p.bh)));
  int dropped = g.dropout(hidden, dropout_p);
  return g.affine(g.param(*p.Wy), dropped, g.param(*p.by));
}

PredictedRelation directed_relation(const RelationCandidate& cand, int label,
                                    const RelAlphabet& rels) {
  PredictedRelation out;
  out.type = rels.type_name(label);
  if (!rels.is_rev(label)) {
    out.arg1_last = cand.first;
    out.arg2_last = cand.second;
    out.arg1_span = cand.first_span;
    out.arg2_span = cand.second_span;
  } else {
    out.arg1_last = cand.second;
    out.arg2_last = cand.first;
    out.arg1_span = cand.second_span;
    out.arg2_span = cand.first_span;
  }
  return out;
}

std::optional<PredictedRelation> resolve_directions(const RelationCandidate& cand_ij,
                                                    const DirPrediction& pred_ij,
                                                    const RelationCandidate& cand_ji,
                                                    const DirPrediction& pred_ji,
                                                    const RelAlphabet& rels) {
  const bool pos_ij = !rels.is_negative(pred_ij.label);
  const bool pos_ji = !rels.is_negative(pred_ji.label);
  if (!pos_ij && !pos_ji) return std::nullopt;
  if (pos_ij && !pos_ji) return directed_relation(cand_ij, pred_ij.label, rels);
  if (!pos_ij && pos_ji) return directed_relation(cand_ji, pred_ji.label, rels);
  if (pred_ji.confidence > pred_ij.confidence) {
    return directed_relation(cand_ji, pred_ji.label, rels);
  }
  if (pred_ij.confidence > pred_ji.confidence) {
    return directed_relation(cand_ij, pred_ij.label, rels);
  }
  // Tie: prefer the sentence-order candidate.
  const RelationCandidate& sentence_order = cand_ij.first < cand_ij.second ? cand_ij : cand_ji;
  const DirPrediction& pred = cand_ij.first < cand_ij.second ? pred_ij : pred_ji;
  return directed_relation(sentence_order, pred.label, rels);
}

}  // namespace relex
