#include "relex/gradcheck.h"

#include <chrono>
#include <cmath>
#include <numeric>

#include "relex/model.h"
#include "relex/synthetic.h"
#include "relex/training.h"

namespace relex {

double rel_err(double a, double n, double floor) {
  double denom = std::max({std::fabs(a), std::fabs(n), floor});
  return std::fabs(a - n) / denom;
}

FdReport fd_compare(ParamStore& store, const std::function<double()>& loss_forward,
                    double h, unsigned groups, double floor) {
  FdReport report;
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& p : store.all()) {
    if (!(p->group & groups)) continue;
    const int n = p->value.size();
    for (int j = 0; j < n; ++j) {
      const double saved = p->value[j];
      p->value[j] = saved + h;
      const double lp = loss_forward();
      p->value[j] = saved - h;
      const double lm = loss_forward();
      p->value[j] = saved;
      const double numeric = (lp - lm) / (2.0 * h);
      const double err = rel_err(p->grad[j], numeric, floor);
      if (err > report.max_rel) {
        report.max_rel = err;
        report.worst = p->name + "[" + std::to_string(j) + "]";
      }
      ++report.checked;
    }
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

namespace {

Tensor random_coeffs(int n, std::mt19937& rng) {
  Tensor t(n, 1);
  init_uniform(t, -1.0, 1.0, rng);
  return t;
}

struct TreeFixture {
  Sentence sent;
  DepTree tree;
  PathStructure structure;
};

// Random 7-node tree and target pair whose full-tree structure uses both node
// types and has at least one node with children of both types (so every
// typed matrix, including all four forget blocks, carries gradient).
TreeFixture random_two_type_structure(std::mt19937& rng) {
  const int n = 7;
  for (;;) {
    std::vector<int> parent(static_cast<size_t>(n) + 1, 0);
    for (int i = 2; i <= n; ++i) {
      parent[static_cast<size_t>(i)] = std::uniform_int_distribution<int>(1, i - 1)(rng);
    }
    std::vector<int> label(static_cast<size_t>(n) + 1);
    std::iota(label.begin() + 1, label.end(), 1);
    std::shuffle(label.begin() + 1, label.end(), rng);
    TreeFixture fx;
    fx.sent.tokens.resize(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) {
      Token t;
      t.index = label[static_cast<size_t>(i)];
      t.form = "w" + std::to_string(t.index);
      t.pos = "X";
      t.head = (i == 1) ? 0 : label[static_cast<size_t>(parent[static_cast<size_t>(i)])];
      t.deprel = "dep";
      fx.sent.tokens[static_cast<size_t>(t.index) - 1] = t;
    }
    fx.tree = validate_tree(fx.sent);
    std::uniform_int_distribution<int> pick_node(1, n);
    int a = pick_node(rng);
    int b = pick_node(rng);
    if (a == b) continue;
    fx.structure = extract_structure(fx.tree, a, b, StructureKind::kFullTree);
    bool has_on = false, has_off = false, mixed_children = false;
    for (int v : fx.structure.nodes) {
      (fx.structure.node_type[static_cast<size_t>(v)] == kOnPath ? has_on : has_off) = true;
      bool child_on = false, child_off = false;
      for (int c : fx.structure.children[static_cast<size_t>(v)]) {
        (fx.structure.node_type[static_cast<size_t>(c)] == kOnPath ? child_on : child_off) =
            true;
      }
      if (child_on && child_off) mixed_children = true;
    }
    if (has_on && has_off && mixed_children) return fx;
  }
}

FdReport tree_direction_check(const char* name, bool bottom_up, unsigned seed) {
  std::mt19937 rng(seed);
  TreeFixture fx = random_two_type_structure(rng);
  const int input_dim = 10, hidden = 6;
  ParamStore store;
  TreeLstmParams params = make_tree_lstm(store, input_dim, hidden, 0.0, rng);
  const TreeDirParams& dir = bottom_up ? params.up : params.down;
  std::vector<Parameter*> xs;
  for (int v : fx.structure.nodes) {
    Parameter* x = store.add("in.x" + std::to_string(v), input_dim, 1, kEmbedGroup, false);
    init_uniform(x->value, -1.0, 1.0, rng);
    xs.push_back(x);
  }
  std::vector<Tensor> coeffs;
  for (size_t i = 0; i < fx.structure.nodes.size(); ++i) {
    coeffs.push_back(random_coeffs(hidden, rng));
  }
  auto forward = [&](Graph& g) {
    std::vector<int> inputs(fx.structure.parent.size(), -1);
    for (size_t i = 0; i < xs.size(); ++i) {
      inputs[static_cast<size_t>(fx.structure.nodes[i])] = g.param(*xs[i]);
    }
    TreeStates states = bottom_up ? tree_bottom_up(g, dir, fx.structure, inputs)
                                  : tree_top_down(g, dir, fx.structure, inputs);
    std::vector<int> parts;
    for (size_t i = 0; i < fx.structure.nodes.size(); ++i) {
      int h = states.h[static_cast<size_t>(fx.structure.nodes[i])];
      parts.push_back(g.sum(g.cmult(h, g.input(coeffs[i]))));
    }
    return g.add(parts);
  };
  Graph g;
  g.backward(forward(g));
  FdReport r = fd_compare(store, [&] {
    Graph h;
    return h.value(forward(h))[0];
  });
  r.name = name;
  return r;
}

}  // namespace

std::vector<FdReport> gradcheck_suite(unsigned seed, bool large_dims) {
  std::vector<FdReport> out;

  // 1. One sequential LSTM step, all weight/recurrent/bias tensors plus the
  // inputs and the previous state.
  {
    std::mt19937 rng(seed + 1);
    ParamStore store;
    LstmGates gates = make_lstm_gates(store, "seq.fwd", 7, 5, kSeqGroup, 0.1, rng);
    Parameter* x = store.add("in.x", 7, 1, kEmbedGroup, false);
    Parameter* h0 = store.add("in.h", 5, 1, kEmbedGroup, false);
    Parameter* c0 = store.add("in.c", 5, 1, kEmbedGroup, false);
    for (Parameter* p : {x, h0, c0}) init_uniform(p->value, -1.0, 1.0, rng);
    Tensor ch = random_coeffs(5, rng), cc = random_coeffs(5, rng);
    auto forward = [&](Graph& g) {
      LstmState prev{g.param(*h0), g.param(*c0)};
      LstmState s = lstm_step(g, gates, g.param(*x), prev);
      return g.add(g.sum(g.cmult(s.h, g.input(ch))), g.sum(g.cmult(s.c, g.input(cc))));
    };
    Graph g;
    g.backward(forward(g));
    FdReport r = fd_compare(store, [&] {
      Graph h;
      return h.value(forward(h))[0];
    });
    r.name = "sequence lstm step";
    out.push_back(r);
  }

  // Small end-to-end model over a synthetic corpus for the layered checks.
  SyntheticOptions so;
  so.n = 10;
  so.seed = seed;
  std::vector<Sentence> corpus = gen_synthetic(so);
  Vocabulary vocab = build_vocab(corpus, 1, "");
  ModelConfig mc;
  int base = large_dims ? 2 : 1;
  mc.word_dim = 12 * base;
  mc.pos_dim = 4 * base;
  mc.dep_dim = 4 * base;
  mc.label_dim = 4 * base;
  mc.seq_hidden = 8 * base;
  mc.tree_hidden = 6 * base;
  mc.ent_hidden = 8 * base;
  mc.rel_hidden = 6 * base;
  mc.dropout = 0.2;
  std::mt19937 mrng(seed + 2);
  Model model(mc, vocab, mrng);
  const Sentence* rel_sent = nullptr;
  for (const Sentence& s : corpus) {
    if (!s.relations.empty() && s.entities.size() >= 2) {
      rel_sent = &s;
      break;
    }
  }
  if (!rel_sent) rel_sent = &corpus.front();

  // Deterministic training-mode forward: dropout masks and scheduled-sampling
  // draws replay identically because the rng restarts per evaluation.
  auto train_graph_value = [&](auto&& build) {
    std::mt19937 r(seed + 9);
    Graph g(true, &r);
    return g.value(build(g, r))[0];
  };
  auto train_graph_backward = [&](auto&& build) {
    model.store().zero_grads();
    std::mt19937 r(seed + 9);
    Graph g(true, &r);
    g.backward(build(g, r));
  };

  // 2. Full bidirectional sequence layer.
  {
    std::mt19937 rng(seed + 3);
    std::vector<Tensor> coeffs;
    for (int t = 0; t < rel_sent->size(); ++t) {
      coeffs.push_back(random_coeffs(2 * mc.seq_hidden, rng));
    }
    auto build = [&](Graph& g, std::mt19937&) {
      std::vector<int> svecs = model.run_sequence(g, *rel_sent);
      std::vector<int> parts;
      for (size_t t = 0; t < svecs.size(); ++t) {
        parts.push_back(g.sum(g.cmult(svecs[t], g.input(coeffs[t]))));
      }
      return g.add(parts);
    };
    train_graph_backward(build);
    FdReport r = fd_compare(model.store(), [&] { return train_graph_value(build); },
                            1e-5, kSeqGroup | kEmbedGroup);
    r.name = "bidirectional sequence layer";
    out.push_back(r);
  }

  auto loss_build = [&](LossOptions opts) {
    return [&model, rel_sent, opts](Graph& g, std::mt19937& r) {
      LossResult lr = model.build_loss(g, *rel_sent, opts, &r);
      return lr.loss;
    };
  };

  // 3. Entity head (label feedback fixed to gold via epsilon = 1).
  {
    LossOptions opts;
    opts.entity_loss = true;
    opts.relation_loss = false;
    opts.epsilon = 1.0;
    auto build = loss_build(opts);
    train_graph_backward(build);
    FdReport r = fd_compare(model.store(), [&] { return train_graph_value(build); },
                            1e-5, kEntityGroup | kEmbedGroup);
    r.name = "entity head";
    out.push_back(r);
  }

  // 4./5. Typed-children tree LSTM, both directions, on a random 7-node
  // two-type structure.
  out.push_back(tree_direction_check("bottom-up tree lstm", true, seed + 4));
  out.push_back(tree_direction_check("top-down tree lstm", false, seed + 5));

  // 6. Relation head with the pair feature, through the real candidates.
  {
    LossOptions opts;
    opts.entity_loss = false;
    opts.relation_loss = true;
    opts.epsilon = 1.0;
    auto build = loss_build(opts);
    train_graph_backward(build);
    FdReport r = fd_compare(model.store(), [&] { return train_graph_value(build); },
                            1e-5, kRelationGroup | kTreeGroup);
    r.name = "relation head with pair";
    out.push_back(r);
  }

  // 7. Full joint loss: every parameter in the store.
  {
    LossOptions opts;
    opts.entity_loss = true;
    opts.relation_loss = true;
    opts.epsilon = 1.0;
    auto build = loss_build(opts);
    train_graph_backward(build);
    FdReport r = fd_compare(model.store(), [&] { return train_graph_value(build); });
    r.name = "full joint loss";
    out.push_back(r);
  }

  return out;
}

}  // namespace relex
