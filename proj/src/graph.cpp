#include "relex/graph.h"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace relex {

namespace {

void check_shape(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

int Graph::push(Node n) {
  assert(n.val.all_finite());
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

std::string Graph::describe(int id) const {
  const Node& n = nodes_[static_cast<size_t>(id)];
  std::string s = "node#" + std::to_string(id) + " " + n.val.shape_str();
  if (n.param) s += " (parameter " + n.param->name + ")";
  return s;
}

void Graph::check_vector(int id, const char* op) const {
  if (!value(id).is_vector()) {
    throw std::invalid_argument(std::string(op) + ": expected a vector, got " +
                                describe(id));
  }
}

int Graph::param(Parameter& p) {
  auto it = param_nodes_.find(&p);
  if (it != param_nodes_.end()) return it->second;
  Node n;
  n.op = Op::kParam;
  n.param = &p;
  n.val = p.value;
  int id = push(std::move(n));
  param_nodes_[&p] = id;
  return id;
}

int Graph::input(Tensor t) {
  Node n;
  n.op = Op::kInput;
  n.val = std::move(t);
  return push(std::move(n));
}

int Graph::lookup(Parameter& table, int row) {
  if (row < 0 || row >= table.rows()) {
    throw std::out_of_range("lookup: row " + std::to_string(row) +
                            " out of range for parameter " + table.name + " " +
                            table.value.shape_str());
  }
  Node n;
  n.op = Op::kLookup;
  n.param = &table;
  n.row = row;
  n.val = Tensor(table.cols(), 1);
  const double* src = table.value.row_ptr(row);
  for (int c = 0; c < table.cols(); ++c) n.val[c] = src[c];
  return push(std::move(n));
}

int Graph::affine(int W, int x, int b) {
  const Tensor& tw = value(W);
  const Tensor& tx = value(x);
  const Tensor& tb = value(b);
  check_vector(x, "affine");
  check_vector(b, "affine");
  check_shape(tw.cols == tx.rows, "affine: W " + describe(W) + " does not match x " +
                                      describe(x));
  check_shape(tb.rows == tw.rows, "affine: b " + describe(b) + " does not match W " +
                                      describe(W));
  Node n;
  n.op = Op::kAffine;
  n.in = {W, x, b};
  n.val = Tensor(tw.rows, 1);
  for (int r = 0; r < tw.rows; ++r) {
    const double* wr = tw.row_ptr(r);
    double acc = tb[r];
    for (int c = 0; c < tw.cols; ++c) acc += wr[c] * tx[c];
    n.val[r] = acc;
  }
  return push(std::move(n));
}

int Graph::matvec(int W, int x) {
  const Tensor& tw = value(W);
  const Tensor& tx = value(x);
  check_vector(x, "matvec");
  check_shape(tw.cols == tx.rows, "matvec: W " + describe(W) + " does not match x " +
                                      describe(x));
  Node n;
  n.op = Op::kMatVec;
  n.in = {W, x};
  n.val = Tensor(tw.rows, 1);
  for (int r = 0; r < tw.rows; ++r) {
    const double* wr = tw.row_ptr(r);
    double acc = 0.0;
    for (int c = 0; c < tw.cols; ++c) acc += wr[c] * tx[c];
    n.val[r] = acc;
  }
  return push(std::move(n));
}

int Graph::add(std::vector<int> xs) {
  if (xs.empty()) throw std::invalid_argument("add: empty input list");
  const Tensor& first = value(xs[0]);
  for (int id : xs) {
    check_shape(value(id).same_shape(first),
                "add: shape mismatch between " + describe(xs[0]) + " and " + describe(id));
  }
  Node n;
  n.op = Op::kAdd;
  n.val = first;
  for (size_t i = 1; i < xs.size(); ++i) {
    const Tensor& t = value(xs[i]);
    for (int j = 0; j < t.size(); ++j) n.val[j] += t[j];
  }
  n.in = std::move(xs);
  return push(std::move(n));
}

int Graph::sigmoid(int x) {
  Node n;
  n.op = Op::kSigmoid;
  n.in = {x};
  n.val = value(x);
  for (double& v : n.val.data) v = 1.0 / (1.0 + std::exp(-v));
  return push(std::move(n));
}

int Graph::tanh(int x) {
  Node n;
  n.op = Op::kTanh;
  n.in = {x};
  n.val = value(x);
  for (double& v : n.val.data) v = std::tanh(v);
  return push(std::move(n));
}

int Graph::cmult(int a, int b) {
  check_shape(value(a).same_shape(value(b)),
              "cmult: shape mismatch between " + describe(a) + " and " + describe(b));
  Node n;
  n.op = Op::kCMult;
  n.in = {a, b};
  n.val = value(a);
  const Tensor& tb = value(b);
  for (int j = 0; j < n.val.size(); ++j) n.val[j] *= tb[j];
  return push(std::move(n));
}

int Graph::concat(std::vector<int> xs) {
  if (xs.empty()) throw std::invalid_argument("concat: empty input list");
  int total = 0;
  for (int id : xs) {
    check_vector(id, "concat");
    total += value(id).rows;
  }
  Node n;
  n.op = Op::kConcat;
  n.val = Tensor(total, 1);
  int off = 0;
  for (int id : xs) {
    const Tensor& t = value(id);
    for (int j = 0; j < t.rows; ++j) n.val[off + j] = t[j];
    off += t.rows;
  }
  n.in = std::move(xs);
  return push(std::move(n));
}

int Graph::scale(int x, double c) {
  Node n;
  n.op = Op::kScale;
  n.in = {x};
  n.c = c;
  n.val = value(x);
  for (double& v : n.val.data) v *= c;
  return push(std::move(n));
}

int Graph::sum(int x) {
  Node n;
  n.op = Op::kSum;
  n.in = {x};
  n.val = Tensor(1, 1);
  double acc = 0.0;
  for (double v : value(x).data) acc += v;
  n.val[0] = acc;
  return push(std::move(n));
}

int Graph::dropout(int x, double p) {
  if (p < 0.0 || p >= 1.0) {
    throw std::invalid_argument("dropout: p must be in [0, 1), got " + std::to_string(p));
  }
  if (!training_ || p == 0.0) return x;  // identity at inference
  if (!rng_) throw std::logic_error("dropout: training graph has no rng");
  Node n;
  n.op = Op::kDropout;
  n.in = {x};
  n.val = value(x);
  n.aux = Tensor(n.val.rows, n.val.cols);
  std::bernoulli_distribution drop(p);
  const double keep_scale = 1.0 / (1.0 - p);
  for (int j = 0; j < n.val.size(); ++j) {
    double mask = drop(*rng_) ? 0.0 : keep_scale;
    n.aux[j] = mask;
    n.val[j] *= mask;
  }
  return push(std::move(n));
}

int Graph::pick_neg_log_softmax(int logits, int gold) {
  check_vector(logits, "pick_neg_log_softmax");
  const Tensor& t = value(logits);
  if (gold < 0 || gold >= t.rows) {
    throw std::out_of_range("pick_neg_log_softmax: class " + std::to_string(gold) +
                            " out of range for " + describe(logits));
  }
  Node n;
  n.op = Op::kPickNegLogSoftmax;
  n.in = {logits};
  n.gold = gold;
  n.aux = softmax(t);
  double mx = t[0];
  for (int j = 1; j < t.rows; ++j) mx = std::max(mx, t[j]);
  double lse = 0.0;
  for (int j = 0; j < t.rows; ++j) lse += std::exp(t[j] - mx);
  lse = mx + std::log(lse);
  n.val = Tensor(1, 1);
  n.val[0] = lse - t[gold];
  return push(std::move(n));
}

const Tensor& Graph::gradient(int id) const {
  if (!backward_done_) throw std::logic_error("gradient(): backward has not run");
  return nodes_[static_cast<size_t>(id)].grad;
}

void Graph::backward(int loss) {
  if (backward_done_) {
    throw std::logic_error("backward(): already run on this graph");
  }
  if (!value(loss).is_scalar()) {
    throw std::invalid_argument("backward(): loss must be scalar, got " + describe(loss));
  }
  backward_done_ = true;
  for (Node& n : nodes_) n.grad = Tensor(n.val.rows, n.val.cols);
  nodes_[static_cast<size_t>(loss)].grad[0] = 1.0;

  for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
    Node& n = nodes_[static_cast<size_t>(i)];
    const Tensor& g = n.grad;
    switch (n.op) {
      case Op::kParam: {
        Tensor& pg = n.param->grad;
        for (int j = 0; j < g.size(); ++j) pg[j] += g[j];
        break;
      }
      case Op::kInput:
        break;
      case Op::kLookup: {
        double* row = n.param->grad.row_ptr(n.row);
        for (int j = 0; j < g.size(); ++j) row[j] += g[j];
        break;
      }
      case Op::kAffine: {
        const Tensor& W = nodes_[n.in[0]].val;
        const Tensor& x = nodes_[n.in[1]].val;
        Tensor& gW = nodes_[n.in[0]].grad;
        Tensor& gx = nodes_[n.in[1]].grad;
        Tensor& gb = nodes_[n.in[2]].grad;
        for (int r = 0; r < W.rows; ++r) {
          const double gr = g[r];
          const double* wr = W.row_ptr(r);
          double* gwr = gW.row_ptr(r);
          for (int c = 0; c < W.cols; ++c) {
            gwr[c] += gr * x[c];
            gx[c] += wr[c] * gr;
          }
          gb[r] += gr;
        }
        break;
      }
      case Op::kMatVec: {
        const Tensor& W = nodes_[n.in[0]].val;
        const Tensor& x = nodes_[n.in[1]].val;
        Tensor& gW = nodes_[n.in[0]].grad;
        Tensor& gx = nodes_[n.in[1]].grad;
        for (int r = 0; r < W.rows; ++r) {
          const double gr = g[r];
          const double* wr = W.row_ptr(r);
          double* gwr = gW.row_ptr(r);
          for (int c = 0; c < W.cols; ++c) {
            gwr[c] += gr * x[c];
            gx[c] += wr[c] * gr;
          }
        }
        break;
      }
      case Op::kAdd:
        for (int id : n.in) {
          Tensor& gi = nodes_[id].grad;
          for (int j = 0; j < g.size(); ++j) gi[j] += g[j];
        }
        break;
      case Op::kSigmoid: {
        Tensor& gx = nodes_[n.in[0]].grad;
        for (int j = 0; j < g.size(); ++j) {
          const double y = n.val[j];
          gx[j] += g[j] * y * (1.0 - y);
        }
        break;
      }
      case Op::kTanh: {
        Tensor& gx = nodes_[n.in[0]].grad;
        for (int j = 0; j < g.size(); ++j) {
          const double y = n.val[j];
          gx[j] += g[j] * (1.0 - y * y);
        }
        break;
      }
      case Op::kCMult: {
        Tensor& ga = nodes_[n.in[0]].grad;
        Tensor& gb = nodes_[n.in[1]].grad;
        const Tensor& a = nodes_[n.in[0]].val;
        const Tensor& b = nodes_[n.in[1]].val;
        for (int j = 0; j < g.size(); ++j) {
          ga[j] += g[j] * b[j];
          gb[j] += g[j] * a[j];
        }
        break;
      }
      case Op::kConcat: {
        int off = 0;
        for (int id : n.in) {
          Tensor& gi = nodes_[id].grad;
          for (int j = 0; j < gi.rows; ++j) gi[j] += g[off + j];
          off += gi.rows;
        }
        break;
      }
      case Op::kScale: {
        Tensor& gx = nodes_[n.in[0]].grad;
        for (int j = 0; j < g.size(); ++j) gx[j] += n.c * g[j];
        break;
      }
      case Op::kSum: {
        Tensor& gx = nodes_[n.in[0]].grad;
        for (int j = 0; j < gx.size(); ++j) gx[j] += g[0];
        break;
      }
      case Op::kDropout: {
        Tensor& gx = nodes_[n.in[0]].grad;
        for (int j = 0; j < g.size(); ++j) gx[j] += g[j] * n.aux[j];
        break;
      }
      case Op::kPickNegLogSoftmax: {
        Tensor& gx = nodes_[n.in[0]].grad;
        const double g0 = g[0];
        for (int j = 0; j < gx.size(); ++j) {
          double onehot = (j == n.gold) ? 1.0 : 0.0;
          gx[j] += g0 * (n.aux[j] - onehot);
        }
        break;
      }
    }
  }
}

Tensor softmax(const Tensor& logits) {
  Tensor out = logits;
  double mx = out[0];
  for (int j = 1; j < out.size(); ++j) mx = std::max(mx, out[j]);
  double z = 0.0;
  for (int j = 0; j < out.size(); ++j) {
    out[j] = std::exp(out[j] - mx);
    z += out[j];
  }
  for (int j = 0; j < out.size(); ++j) out[j] /= z;
  return out;
}

int argmax(const Tensor& v) {
  int best = 0;
  for (int j = 1; j < v.size(); ++j) {
    if (v[j] > v[best]) best = j;
  }
  return best;
}

}  // namespace relex
