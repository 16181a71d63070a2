#pragma once

#include <random>
#include <unordered_map>
#include <vector>

#include "relex/params.h"
#include "relex/tensor.h"

namespace relex {

enum class Op {
  kParam,
  kInput,
  kLookup,
  kAffine,   // W x + b
  kMatVec,   // W x
  kAdd,      // elementwise, n-ary
  kSigmoid,
  kTanh,
  kCMult,    // hadamard
  kConcat,
  kScale,    // c * x, c constant
  kSum,      // sum of all elements -> scalar
  kDropout,
  kPickNegLogSoftmax,
};

struct Node {
  Op op;
  std::vector<int> in;
  Tensor val;
  Tensor grad;              // allocated during backward
  Parameter* param = nullptr;  // kParam / kLookup
  int row = -1;             // kLookup row
  int gold = -1;            // kPickNegLogSoftmax class index
  double c = 0.0;           // kScale factor
  Tensor aux;               // dropout mask / cached softmax
};

// Dynamic per-example computation graph. Nodes are evaluated eagerly at
// construction; backward() runs one reverse sweep and accumulates parameter
// gradients into Parameter::grad. A graph is used for one example and
// discarded; calling backward() twice throws.
class Graph {
 public:
  explicit Graph(bool training = false, std::mt19937* rng = nullptr)
      : training_(training), rng_(rng) {}

  int param(Parameter& p);
  int input(Tensor t);
  int zeros(int rows) { return input(Tensor(rows, 1)); }
  int lookup(Parameter& table, int row);
  int affine(int W, int x, int b);
  int matvec(int W, int x);
  int add(int a, int b) { return add(std::vector<int>{a, b}); }
  int add(std::vector<int> xs);
  int sigmoid(int x);
  int tanh(int x);
  int cmult(int a, int b);
  int concat(std::vector<int> xs);
  int scale(int x, double c);
  int sum(int x);
  int dropout(int x, double p);
  int pick_neg_log_softmax(int logits, int gold);

  const Tensor& value(int id) const { return nodes_[static_cast<size_t>(id)].val; }
  const Tensor& gradient(int id) const;
  void backward(int loss);

  bool training() const { return training_; }
  size_t size() const { return nodes_.size(); }

 private:
  int push(Node n);
  std::string describe(int id) const;
  void check_vector(int id, const char* op) const;

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, int> param_nodes_;
  bool training_;
  bool backward_done_ = false;
  std::mt19937* rng_;
};

// Forward-only helpers on plain tensors.
Tensor softmax(const Tensor& logits);
int argmax(const Tensor& v);

}  // namespace relex
