#pragma once

#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relex/tensor.h"

namespace relex {

// Parameter groups, used to restrict optimizer updates (entity pretraining,
// pipeline mode) and to select what L2 touches.
enum ParamGroup : unsigned {
  kEmbedGroup = 1u << 0,
  kSeqGroup = 1u << 1,
  kEntityGroup = 1u << 2,
  kTreeGroup = 1u << 3,
  kRelationGroup = 1u << 4,
  kAllGroups = 0xffffffffu,
};

// One named model parameter with its gradient, Adam moments, and running
// average used for inference.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  Tensor m, v;  // Adam first/second moments
  long adam_t = 0;
  Tensor avg;
  unsigned group = 0;
  bool weight = false;  // W/U matrices: L2 applies; biases and embeddings not

  int rows() const { return value.rows; }
  int cols() const { return value.cols; }
};

class ParamStore {
 public:
  Parameter* add(const std::string& name, int rows, int cols, unsigned group,
                 bool weight);
  Parameter* find(const std::string& name) const;
  const std::vector<std::unique_ptr<Parameter>>& all() const { return params_; }
  void zero_grads();

  // Running-average bookkeeping (arithmetic mean of post-update snapshots).
  long avg_count = 0;

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::unordered_map<std::string, Parameter*> index_;
};

void init_xavier(Tensor& t, std::mt19937& rng);
void init_uniform(Tensor& t, double lo, double hi, std::mt19937& rng);

// Text model container. Header line `relex-model v1`; per parameter a line
// `name rows cols` followed by `rows` lines of `cols` decimal floats (9
// significant digits); trailing `end`. Loading validates names and shapes
// against the stores passed in (exact set match).
void save_params(std::ostream& os,
                 const std::vector<std::pair<std::string, const ParamStore*>>& stores);
void load_params(std::istream& is,
                 const std::vector<std::pair<std::string, ParamStore*>>& stores);

}  // namespace relex
