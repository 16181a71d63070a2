#include "relex/params.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace relex {

Parameter* ParamStore::add(const std::string& name, int rows, int cols,
                           unsigned group, bool weight) {
  if (index_.count(name)) {
    throw std::invalid_argument("duplicate parameter name: " + name);
  }
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = Tensor(rows, cols);
  p->grad = Tensor(rows, cols);
  p->m = Tensor(rows, cols);
  p->v = Tensor(rows, cols);
  p->avg = Tensor(rows, cols);
  p->group = group;
  p->weight = weight;
  Parameter* raw = p.get();
  params_.push_back(std::move(p));
  index_[name] = raw;
  return raw;
}

Parameter* ParamStore::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : it->second;
}

void ParamStore::zero_grads() {
  for (auto& p : params_) p->grad.zero();
}

void init_xavier(Tensor& t, std::mt19937& rng) {
  double limit = std::sqrt(6.0 / (t.rows + t.cols));
  init_uniform(t, -limit, limit, rng);
}

void init_uniform(Tensor& t, double lo, double hi, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& x : t.data) x = dist(rng);
}

void save_params(std::ostream& os,
                 const std::vector<std::pair<std::string, const ParamStore*>>& stores) {
  os << "relex-model v1\n";
  char buf[32];
  for (const auto& [prefix, store] : stores) {
    for (const auto& p : store->all()) {
      os << prefix << p->name << ' ' << p->rows() << ' ' << p->cols() << '\n';
      for (int r = 0; r < p->rows(); ++r) {
        const double* row = p->value.row_ptr(r);
        for (int c = 0; c < p->cols(); ++c) {
          std::snprintf(buf, sizeof(buf), "%.9g", row[c]);
          if (c) os << ' ';
          os << buf;
        }
        os << '\n';
      }
    }
  }
  os << "end\n";
}

void load_params(std::istream& is,
                 const std::vector<std::pair<std::string, ParamStore*>>& stores) {
  std::string line;
  if (!std::getline(is, line) || line != "relex-model v1") {
    throw std::runtime_error("model file: missing 'relex-model v1' header");
  }
  std::unordered_map<std::string, Parameter*> expected;
  for (const auto& [prefix, store] : stores) {
    for (const auto& p : store->all()) expected[prefix + p->name] = p.get();
  }
  std::unordered_map<std::string, bool> seen;
  bool got_end = false;
  while (std::getline(is, line)) {
    if (line == "end") {
      got_end = true;
      break;
    }
    std::istringstream header(line);
    std::string name;
    int rows = 0, cols = 0;
    if (!(header >> name >> rows >> cols)) {
      throw std::runtime_error("model file: bad parameter header: " + line);
    }
    auto it = expected.find(name);
    if (it == expected.end()) {
      throw std::runtime_error("model file: unknown parameter: " + name);
    }
    Parameter* p = it->second;
    if (rows != p->rows() || cols != p->cols()) {
      throw std::runtime_error("model file: shape mismatch for " + name + ": file " +
                               std::to_string(rows) + "x" + std::to_string(cols) +
                               ", architecture " + p->value.shape_str());
    }
    if (seen[name]) {
      throw std::runtime_error("model file: duplicate parameter: " + name);
    }
    seen[name] = true;
    for (int r = 0; r < rows; ++r) {
      if (!std::getline(is, line)) {
        throw std::runtime_error("model file: truncated data for " + name);
      }
      std::istringstream row(line);
      double* out = p->value.row_ptr(r);
      for (int c = 0; c < cols; ++c) {
        if (!(row >> out[c])) {
          throw std::runtime_error("model file: bad value in " + name + " row " +
                                   std::to_string(r));
        }
      }
      double extra;
      if (row >> extra) {
        throw std::runtime_error("model file: too many values in " + name + " row " +
                                 std::to_string(r));
      }
    }
  }
  if (!got_end) throw std::runtime_error("model file: missing 'end' trailer");
  if (seen.size() != expected.size()) {
    for (const auto& [name, p] : expected) {
      if (!seen.count(name)) {
        throw std::runtime_error("model file: missing parameter: " + name);
      }
    }
  }
}

}  // namespace relex
