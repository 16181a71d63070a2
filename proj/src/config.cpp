#include "relex/config.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace relex {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": '" + v + "'");
}

int parse_int(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for " + key + ": '" + v + "'");
  }
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
  }
}

}  // namespace

void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value) {
  // paths
  if (key == "train_file") cfg.train_file = value;
  else if (key == "dev_file") cfg.dev_file = value;
  else if (key == "test_file") cfg.test_file = value;
  else if (key == "vectors_file") cfg.vectors_file = value;
  else if (key == "model_in") cfg.model_in = value;
  else if (key == "model_out") cfg.model_out = value;
  else if (key == "pred_out") cfg.pred_out = value;
  // dimensions
  else if (key == "word_dim") cfg.model.word_dim = parse_int(value, key);
  else if (key == "pos_dim") cfg.model.pos_dim = parse_int(value, key);
  else if (key == "dep_dim") cfg.model.dep_dim = parse_int(value, key);
  else if (key == "label_dim") cfg.model.label_dim = parse_int(value, key);
  else if (key == "seq_hidden") cfg.model.seq_hidden = parse_int(value, key);
  else if (key == "tree_hidden") cfg.model.tree_hidden = parse_int(value, key);
  else if (key == "ent_hidden") cfg.model.ent_hidden = parse_int(value, key);
  else if (key == "rel_hidden") cfg.model.rel_hidden = parse_int(value, key);
  // training
  else if (key == "learning_rate") cfg.train.learning_rate = parse_double(value, key);
  else if (key == "l2") cfg.train.l2 = parse_double(value, key);
  else if (key == "dropout") cfg.train.dropout = parse_double(value, key);
  else if (key == "clip") cfg.train.clip = parse_double(value, key);
  else if (key == "sched_k") cfg.train.sched_k = parse_double(value, key);
  else if (key == "epochs") cfg.train.epochs = parse_int(value, key);
  else if (key == "pretrain_epochs") cfg.train.pretrain_epochs = parse_int(value, key);
  else if (key == "seed") cfg.train.seed = static_cast<unsigned>(parse_int(value, key));
  else if (key == "loss_weight_entity") cfg.train.loss_weight_entity = parse_double(value, key);
  else if (key == "loss_weight_relation") cfg.train.loss_weight_relation = parse_double(value, key);
  else if (key == "min_word_freq") cfg.train.min_word_freq = parse_int(value, key);
  else if (key == "forget_bias") cfg.model.forget_bias = parse_double(value, key);
  else if (key == "enforce_ranges") cfg.train.enforce_ranges = parse_bool(value, key);
  else if (key == "stop_dev_ent_f1") cfg.train.stop_dev_ent_f1 = parse_double(value, key);
  else if (key == "stop_dev_rel_f1") cfg.train.stop_dev_rel_f1 = parse_double(value, key);
  // model behavior
  else if (key == "structure") cfg.model.structure = parse_structure_kind(value);
  else if (key == "candidates") cfg.model.candidates = parse_candidate_mode(value);
  else if (key == "pair") cfg.model.pair_feature = parse_bool(value, key);
  else if (key == "constrained") cfg.model.constrained = parse_bool(value, key);
  else if (key == "shared") cfg.train.shared = parse_bool(value, key);
  else if (key == "semeval") cfg.model.semeval = parse_bool(value, key);
  else if (key == "negative_relation") cfg.negative_relation = value;
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig parse_config(std::istream& in, const std::string& name) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(name + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    }
    try {
      apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::exception& e) {
      throw std::invalid_argument(name + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in, path);
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("--set expects key=value, got '" + assignment + "'");
  }
  apply_config_line(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

}  // namespace relex
