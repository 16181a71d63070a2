#pragma once

#include <iosfwd>
#include <string>

#include "relex/model.h"
#include "relex/training.h"

namespace relex {

// Flat `key = value` configuration covering the model and training settings
// plus file paths. Unknown keys are rejected; `#` starts a comment.
struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  std::string negative_relation;
  std::string train_file, dev_file, test_file, vectors_file;
  std::string model_in, model_out, pred_out;
};

void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value);
RunConfig parse_config(std::istream& in, const std::string& name = "<config>");
RunConfig load_config(const std::string& path);

// `--set key=value` command-line override.
void apply_override(RunConfig& cfg, const std::string& assignment);

}  // namespace relex
