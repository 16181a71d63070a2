#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "relex/metrics.h"
#include "relex/model.h"

namespace relex {

struct TrainConfig {
  double learning_rate = 1e-3;
  double l2 = 1e-5;
  double dropout = 0.3;
  double clip = 10.0;
  double sched_k = 10.0;
  int epochs = 100;
  int pretrain_epochs = 10;
  unsigned seed = 42;
  double loss_weight_entity = 1.0;
  double loss_weight_relation = 1.0;
  int min_word_freq = 1;
  bool shared = true;          // off: pipeline ablation (separate models)
  bool enforce_ranges = true;  // validate against the tuning ranges below
  // Optional early stopping: finish once the dev entity and relation F1 both
  // reach their thresholds (negative = disabled).
  double stop_dev_ent_f1 = -1.0;
  double stop_dev_rel_f1 = -1.0;
};

// Hyper-parameter ranges tried in tuning; violations throw unless
// enforce_ranges is off.
void validate_ranges(const TrainConfig& cfg);

// Inverse sigmoid decay eps_i = k / (k + exp(i / k)).
double epsilon_schedule(int epoch, double k);

struct EpochStats {
  int epoch = 0;
  double eps = 0.0;
  double mean_loss = 0.0;
  double dev_ent_f1 = 0.0;
  double dev_rel_f1 = 0.0;
};

// Entity-only epochs updating the embedding, sequence, and entity-head
// parameters; relation and tree parameters stay bit-identical.
void pretrain_entities(Model& model, const std::vector<Sentence>& train,
                       const TrainConfig& cfg, std::mt19937& rng, std::ostream* log);

// Joint per-sentence training: scheduled-sampling decode, summed entity and
// relation losses, one backward/clip/Adam/average step per sentence. Dev
// metrics per epoch use the averaged parameters (train set when no dev).
std::vector<EpochStats> train_joint(Model& model, const std::vector<Sentence>& train,
                                    const std::vector<Sentence>& dev,
                                    const TrainConfig& cfg, std::mt19937& rng,
                                    std::ostream* log);

MetricReport evaluate_model(Model& model, const std::vector<Sentence>& corpus,
                            bool use_average = true, bool with_macro = false);
MetricReport evaluate_pipeline(Model& ent_model, Model& rel_model,
                               const std::vector<Sentence>& corpus,
                               bool use_average = true, bool with_macro = false);

struct TrainingRun {
  std::unique_ptr<Model> model;      // shared model, or the entity model
  std::unique_ptr<Model> rel_model;  // pipeline mode only
  std::vector<EpochStats> epochs;
};

// Full training procedure: entity pretraining followed by joint training, or
// the pipeline wiring (entity model first, then a separate relation model on
// its fixed detections) when cfg.shared is off. Finalizes parameters to the
// best averaged snapshot (by dev relation then entity F1). init_model runs on
// each freshly constructed model (pretrained word vectors).
TrainingRun run_training(const ModelConfig& mcfg, const TrainConfig& cfg,
                         const Vocabulary& vocab, const std::vector<Sentence>& train,
                         const std::vector<Sentence>& dev, std::ostream* log,
                         const std::function<void(Model&)>& init_model = {});

SentencePrediction predict_pipeline(Model& ent_model, Model& rel_model,
                                    const Sentence& sent);

// Prediction corpus: input tokens with predicted tags and #rel lines.
std::vector<Sentence> predicted_corpus(Model& model, Model* rel_model,
                                       const std::vector<Sentence>& corpus);

}  // namespace relex
