#include "relex/training.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "relex/optimizer.h"

namespace relex {

namespace {

void check_range(bool ok, const std::string& what, const std::string& range) {
  if (!ok) {
    throw std::invalid_argument(what + " outside the tuning range " + range +
                                " (set enforce_ranges=false to override)");
  }
}

}  // namespace

void validate_ranges(const TrainConfig& cfg) {
  if (!cfg.enforce_ranges) return;
  check_range(cfg.learning_rate >= 1e-4 && cfg.learning_rate <= 5e-3, "learning_rate",
              "[1e-4, 5e-3]");
  check_range(cfg.l2 >= 1e-7 && cfg.l2 <= 1e-4, "l2", "[1e-7, 1e-4]");
  check_range(cfg.dropout >= 0.0 && cfg.dropout <= 0.5, "dropout", "[0, 0.5]");
  check_range(cfg.clip >= 1.0 && cfg.clip <= 100.0, "clip", "[1, 100]");
  check_range(cfg.sched_k >= 1.0 && cfg.sched_k <= 100.0, "sched_k", "[1, 100]");
  check_range(cfg.epochs >= 0 && cfg.epochs <= 100, "epochs", "[0, 100]");
  check_range(cfg.pretrain_epochs >= 0 && cfg.pretrain_epochs <= 100, "pretrain_epochs",
              "[0, 100]");
}

double epsilon_schedule(int epoch, double k) {
  if (k < 1.0) throw std::invalid_argument("epsilon_schedule: k must be >= 1");
  if (epoch < 0) throw std::invalid_argument("epsilon_schedule: epoch must be >= 0");
  return k / (k + std::exp(static_cast<double>(epoch) / k));
}

namespace {

struct UpdateConfig {
  AdamConfig adam;
  double clip = 10.0;
  unsigned groups = kAllGroups;
};

double train_sentence(Model& model, const Sentence& sent, const LossOptions& loss_opts,
                      const UpdateConfig& upd, std::mt19937& rng) {
  ParamStore& store = model.store();
  store.zero_grads();
  Graph g(/*training=*/true, &rng);
  LossResult r = model.build_loss(g, sent, loss_opts, &rng);
  if (r.loss < 0) return 0.0;
  g.backward(r.loss);
  clip_gradients(store, upd.clip, upd.groups);
  adam_step(store, upd.adam, upd.groups);
  update_average(store);
  return r.value;
}

double run_epoch(Model& model, const std::vector<Sentence>& train,
                 const LossOptions& loss_opts, const UpdateConfig& upd,
                 std::mt19937& rng) {
  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  double total = 0.0;
  for (size_t idx : order) {
    total += train_sentence(model, train[idx], loss_opts, upd, rng);
  }
  return train.empty() ? 0.0 : total / static_cast<double>(train.size());
}

UpdateConfig update_config(const TrainConfig& cfg, unsigned groups) {
  UpdateConfig upd;
  upd.adam.lr = cfg.learning_rate;
  upd.adam.l2 = cfg.l2;
  upd.clip = cfg.clip;
  upd.groups = groups;
  return upd;
}

}  // namespace

void pretrain_entities(Model& model, const std::vector<Sentence>& train,
                       const TrainConfig& cfg, std::mt19937& rng, std::ostream* log) {
  if (model.config().semeval) return;  // no entity detection to pretrain
  LossOptions loss;
  loss.entity_loss = true;
  loss.relation_loss = false;
  loss.w_ent = cfg.loss_weight_entity;
  UpdateConfig upd = update_config(cfg, kEmbedGroup | kSeqGroup | kEntityGroup);
  for (int epoch = 0; epoch < cfg.pretrain_epochs; ++epoch) {
    loss.epsilon = epsilon_schedule(epoch, cfg.sched_k);
    double mean_loss = run_epoch(model, train, loss, upd, rng);
    if (log) {
      (*log) << "pretrain " << epoch << " eps=" << loss.epsilon << " loss=" << mean_loss
             << "\n";
    }
  }
}

MetricReport evaluate_model(Model& model, const std::vector<Sentence>& corpus,
                            bool use_average, bool with_macro) {
  if (use_average) swap_with_average(model.store());
  std::vector<std::vector<EntitySpan>> gold_ents, pred_ents;
  std::vector<std::vector<ScoredRelation>> gold_rels, pred_rels;
  const bool semeval = model.config().semeval;
  const std::string& neg = model.vocab().negative_relation;
  for (const Sentence& sent : corpus) {
    SentencePrediction pred = model.predict(sent);
    gold_ents.push_back(sent.entities);
    pred_ents.push_back(pred.entities);
    gold_rels.push_back(gold_scored_relations(sent, semeval, neg));
    pred_rels.push_back(scored_relations(pred.relations, semeval));
  }
  if (use_average) swap_with_average(model.store());
  MetricReport report;
  report.entity = score_entities(gold_ents, pred_ents);
  report.relation = score_relations(gold_rels, pred_rels, &report.per_class);
  if (with_macro && !report.per_class.empty()) {
    report.has_macro = true;
    report.macro = macro_f1(report.per_class);
  }
  return report;
}

MetricReport evaluate_pipeline(Model& ent_model, Model& rel_model,
                               const std::vector<Sentence>& corpus, bool use_average,
                               bool with_macro) {
  if (use_average) {
    swap_with_average(ent_model.store());
    swap_with_average(rel_model.store());
  }
  std::vector<std::vector<EntitySpan>> gold_ents, pred_ents;
  std::vector<std::vector<ScoredRelation>> gold_rels, pred_rels;
  const bool semeval = rel_model.config().semeval;
  const std::string& neg = rel_model.vocab().negative_relation;
  for (const Sentence& sent : corpus) {
    SentencePrediction pred = predict_pipeline(ent_model, rel_model, sent);
    gold_ents.push_back(sent.entities);
    pred_ents.push_back(pred.entities);
    gold_rels.push_back(gold_scored_relations(sent, semeval, neg));
    pred_rels.push_back(scored_relations(pred.relations, semeval));
  }
  if (use_average) {
    swap_with_average(ent_model.store());
    swap_with_average(rel_model.store());
  }
  MetricReport report;
  report.entity = score_entities(gold_ents, pred_ents);
  report.relation = score_relations(gold_rels, pred_rels, &report.per_class);
  if (with_macro && !report.per_class.empty()) {
    report.has_macro = true;
    report.macro = macro_f1(report.per_class);
  }
  return report;
}

std::vector<EpochStats> train_joint(Model& model, const std::vector<Sentence>& train,
                                    const std::vector<Sentence>& dev,
                                    const TrainConfig& cfg, std::mt19937& rng,
                                    std::ostream* log) {
  std::vector<EpochStats> stats;
  LossOptions loss;
  loss.entity_loss = !model.config().semeval;
  loss.relation_loss = true;
  loss.w_ent = cfg.loss_weight_entity;
  loss.w_rel = cfg.loss_weight_relation;
  UpdateConfig upd = update_config(cfg, kAllGroups);
  const std::vector<Sentence>& dev_set = dev.empty() ? train : dev;
  std::vector<Tensor> best_avg;
  double best_rel = -1.0, best_ent = -1.0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    EpochStats es;
    es.epoch = epoch;
    es.eps = epsilon_schedule(epoch, cfg.sched_k);
    loss.epsilon = es.eps;
    es.mean_loss = run_epoch(model, train, loss, upd, rng);
    MetricReport report = evaluate_model(model, dev_set);
    es.dev_ent_f1 = f1(report.entity);
    es.dev_rel_f1 = f1(report.relation);
    stats.push_back(es);
    // Keep the best averaged snapshot (dev relation F1 first, entity breaks
    // ties); it becomes the final model.
    if (es.dev_rel_f1 > best_rel ||
        (es.dev_rel_f1 == best_rel && es.dev_ent_f1 > best_ent)) {
      best_rel = es.dev_rel_f1;
      best_ent = es.dev_ent_f1;
      best_avg.clear();
      for (const auto& p : model.store().all()) {
        best_avg.push_back(model.store().avg_count > 0 ? p->avg : p->value);
      }
    }
    if (log) {
      (*log) << "epoch " << epoch << " eps=" << es.eps << " loss=" << es.mean_loss
             << " dev_ent_f1=" << es.dev_ent_f1 << " dev_rel_f1=" << es.dev_rel_f1
             << "\n";
    }
    if ((cfg.stop_dev_ent_f1 >= 0.0 || cfg.stop_dev_rel_f1 >= 0.0) &&
        es.dev_ent_f1 >= cfg.stop_dev_ent_f1 && es.dev_rel_f1 >= cfg.stop_dev_rel_f1) {
      break;
    }
  }
  if (!best_avg.empty()) {
    const auto& params = model.store().all();
    for (size_t i = 0; i < params.size(); ++i) params[i]->avg = best_avg[i];
    if (model.store().avg_count == 0) model.store().avg_count = 1;
  }
  return stats;
}

SentencePrediction predict_pipeline(Model& ent_model, Model& rel_model,
                                    const Sentence& sent) {
  SentencePrediction ent_pred = ent_model.predict(sent);
  SentencePrediction out = rel_model.predict(sent, &ent_pred.tags);
  out.tags = ent_pred.tags;
  out.entities = ent_pred.entities;
  return out;
}

TrainingRun run_training(const ModelConfig& mcfg, const TrainConfig& cfg,
                         const Vocabulary& vocab, const std::vector<Sentence>& train,
                         const std::vector<Sentence>& dev, std::ostream* log,
                         const std::function<void(Model&)>& init_model) {
  validate_ranges(cfg);
  TrainingRun run;
  std::mt19937 rng(cfg.seed);
  ModelConfig model_cfg = mcfg;
  model_cfg.dropout = cfg.dropout;
  run.model = std::make_unique<Model>(model_cfg, vocab, rng);
  if (init_model) init_model(*run.model);

  if (cfg.shared) {
    pretrain_entities(*run.model, train, cfg, rng, log);
    run.epochs = train_joint(*run.model, train, dev, cfg, rng, log);
    finalize_to_average(run.model->store());
    return run;
  }

  // Pipeline wiring: the entity model trains alone, then a separate relation
  // model trains on its fixed detections.
  LossOptions ent_loss;
  ent_loss.entity_loss = true;
  ent_loss.relation_loss = false;
  ent_loss.w_ent = cfg.loss_weight_entity;
  UpdateConfig ent_upd = update_config(cfg, kEmbedGroup | kSeqGroup | kEntityGroup);
  const int ent_epochs = cfg.pretrain_epochs + cfg.epochs;
  for (int epoch = 0; epoch < ent_epochs; ++epoch) {
    ent_loss.epsilon = epsilon_schedule(epoch, cfg.sched_k);
    double mean_loss = run_epoch(*run.model, train, ent_loss, ent_upd, rng);
    if (log) {
      (*log) << "pipeline-entity " << epoch << " eps=" << ent_loss.epsilon
             << " loss=" << mean_loss << "\n";
    }
  }
  finalize_to_average(run.model->store());

  std::vector<std::vector<int>> detections;
  detections.reserve(train.size());
  for (const Sentence& sent : train) {
    detections.push_back(run.model->predict(sent).tags);
  }

  run.rel_model = std::make_unique<Model>(model_cfg, vocab, rng);
  if (init_model) init_model(*run.rel_model);
  LossOptions rel_loss;
  rel_loss.entity_loss = false;
  rel_loss.relation_loss = true;
  rel_loss.w_rel = cfg.loss_weight_relation;
  UpdateConfig rel_upd =
      update_config(cfg, kEmbedGroup | kSeqGroup | kTreeGroup | kRelationGroup);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (size_t idx : order) {
      LossOptions opts = rel_loss;
      opts.fixed_tags = &detections[idx];
      total += train_sentence(*run.rel_model, train[idx], opts, rel_upd, rng);
    }
    EpochStats es;
    es.epoch = epoch;
    es.eps = 0.0;
    es.mean_loss = train.empty() ? 0.0 : total / static_cast<double>(train.size());
    MetricReport report = evaluate_pipeline(*run.model, *run.rel_model,
                                            dev.empty() ? train : dev);
    es.dev_ent_f1 = f1(report.entity);
    es.dev_rel_f1 = f1(report.relation);
    run.epochs.push_back(es);
    if (log) {
      (*log) << "pipeline-relation " << epoch << " loss=" << es.mean_loss
             << " dev_ent_f1=" << es.dev_ent_f1 << " dev_rel_f1=" << es.dev_rel_f1
             << "\n";
    }
  }
  finalize_to_average(run.rel_model->store());
  return run;
}

std::vector<Sentence> predicted_corpus(Model& model, Model* rel_model,
                                       const std::vector<Sentence>& corpus) {
  std::vector<Sentence> out;
  out.reserve(corpus.size());
  for (const Sentence& sent : corpus) {
    SentencePrediction pred = rel_model ? predict_pipeline(model, *rel_model, sent)
                                        : model.predict(sent);
    Sentence copy;
    copy.tokens = sent.tokens;
    copy.entities = pred.entities;
    for (const PredictedRelation& r : pred.relations) {
      copy.relations.push_back({r.arg1_last, r.arg2_last, r.type});
    }
    out.push_back(std::move(copy));
  }
  return out;
}

}  // namespace relex
