#pragma once

#include <iosfwd>
#include <memory>
#include <random>
#include <vector>

#include "relex/corpus.h"
#include "relex/deptree.h"
#include "relex/encoder.h"
#include "relex/entity.h"
#include "relex/relation.h"

namespace relex {

struct ModelConfig {
  int word_dim = 200, pos_dim = 25, dep_dim = 25, label_dim = 25;
  int seq_hidden = 100, tree_hidden = 100, ent_hidden = 100, rel_hidden = 100;
  double forget_bias = 0.0;
  double dropout = 0.3;
  bool pair_feature = true;
  bool constrained = true;   // legality mask during decoding
  bool semeval = false;      // no entity detection, no label embeddings
  StructureKind structure = StructureKind::kSPTree;
  CandidateMode candidates = CandidateMode::kBoth;

  int seq_input_dim() const { return word_dim + pos_dim; }
  int entity_input_dim() const { return 2 * seq_hidden + label_dim; }
  int tree_input_dim() const {
    return 2 * seq_hidden + dep_dim + (semeval ? 0 : label_dim);
  }
  int relation_input_dim() const {
    return 3 * tree_hidden + (pair_feature ? 2 * (2 * seq_hidden) : 0);
  }
};

struct LossOptions {
  double epsilon = 1.0;  // scheduled-sampling gold probability
  bool entity_loss = true;
  bool relation_loss = true;
  double w_ent = 1.0, w_rel = 1.0;
  const std::vector<int>* fixed_tags = nullptr;  // pipeline mode: fed labels fixed
};

struct LossResult {
  int loss = -1;  // graph node, -1 when the sentence contributes nothing
  double value = 0.0;
  int n_candidates = 0;
};

struct SentencePrediction {
  std::vector<int> tags;  // chosen tag ids, one per token
  std::vector<EntitySpan> entities;
  std::vector<PredictedRelation> relations;
};

// The full network: embeddings, sequence BiLSTM, entity head, bidirectional
// tree LSTM, and relation head over one parameter store.
class Model {
 public:
  Model(const ModelConfig& cfg, Vocabulary vocab, std::mt19937& rng);

  LossResult build_loss(Graph& g, const Sentence& sent, const LossOptions& opts,
                        std::mt19937* rng);
  SentencePrediction predict(const Sentence& sent,
                             const std::vector<int>* fixed_tags = nullptr);

  void save(std::ostream& os) const;
  void load(std::istream& is);

  ParamStore& store() { return store_; }
  const ParamStore& store() const { return store_; }
  const Vocabulary& vocab() const { return vocab_; }
  const ModelConfig& config() const { return cfg_; }
  EmbedTables& tables() { return tables_; }
  SeqLstmParams& seq() { return seq_; }
  EntityHeadParams& entity_head() { return entity_; }
  TreeLstmParams& tree() { return tree_; }
  RelationHeadParams& relation_head() { return relation_; }

  // Graph builders, exposed for tests and the gradient-check suite.
  std::vector<int> run_sequence(Graph& g, const Sentence& sent);
  std::vector<int> gold_tag_ids(const Sentence& sent) const;

 private:
  ModelConfig cfg_;
  Vocabulary vocab_;
  ParamStore store_;
  EmbedTables tables_;
  SeqLstmParams seq_;
  EntityHeadParams entity_;
  TreeLstmParams tree_;
  RelationHeadParams relation_;
};

}  // namespace relex
