#pragma once

#include <random>
#include <vector>

#include "relex/corpus.h"
#include "relex/encoder.h"
#include "relex/graph.h"

namespace relex {

// Two-layer entity tagger over [s_t; v_label(prev)].
struct EntityHeadParams {
  Parameter *Wh, *bh, *Wy, *by;
  int hidden = 0;
};

EntityHeadParams make_entity_head(ParamStore& store, int input_dim, int hidden,
                                  int n_tags, std::mt19937& rng);

struct EntityScores {
  int hidden = -1;
  int logits = -1;
};

EntityScores entity_scores(Graph& g, const EntityHeadParams& p, int s_t,
                           int prev_label_emb, double dropout_p);

struct TagDecision {
  int chosen = 0;    // model prediction at this token
  int fed = 0;       // label fed downstream (gold or prediction while training)
  int logits = -1;   // graph node
  int loss = -1;     // graph node, -1 at prediction
};

struct EntityDecodeOptions {
  bool training = false;
  double epsilon = 1.0;                    // scheduled-sampling gold probability
  const std::vector<int>* gold = nullptr;  // required when training
  bool constrained = true;                 // legality mask during decoding
  double dropout = 0.0;
};

// Greedy left-to-right decoding with previous-label feedback. Training
// computes the loss against gold at every token while feeding gold labels
// with probability epsilon (when legal after the previously fed label) and
// the constrained argmax prediction otherwise.
std::vector<TagDecision> decode_entities(Graph& g, const EntityHeadParams& head,
                                         const EmbedTables& tables,
                                         const std::vector<int>& svecs,
                                         const TagAlphabet& alphabet,
                                         const EntityDecodeOptions& opts,
                                         std::mt19937* rng);

// Argmax over tags restricted to a legality mask; ties break to the lowest id.
int masked_argmax(const Tensor& logits, const std::vector<bool>& legal);

}  // namespace relex
