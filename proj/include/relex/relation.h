#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "relex/corpus.h"
#include "relex/deptree.h"
#include "relex/graph.h"

namespace relex {

// One direction (bottom-up or top-down) of the tree LSTM. The recurrent
// matrices are shared per child node type; the forget-gate matrices are
// indexed by (receiving-child type, contributing-child type).
struct TreeDirParams {
  Parameter *Wi, *Wf, *Wo, *Wu;
  Parameter* Ui[2];
  Parameter* Uo[2];
  Parameter* Uu[2];
  Parameter* Uf[2][2];
  Parameter *bi, *bf, *bo, *bu;
};

struct TreeLstmParams {
  TreeDirParams up, down;
  int input_dim = 0;
  int hidden = 0;
};

TreeLstmParams make_tree_lstm(ParamStore& store, int input_dim, int hidden,
                              double forget_bias, std::mt19937& rng);

// x_t for the dependency layer: [s_t; v_dep; v_label]; structure roots feed
// the reserved <root> dependency id. The label part is omitted in SemEval
// mode (label_id < 0).
int dependency_input(Graph& g, int s_t, Parameter& dep_table, int dep_id,
                     Parameter& label_table, int label_id);

// Hidden/cell node ids per token index (slot 0 unused, -1 when the token is
// outside the structure).
struct TreeStates {
  std::vector<int> h;
  std::vector<int> c;
};

TreeStates tree_bottom_up(Graph& g, const TreeDirParams& p, const PathStructure& s,
                          const std::vector<int>& inputs);
TreeStates tree_top_down(Graph& g, const TreeDirParams& p, const PathStructure& s,
                         const std::vector<int>& inputs);

enum class CandidateMode { kBoth, kLeftToRight, kNegSampling };

CandidateMode parse_candidate_mode(const std::string& name);
std::string candidate_mode_name(CandidateMode mode);

struct RelationCandidate {
  int first = 0, second = 0;  // token indices, order = hypothesized direction
  EntitySpan first_span, second_span;
  std::shared_ptr<PathStructure> structure;
  int gold_label = 0;  // relation label id (training)
};

// Ordered candidate pairs over the last words of the detected entity spans.
// Training labels require both detected argument spans to exactly match the
// gold spans; otherwise the candidate is negative.
std::vector<RelationCandidate> build_candidates(const std::vector<EntitySpan>& detected,
                                                const DepTree& tree, StructureKind kind,
                                                CandidateMode mode, const Sentence& gold,
                                                const RelAlphabet& rels,
                                                const std::string& negative_relation);

// SemEval-style candidates: the argument pair is given per gold relation.
std::vector<RelationCandidate> build_given_pair_candidates(
    const DepTree& tree, StructureKind kind, CandidateMode mode, const Sentence& gold,
    const RelAlphabet& rels, const std::string& negative_relation);

struct RelationHeadParams {
  Parameter *Wh, *bh, *Wy, *by;
  int hidden = 0;
};

RelationHeadParams make_relation_head(ParamStore& store, int input_dim, int hidden,
                                      int n_labels, std::mt19937& rng);

// d_p = [up_h(anchor); down_h(first); down_h(second)], optionally extended
// with the per-entity means of the sequence-layer states (Pair).
int relation_vector(Graph& g, const RelationCandidate& cand, const TreeStates& up,
                    const TreeStates& down, const std::vector<int>& svecs, bool pair_on);

// Two-layer relation scorer; returns the logits node.
int classify_relation(Graph& g, const RelationHeadParams& p, int d, double dropout_p);

struct DirPrediction {
  int label = 0;
  double confidence = 0.0;  // softmax probability of the label
};

struct PredictedRelation {
  int arg1_last = 0, arg2_last = 0;
  std::string type;
  EntitySpan arg1_span, arg2_span;

  auto key() const { return std::tie(arg1_last, arg2_last, type); }
};

// Maps a positive label on an ordered candidate to its directed relation.
PredictedRelation directed_relation(const RelationCandidate& cand, int label,
                                    const RelAlphabet& rels);

// Combines the two orderings of one unordered pair: both negative yields
// nothing; one positive wins; two positives resolve by confidence with ties
// going to the sentence-order candidate.
std::optional<PredictedRelation> resolve_directions(const RelationCandidate& cand_ij,
                                                    const DirPrediction& pred_ij,
                                                    const RelationCandidate& cand_ji,
                                                    const DirPrediction& pred_ji,
                                                    const RelAlphabet& rels);

}  // namespace relex
