#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "relex/corpus.h"
#include "relex/relation.h"

namespace relex {

struct Counts {
  long tp = 0, fp = 0, fn = 0;
};

// P = TP/(TP+FP) and R = TP/(TP+FN) with 0/0 -> 0; F1 = 2PR/(P+R), 0 when
// P+R = 0. Always recomputed from the counts.
double precision(const Counts& c);
double recall(const Counts& c);
double f1(const Counts& c);

struct MetricReport {
  Counts entity;
  Counts relation;
  std::map<std::string, Counts> per_class;  // positive relation types
  bool has_macro = false;
  double macro = 0.0;
};

// Exact (type, start, end) matching, pooled over sentences.
Counts score_entities(const std::vector<std::vector<EntitySpan>>& gold,
                      const std::vector<std::vector<EntitySpan>>& pred);

// A relation for scoring: correct iff the type, the direction (argument
// order), and both argument spans (type and region) match.
struct ScoredRelation {
  EntitySpan arg1, arg2;
  std::string type;

  auto key() const { return std::tie(type, arg1.type, arg1.start, arg1.end, arg2.type, arg2.start, arg2.end); }
  bool operator<(const ScoredRelation& o) const { return key() < o.key(); }
};

Counts score_relations(const std::vector<std::vector<ScoredRelation>>& gold,
                       const std::vector<std::vector<ScoredRelation>>& pred,
                       std::map<std::string, Counts>* per_class = nullptr);

// Unweighted mean of per-class F1 over the positive classes.
double macro_f1(const std::map<std::string, Counts>& per_class);

// Scoring views of parsed sentences / model output.
std::vector<ScoredRelation> gold_scored_relations(const Sentence& sent, bool semeval,
                                                  const std::string& negative_relation);
std::vector<ScoredRelation> scored_relations(const std::vector<PredictedRelation>& rels,
                                             bool semeval);

// A prediction corpus parsed back from disk: spans are the repair-decoded
// entities; relation argument spans are the spans ending at the argument
// tokens (a bare single-token stand-in when absent).
std::vector<ScoredRelation> file_scored_relations(const Sentence& sent, bool semeval,
                                                  const std::string& negative_relation);

MetricReport score_corpus(const std::vector<Sentence>& gold,
                          const std::vector<Sentence>& pred, bool semeval,
                          const std::string& negative_relation, bool with_macro);

std::string format_report(const MetricReport& report);
std::string machine_line(const MetricReport& report);  // "ENT P R F1 REL P R F1"

}  // namespace relex
