#include "relex/metrics.h"

#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace relex {

double precision(const Counts& c) {
  return (c.tp + c.fp) == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall(const Counts& c) {
  return (c.tp + c.fn) == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double f1(const Counts& c) {
  double p = precision(c), r = recall(c);
  return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

Counts score_entities(const std::vector<std::vector<EntitySpan>>& gold,
                      const std::vector<std::vector<EntitySpan>>& pred) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("score_entities: sentence count mismatch");
  }
  Counts out;
  for (size_t i = 0; i < gold.size(); ++i) {
    std::set<std::tuple<std::string, int, int>> gold_set, pred_set;
    for (const EntitySpan& s : gold[i]) gold_set.insert({s.type, s.start, s.end});
    for (const EntitySpan& s : pred[i]) pred_set.insert({s.type, s.start, s.end});
    for (const auto& p : pred_set) {
      if (gold_set.count(p)) {
        ++out.tp;
      } else {
        ++out.fp;
      }
    }
    for (const auto& g : gold_set) {
      if (!pred_set.count(g)) ++out.fn;
    }
  }
  return out;
}

Counts score_relations(const std::vector<std::vector<ScoredRelation>>& gold,
                       const std::vector<std::vector<ScoredRelation>>& pred,
                       std::map<std::string, Counts>* per_class) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("score_relations: sentence count mismatch");
  }
  Counts out;
  for (size_t i = 0; i < gold.size(); ++i) {
    std::set<ScoredRelation> gold_set(gold[i].begin(), gold[i].end());
    std::set<ScoredRelation> pred_set(pred[i].begin(), pred[i].end());
    for (const ScoredRelation& p : pred_set) {
      bool hit = gold_set.count(p) > 0;
      if (hit) {
        ++out.tp;
      } else {
        ++out.fp;
      }
      if (per_class) {
        Counts& c = (*per_class)[p.type];
        if (hit) {
          ++c.tp;
        } else {
          ++c.fp;
        }
      }
    }
    for (const ScoredRelation& g : gold_set) {
      if (!pred_set.count(g)) {
        ++out.fn;
        if (per_class) ++(*per_class)[g.type].fn;
      }
    }
  }
  return out;
}

double macro_f1(const std::map<std::string, Counts>& per_class) {
  if (per_class.empty()) throw std::invalid_argument("macro_f1: no classes");
  double total = 0.0;
  for (const auto& [name, counts] : per_class) total += f1(counts);
  return total / static_cast<double>(per_class.size());
}

std::vector<ScoredRelation> gold_scored_relations(const Sentence& sent, bool semeval,
                                                  const std::string& negative_relation) {
  std::vector<ScoredRelation> out;
  for (const RelationInstance& r : sent.relations) {
    if (!negative_relation.empty() && r.type == negative_relation) continue;
    ScoredRelation s;
    s.type = r.type;
    if (semeval) {
      s.arg1 = EntitySpan{"", r.arg1_last, r.arg1_last};
      s.arg2 = EntitySpan{"", r.arg2_last, r.arg2_last};
    } else {
      for (const EntitySpan& e : sent.entities) {
        if (e.end == r.arg1_last) s.arg1 = e;
        if (e.end == r.arg2_last) s.arg2 = e;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ScoredRelation> scored_relations(const std::vector<PredictedRelation>& rels,
                                             bool semeval) {
  std::vector<ScoredRelation> out;
  for (const PredictedRelation& r : rels) {
    ScoredRelation s;
    s.type = r.type;
    if (semeval) {
      s.arg1 = EntitySpan{"", r.arg1_last, r.arg1_last};
      s.arg2 = EntitySpan{"", r.arg2_last, r.arg2_last};
    } else {
      s.arg1 = r.arg1_span;
      s.arg2 = r.arg2_span;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ScoredRelation> file_scored_relations(const Sentence& sent, bool semeval,
                                                  const std::string& negative_relation) {
  std::vector<ScoredRelation> out;
  for (const RelationInstance& r : sent.relations) {
    if (!negative_relation.empty() && r.type == negative_relation) continue;
    ScoredRelation s;
    s.type = r.type;
    auto arg_span = [&](int end) {
      if (!semeval) {
        for (const EntitySpan& e : sent.entities) {
          if (e.end == end) return e;
        }
      }
      return EntitySpan{"", end, end};
    };
    s.arg1 = arg_span(r.arg1_last);
    s.arg2 = arg_span(r.arg2_last);
    out.push_back(std::move(s));
  }
  return out;
}

MetricReport score_corpus(const std::vector<Sentence>& gold,
                          const std::vector<Sentence>& pred, bool semeval,
                          const std::string& negative_relation, bool with_macro) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("score_corpus: corpora have different sentence counts");
  }
  std::vector<std::vector<EntitySpan>> gold_ents, pred_ents;
  std::vector<std::vector<ScoredRelation>> gold_rels, pred_rels;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != pred[i].size()) {
      throw std::invalid_argument("score_corpus: sentence " + std::to_string(i + 1) +
                                  " length mismatch");
    }
    gold_ents.push_back(gold[i].entities);
    pred_ents.push_back(pred[i].entities);
    gold_rels.push_back(gold_scored_relations(gold[i], semeval, negative_relation));
    pred_rels.push_back(file_scored_relations(pred[i], semeval, negative_relation));
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

namespace {

void format_counts_row(std::ostringstream& os, const char* name, const Counts& c) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-10s %8.4f %8.4f %8.4f %7ld %7ld %7ld\n", name,
                precision(c), recall(c), f1(c), c.tp, c.fp, c.fn);
  os << buf;
}

}  // namespace

std::string format_report(const MetricReport& report) {
  std::ostringstream os;
  os << "           "
     << "       P        R       F1      TP      FP      FN\n";
  format_counts_row(os, "entity", report.entity);
  format_counts_row(os, "relation", report.relation);
  if (!report.per_class.empty()) {
    os << "per-class relation F1:\n";
    for (const auto& [name, counts] : report.per_class) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "  %-16s %8.4f (tp=%ld fp=%ld fn=%ld)\n",
                    name.c_str(), f1(counts), counts.tp, counts.fp, counts.fn);
      os << buf;
    }
  }
  if (report.has_macro) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "macro-F1: %.4f\n", report.macro);
    os << buf;
  }
  return os.str();
}

std::string machine_line(const MetricReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "ENT %.4f %.4f %.4f REL %.4f %.4f %.4f",
                precision(report.entity), recall(report.entity), f1(report.entity),
                precision(report.relation), recall(report.relation), f1(report.relation));
  return buf;
}

}  // namespace relex
