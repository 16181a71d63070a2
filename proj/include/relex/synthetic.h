#pragma once

#include <vector>

#include "relex/corpus.h"

namespace relex {

struct SyntheticOptions {
  int n = 20;
  unsigned seed = 42;
  bool semeval = false;  // nominal-pair sentences with given targets
};

// Template-generated sentences with valid dependency trees: person, location
// and organization entities, LIVES_IN and WORKS_FOR relations in both
// sentence orders, plus distractor sentences. The SemEval variant generates
// nominal pairs with CAUSE_EFFECT / CONTENT_CONTAINER relations and OTHER
// negatives. Deterministic per seed.
std::vector<Sentence> gen_synthetic(const SyntheticOptions& opts);

}  // namespace relex
