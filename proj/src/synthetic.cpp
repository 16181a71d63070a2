#include "relex/synthetic.h"

#include <random>
#include <stdexcept>

namespace relex {

namespace {

struct Builder {
  Sentence s;

  int add(const std::string& form, const std::string& pos, int head,
          const std::string& deprel) {
    Token t;
    t.index = s.size() + 1;
    t.form = form;
    t.pos = pos;
    t.head = head;
    t.deprel = deprel;
    s.tokens.push_back(std::move(t));
    return s.size();
  }

  // Appends a mention; earlier tokens attach to the last one as noun
  // compounds, the last carries the outward head and deprel.
  int mention(const std::vector<std::string>& forms, int head, const std::string& deprel,
              const std::string& etype) {
    const int start = s.size() + 1;
    const int last = start + static_cast<int>(forms.size()) - 1;
    for (size_t i = 0; i < forms.size(); ++i) {
      bool is_last = (i + 1 == forms.size());
      add(forms[i], "NNP", is_last ? head : last, is_last ? deprel : "nn");
    }
    s.entities.push_back({etype, start, last});
    return last;
  }

  void rel(int arg1_last, int arg2_last, const std::string& type) {
    s.relations.push_back({arg1_last, arg2_last, type});
  }
};

const std::vector<std::vector<std::string>> kPeople = {
    {"Alice"},           {"Bob"},          {"Carol"},       {"David"},
    {"Emma"},            {"Frank"},        {"Grace"},       {"Henry"},
    {"Sidney", "Yates"}, {"Anna", "Smith"}, {"John", "Doe"}, {"Mary", "Major"}};

const std::vector<std::vector<std::string>> kPlaces = {
    {"Chicago"}, {"Paris"}, {"Tokyo"},       {"Berlin"},
    {"Oslo"},    {"Cairo"}, {"New", "York"}, {"Los", "Angeles"}};

const std::vector<std::vector<std::string>> kOrgs = {
    {"Globex"}, {"Initech"},      {"Soylent"},           {"Hooli"},
    {"Acme", "Corp"}, {"Stark", "Industries"}, {"Wayne", "Enterprises"}};

template <typename T>
const T& pick(const std::vector<T>& pool, std::mt19937& rng) {
  std::uniform_int_distribution<size_t> dist(0, pool.size() - 1);
  return pool[dist(rng)];
}

// "<PER> lives in <LOC> ."  LIVES_IN(PER -> LOC)
Sentence ace_lives_in(std::mt19937& rng) {
  Builder b;
  const auto& per = pick(kPeople, rng);
  const auto& loc = pick(kPlaces, rng);
  const std::string verb = pick<std::string>({"lives", "resides"}, rng);
  const int m = static_cast<int>(per.size());
  const int verb_idx = m + 1;
  int per_last = b.mention(per, verb_idx, "nsubj", "PER");
  b.add(verb, "VBZ", 0, "root");
  int in_idx = b.add("in", "IN", verb_idx, "prep");
  int loc_last = b.mention(loc, in_idx, "pobj", "LOC");
  b.add(".", ".", verb_idx, "punct");
  b.rel(per_last, loc_last, "LIVES_IN");
  return b.s;
}

// "<ORG> employs <PER> ."  WORKS_FOR(PER -> ORG), right-to-left in the text
Sentence ace_employs(std::mt19937& rng) {
  Builder b;
  const auto& org = pick(kOrgs, rng);
  const auto& per = pick(kPeople, rng);
  const std::string verb = pick<std::string>({"employs", "hired"}, rng);
  const int m = static_cast<int>(org.size());
  const int verb_idx = m + 1;
  int org_last = b.mention(org, verb_idx, "nsubj", "ORG");
  b.add(verb, "VBZ", 0, "root");
  int per_last = b.mention(per, verb_idx, "dobj", "PER");
  b.add(".", ".", verb_idx, "punct");
  b.rel(per_last, org_last, "WORKS_FOR");
  return b.s;
}

// "<PER> works for <ORG> ."  WORKS_FOR(PER -> ORG)
Sentence ace_works_for(std::mt19937& rng) {
  Builder b;
  const auto& per = pick(kPeople, rng);
  const auto& org = pick(kOrgs, rng);
  const int m = static_cast<int>(per.size());
  const int verb_idx = m + 1;
  int per_last = b.mention(per, verb_idx, "nsubj", "PER");
  b.add("works", "VBZ", 0, "root");
  int for_idx = b.add("for", "IN", verb_idx, "prep");
  int org_last = b.mention(org, for_idx, "pobj", "ORG");
  b.add(".", ".", verb_idx, "punct");
  b.rel(per_last, org_last, "WORKS_FOR");
  return b.s;
}

// "<PER> met <PER> ."  entities without a relation
Sentence ace_met(std::mt19937& rng) {
  Builder b;
  const auto& p1 = pick(kPeople, rng);
  auto p2 = pick(kPeople, rng);
  if (p2 == p1) p2 = kPeople[(0)];  // avoid identical mention twice
  if (p2 == p1) p2 = kPeople[1];
  const std::string verb = pick<std::string>({"met", "greeted"}, rng);
  const int m = static_cast<int>(p1.size());
  const int verb_idx = m + 1;
  b.mention(p1, verb_idx, "nsubj", "PER");
  b.add(verb, "VBD", 0, "root");
  b.mention(p2, verb_idx, "dobj", "PER");
  b.add(".", ".", verb_idx, "punct");
  return b.s;
}

// Distractor without entities.
Sentence ace_plain(std::mt19937& rng) {
  Builder b;
  if (std::bernoulli_distribution(0.5)(rng)) {
    b.add("the", "DT", 2, "det");
    b.add("weather", "NN", 4, "nsubj");
    b.add("is", "VBZ", 4, "cop");
    b.add("nice", "JJ", 0, "root");
    b.add(".", ".", 4, "punct");
  } else {
    b.add("it", "PRP", 2, "nsubj");
    b.add("rained", "VBD", 0, "root");
    b.add("all", "DT", 4, "det");
    b.add("day", "NN", 2, "tmod");
    b.add(".", ".", 2, "punct");
  }
  return b.s;
}

// "<PER> in <LOC> works for <ORG> ."  two relations in one sentence
Sentence ace_two_relations(std::mt19937& rng) {
  Builder b;
  const auto& per = pick(kPeople, rng);
  const auto& loc = pick(kPlaces, rng);
  const auto& org = pick(kOrgs, rng);
  const int m = static_cast<int>(per.size());
  const int k = static_cast<int>(loc.size());
  const int works_idx = m + 1 + k + 1;
  int per_last = b.mention(per, works_idx, "nsubj", "PER");
  int in_idx = b.add("in", "IN", per_last, "prep");
  int loc_last = b.mention(loc, in_idx, "pobj", "LOC");
  b.add("works", "VBZ", 0, "root");
  int for_idx = b.add("for", "IN", works_idx, "prep");
  int org_last = b.mention(org, for_idx, "pobj", "ORG");
  b.add(".", ".", works_idx, "punct");
  b.rel(per_last, loc_last, "LIVES_IN");
  b.rel(per_last, org_last, "WORKS_FOR");
  return b.s;
}

const std::vector<std::string> kCauses = {"fire", "flood", "storm", "virus", "quake"};
const std::vector<std::string> kEffects = {"damage", "panic", "outage", "delay", "chaos"};
const std::vector<std::string> kContents = {"apple", "coin", "letter", "ring", "book"};
const std::vector<std::string> kContainers = {"box", "jar", "drawer", "chest", "bag"};
const std::vector<std::string> kMisc = {"dog", "cat", "man", "woman", "bird", "child"};

// "the <N1> caused the <N2> ."  CAUSE_EFFECT(N1 -> N2)
Sentence sem_caused(std::mt19937& rng) {
  Builder b;
  b.add("the", "DT", 2, "det");
  int n1 = b.add(pick(kCauses, rng), "NN", 3, "nsubj");
  b.add("caused", "VBD", 0, "root");
  b.add("the", "DT", 5, "det");
  int n2 = b.add(pick(kEffects, rng), "NN", 3, "dobj");
  b.add(".", ".", 3, "punct");
  b.rel(n1, n2, "CAUSE_EFFECT");
  return b.s;
}

// "the <N2> was caused by the <N1> ."  CAUSE_EFFECT with reversed text order
Sentence sem_caused_by(std::mt19937& rng) {
  Builder b;
  b.add("the", "DT", 2, "det");
  int n2 = b.add(pick(kEffects, rng), "NN", 4, "nsubjpass");
  b.add("was", "VBD", 4, "auxpass");
  b.add("caused", "VBN", 0, "root");
  b.add("by", "IN", 4, "prep");
  b.add("the", "DT", 7, "det");
  int n1 = b.add(pick(kCauses, rng), "NN", 5, "pobj");
  b.add(".", ".", 4, "punct");
  b.rel(n1, n2, "CAUSE_EFFECT");
  return b.s;
}

// "the <N1> sat in the <N2> ."  CONTENT_CONTAINER(N1 -> N2)
Sentence sem_container(std::mt19937& rng) {
  Builder b;
  b.add("the", "DT", 2, "det");
  int n1 = b.add(pick(kContents, rng), "NN", 3, "nsubj");
  b.add("sat", "VBD", 0, "root");
  b.add("in", "IN", 3, "prep");
  b.add("the", "DT", 6, "det");
  int n2 = b.add(pick(kContainers, rng), "NN", 4, "pobj");
  b.add(".", ".", 3, "punct");
  b.rel(n1, n2, "CONTENT_CONTAINER");
  return b.s;
}

// "the <a> saw the <b> ."  OTHER (negative class)
Sentence sem_other(std::mt19937& rng) {
  Builder b;
  b.add("the", "DT", 2, "det");
  int n1 = b.add(pick(kMisc, rng), "NN", 3, "nsubj");
  b.add("saw", "VBD", 0, "root");
  b.add("the", "DT", 5, "det");
  int n2 = b.add(pick(kMisc, rng), "NN", 3, "dobj");
  b.add(".", ".", 3, "punct");
  b.rel(n1, n2, "OTHER");
  return b.s;
}

}  // namespace

std::vector<Sentence> gen_synthetic(const SyntheticOptions& opts) {
  if (opts.n < 1) throw std::invalid_argument("gen_synthetic: n must be >= 1");
  std::mt19937 rng(opts.seed);
  std::vector<Sentence> out;
  out.reserve(static_cast<size_t>(opts.n));
  if (opts.semeval) {
    std::discrete_distribution<int> pick_template({30, 20, 30, 20});
    for (int i = 0; i < opts.n; ++i) {
      switch (pick_template(rng)) {
        case 0: out.push_back(sem_caused(rng)); break;
        case 1: out.push_back(sem_caused_by(rng)); break;
        case 2: out.push_back(sem_container(rng)); break;
        default: out.push_back(sem_other(rng)); break;
      }
    }
  } else {
    std::discrete_distribution<int> pick_template({22, 18, 18, 14, 14, 14});
    for (int i = 0; i < opts.n; ++i) {
      switch (pick_template(rng)) {
        case 0: out.push_back(ace_lives_in(rng)); break;
        case 1: out.push_back(ace_employs(rng)); break;
        case 2: out.push_back(ace_works_for(rng)); break;
        case 3: out.push_back(ace_met(rng)); break;
        case 4: out.push_back(ace_plain(rng)); break;
        default: out.push_back(ace_two_relations(rng)); break;
      }
    }
  }
  return out;
}

}  // namespace relex
