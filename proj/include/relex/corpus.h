#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "relex/tensor.h"

namespace relex {

struct Token {
  int index = 0;  // 1-based position in the sentence
  std::string form;
  std::string pos;
  int head = 0;  // parent token index, 0 = root
  std::string deprel;
};

struct EntitySpan {
  std::string type;
  int start = 0, end = 0;  // inclusive, 1-based

  bool operator==(const EntitySpan& o) const {
    return type == o.type && start == o.start && end == o.end;
  }
};

// Direction is the (arg1, arg2) ordering; both args are last tokens of gold
// entity spans.
struct RelationInstance {
  int arg1_last = 0, arg2_last = 0;
  std::string type;
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<EntitySpan> entities;  // sorted by start, non-overlapping
  std::vector<RelationInstance> relations;

  int size() const { return static_cast<int>(tokens.size()); }
};

// BILOU tag ids: 0 = O, then B/I/L/U blocks per entity type in the order the
// types were registered.
class TagAlphabet {
 public:
  TagAlphabet() = default;
  explicit TagAlphabet(std::vector<std::string> types) : types_(std::move(types)) {}

  int size() const { return 1 + 4 * static_cast<int>(types_.size()); }
  int n_types() const { return static_cast<int>(types_.size()); }
  const std::vector<std::string>& types() const { return types_; }

  int o_id() const { return 0; }
  int tag_id(char position, int type) const;  // position in {B,I,L,U}
  char position(int id) const;                // 'O' for the O tag
  int type(int id) const;                     // -1 for O
  std::string name(int id) const;             // "O", "B-PER", ...
  int parse(const std::string& tag) const;    // -1 if unknown

 private:
  std::vector<std::string> types_;
};

// Tags -> spans with deterministic repair: only maximal well-formed
// B-(I)*-L or U runs of a single type produce spans.
std::vector<EntitySpan> decode_bilou(const std::vector<int>& tags, const TagAlphabet& alphabet);
std::vector<int> encode_bilou(const std::vector<EntitySpan>& spans, int n,
                              const TagAlphabet& alphabet);

// Legal successors of prev (virtual sentence-start prev is O). When last is
// true, B-* and I-* are additionally excluded (they cannot be completed).
std::vector<bool> legal_next_tags(int prev, const TagAlphabet& alphabet, bool last = false);

// Relation label ids: 0 = negative; for positive type t the label carries the
// direction relative to the candidate ordering (fwd: first->second).
class RelAlphabet {
 public:
  RelAlphabet() = default;
  explicit RelAlphabet(std::vector<std::string> types) : types_(std::move(types)) {}

  int size() const { return 1 + 2 * static_cast<int>(types_.size()); }
  int n_types() const { return static_cast<int>(types_.size()); }
  const std::vector<std::string>& types() const { return types_; }

  int negative_id() const { return 0; }
  int fwd_id(int type) const { return 1 + 2 * type; }
  int rev_id(int type) const { return 2 + 2 * type; }
  bool is_negative(int id) const { return id == 0; }
  bool is_rev(int id) const { return id > 0 && (id % 2) == 0; }
  int type(int id) const { return (id - 1) / 2; }
  const std::string& type_name(int id) const { return types_[static_cast<size_t>(type(id))]; }
  int type_index(const std::string& name) const;

 private:
  std::vector<std::string> types_;
};

class StringMap {
 public:
  // Reserved entries occupy the first ids (e.g. "<unk>").
  explicit StringMap(std::vector<std::string> reserved = {});
  int add(const std::string& s);          // id, inserting if new
  int get(const std::string& s) const;    // 0 (UNK) if unknown
  int find(const std::string& s) const;   // -1 if unknown
  int size() const { return static_cast<int>(items_.size()); }
  const std::string& name(int id) const { return items_[static_cast<size_t>(id)]; }

 private:
  std::vector<std::string> items_;
  std::unordered_map<std::string, int> ids_;
};

struct Vocabulary {
  StringMap words{{"<unk>", "<pad>"}};
  StringMap pos{{"<unk>"}};
  StringMap deps{{"<unk>", "<root>"}};  // <root> is fed for structure roots
  TagAlphabet tags;
  RelAlphabet rels;
  std::string negative_relation;  // corpus relation type treated as negative

  static constexpr int kUnk = 0;
  static constexpr int kRootDep = 1;

  int word_id(const std::string& form) const { return words.get(form); }
};

// Corpus file: per token `INDEX FORM POS HEAD DEPREL ENTITY_TAG` (tabs),
// then `#rel<TAB>ARG1_LAST<TAB>ARG2_LAST<TAB>TYPE` lines; blank line between
// sentences; `#doc ...` lines are ignored.
struct ParseOptions {
  // SemEval-style corpora list target nominals in #rel lines without
  // requiring them to end gold entity spans.
  bool require_entity_args = true;
  // Model output may carry ill-formed tag sequences; with repair_tags the
  // canonical-encoding check is skipped and spans come from repair decoding.
  bool repair_tags = false;
};

std::vector<Sentence> parse_corpus(std::istream& in, const std::string& name = "<stream>",
                                   const ParseOptions& opts = {});
std::vector<Sentence> load_corpus(const std::string& path, const ParseOptions& opts = {});
void write_corpus(std::ostream& out, const std::vector<Sentence>& sentences);

Vocabulary build_vocab(const std::vector<Sentence>& corpus, int min_word_freq = 1,
                       const std::string& negative_relation = "");

// Word-vector text format: optional `count dim` header, then
// `word v1 .. v_dim` lines. In-vocabulary rows are copied into `table`
// (exact match first, then lowercased form); returns the number of
// vocabulary words covered.
int load_word_vectors(std::istream& in, const Vocabulary& vocab, Tensor& table);

}  // namespace relex
