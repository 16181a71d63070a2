#include "relex/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "relex/deptree.h"

namespace relex {

namespace {

std::string lowercased(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

[[noreturn]] void parse_fail(const std::string& name, int lineno, const std::string& msg) {
  throw std::runtime_error(name + ":" + std::to_string(lineno) + ": " + msg);
}

int parse_int(const std::string& s, const std::string& name, int lineno,
              const char* what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    parse_fail(name, lineno, std::string("bad ") + what + ": '" + s + "'");
  }
}

struct RawTag {
  char position = 'O';  // B, I, L, U, or O
  std::string type;
};

RawTag parse_tag_string(const std::string& tag, const std::string& name, int lineno) {
  if (tag == "O") return {};
  if (tag.size() < 3 || tag[1] != '-') {
    parse_fail(name, lineno, "bad entity tag '" + tag + "'");
  }
  char p = tag[0];
  if (p != 'B' && p != 'I' && p != 'L' && p != 'U') {
    parse_fail(name, lineno, "bad entity tag '" + tag + "'");
  }
  return {p, tag.substr(2)};
}

std::vector<EntitySpan> decode_raw(const std::vector<RawTag>& tags) {
  std::vector<EntitySpan> spans;
  const int n = static_cast<int>(tags.size());
  int i = 0;
  while (i < n) {
    if (tags[i].position == 'U') {
      spans.push_back({tags[i].type, i + 1, i + 1});
      ++i;
    } else if (tags[i].position == 'B') {
      int j = i + 1;
      while (j < n && tags[j].position == 'I' && tags[j].type == tags[i].type) ++j;
      if (j < n && tags[j].position == 'L' && tags[j].type == tags[i].type) {
        spans.push_back({tags[i].type, i + 1, j + 1});
        i = j + 1;
      } else {
        i = j;  // ill-formed run: resume at the token that broke it
      }
    } else {
      ++i;
    }
  }
  return spans;
}

std::vector<std::string> encode_raw(const std::vector<EntitySpan>& spans, int n) {
  std::vector<EntitySpan> sorted = spans;
  std::sort(sorted.begin(), sorted.end(),
            [](const EntitySpan& a, const EntitySpan& b) { return a.start < b.start; });
  int prev_end = 0;
  for (const EntitySpan& s : sorted) {
    if (s.start < 1 || s.end > n || s.start > s.end) {
      throw std::invalid_argument("encode_bilou: span out of range");
    }
    if (s.start <= prev_end) {
      throw std::invalid_argument("encode_bilou: overlapping spans");
    }
    prev_end = s.end;
  }
  std::vector<std::string> tags(static_cast<size_t>(n), "O");
  for (const EntitySpan& s : sorted) {
    if (s.start == s.end) {
      tags[static_cast<size_t>(s.start) - 1] = "U-" + s.type;
    } else {
      tags[static_cast<size_t>(s.start) - 1] = "B-" + s.type;
      for (int t = s.start + 1; t < s.end; ++t) tags[static_cast<size_t>(t) - 1] = "I-" + s.type;
      tags[static_cast<size_t>(s.end) - 1] = "L-" + s.type;
    }
  }
  return tags;
}

}  // namespace

int TagAlphabet::tag_id(char position, int type) const {
  int offset;
  switch (position) {
    case 'B': offset = 0; break;
    case 'I': offset = 1; break;
    case 'L': offset = 2; break;
    case 'U': offset = 3; break;
    default: throw std::invalid_argument("tag_id: bad position");
  }
  return 1 + 4 * type + offset;
}

char TagAlphabet::position(int id) const {
  if (id == 0) return 'O';
  static const char kPos[4] = {'B', 'I', 'L', 'U'};
  return kPos[(id - 1) % 4];
}

int TagAlphabet::type(int id) const { return id == 0 ? -1 : (id - 1) / 4; }

std::string TagAlphabet::name(int id) const {
  if (id == 0) return "O";
  return std::string(1, position(id)) + "-" + types_[static_cast<size_t>(type(id))];
}

int TagAlphabet::parse(const std::string& tag) const {
  if (tag == "O") return 0;
  if (tag.size() < 3 || tag[1] != '-') return -1;
  auto it = std::find(types_.begin(), types_.end(), tag.substr(2));
  if (it == types_.end()) return -1;
  char p = tag[0];
  if (p != 'B' && p != 'I' && p != 'L' && p != 'U') return -1;
  return tag_id(p, static_cast<int>(it - types_.begin()));
}

std::vector<EntitySpan> decode_bilou(const std::vector<int>& tags, const TagAlphabet& alphabet) {
  std::vector<RawTag> raw(tags.size());
  for (size_t i = 0; i < tags.size(); ++i) {
    raw[i].position = alphabet.position(tags[i]);
    if (tags[i] != 0) raw[i].type = alphabet.types()[static_cast<size_t>(alphabet.type(tags[i]))];
  }
  return decode_raw(raw);
}

std::vector<int> encode_bilou(const std::vector<EntitySpan>& spans, int n,
                              const TagAlphabet& alphabet) {
  std::vector<std::string> raw = encode_raw(spans, n);
  std::vector<int> ids(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    int id = alphabet.parse(raw[i]);
    if (id < 0) throw std::invalid_argument("encode_bilou: unknown entity type in " + raw[i]);
    ids[i] = id;
  }
  return ids;
}

std::vector<bool> legal_next_tags(int prev, const TagAlphabet& alphabet, bool last) {
  std::vector<bool> legal(static_cast<size_t>(alphabet.size()), false);
  char p = alphabet.position(prev);
  if (p == 'B' || p == 'I') {
    int t = alphabet.type(prev);
    if (!last) legal[static_cast<size_t>(alphabet.tag_id('I', t))] = true;
    legal[static_cast<size_t>(alphabet.tag_id('L', t))] = true;
  } else {  // O, L, U
    legal[0] = true;
    for (int t = 0; t < alphabet.n_types(); ++t) {
      if (!last) legal[static_cast<size_t>(alphabet.tag_id('B', t))] = true;
      legal[static_cast<size_t>(alphabet.tag_id('U', t))] = true;
    }
  }
  return legal;
}

int RelAlphabet::type_index(const std::string& name) const {
  auto it = std::find(types_.begin(), types_.end(), name);
  return it == types_.end() ? -1 : static_cast<int>(it - types_.begin());
}

StringMap::StringMap(std::vector<std::string> reserved) {
  for (auto& s : reserved) add(s);
}

int StringMap::add(const std::string& s) {
  auto it = ids_.find(s);
  if (it != ids_.end()) return it->second;
  int id = static_cast<int>(items_.size());
  items_.push_back(s);
  ids_[s] = id;
  return id;
}

int StringMap::get(const std::string& s) const {
  auto it = ids_.find(s);
  return it == ids_.end() ? 0 : it->second;
}

int StringMap::find(const std::string& s) const {
  auto it = ids_.find(s);
  return it == ids_.end() ? -1 : it->second;
}

namespace {

void finish_sentence(std::vector<Sentence>& out, Sentence& sent,
                     std::vector<RawTag>& raw_tags, const std::string& name,
                     int lineno, const ParseOptions& opts) {
  if (sent.tokens.empty()) {
    if (!sent.relations.empty()) parse_fail(name, lineno, "#rel before any token");
    return;
  }
  sent.entities = decode_raw(raw_tags);
  if (!opts.repair_tags) {
    // Gold tag columns must be a canonical encoding (well-formed, no repair).
    std::vector<std::string> reencoded = encode_raw(sent.entities, sent.size());
    for (int i = 0; i < sent.size(); ++i) {
      RawTag expect = parse_tag_string(reencoded[static_cast<size_t>(i)], name, lineno);
      if (expect.position != raw_tags[static_cast<size_t>(i)].position ||
          expect.type != raw_tags[static_cast<size_t>(i)].type) {
        parse_fail(name, lineno,
                   "ill-formed gold entity tags near token " + std::to_string(i + 1));
      }
    }
  }
  std::set<int> span_ends;
  for (const EntitySpan& s : sent.entities) span_ends.insert(s.end);
  for (const RelationInstance& r : sent.relations) {
    if (r.arg1_last < 1 || r.arg1_last > sent.size() || r.arg2_last < 1 ||
        r.arg2_last > sent.size()) {
      parse_fail(name, lineno, "relation argument out of range");
    }
    if (r.arg1_last == r.arg2_last) {
      parse_fail(name, lineno, "relation arguments must differ");
    }
    if (opts.require_entity_args &&
        (!span_ends.count(r.arg1_last) || !span_ends.count(r.arg2_last))) {
      parse_fail(name, lineno, "relation argument " +
                                   std::to_string(span_ends.count(r.arg1_last)
                                                      ? r.arg2_last
                                                      : r.arg1_last) +
                                   " is not the last word of an entity");
    }
  }
  validate_tree(sent);  // cycles, dangling heads, root count
  out.push_back(std::move(sent));
  sent = Sentence{};
  raw_tags.clear();
}

}  // namespace

std::vector<Sentence> parse_corpus(std::istream& in, const std::string& name,
                                   const ParseOptions& opts) {
  std::vector<Sentence> out;
  Sentence sent;
  std::vector<RawTag> raw_tags;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      finish_sentence(out, sent, raw_tags, name, lineno, opts);
      continue;
    }
    if (line.rfind("#doc", 0) == 0) continue;
    std::vector<std::string> fields = split_tabs(line);
    if (fields[0] == "#rel") {
      if (fields.size() != 4) {
        parse_fail(name, lineno, "#rel needs 4 tab-separated fields, got " +
                                     std::to_string(fields.size()));
      }
      RelationInstance r;
      r.arg1_last = parse_int(fields[1], name, lineno, "relation argument");
      r.arg2_last = parse_int(fields[2], name, lineno, "relation argument");
      r.type = fields[3];
      if (r.type.empty()) parse_fail(name, lineno, "empty relation type");
      sent.relations.push_back(r);
      continue;
    }
    if (line[0] == '#') parse_fail(name, lineno, "unrecognized comment line");
    if (!sent.relations.empty()) {
      parse_fail(name, lineno, "token line after #rel lines");
    }
    if (fields.size() != 6) {
      parse_fail(name, lineno,
                 "expected 6 tab-separated columns, got " + std::to_string(fields.size()));
    }
    Token tok;
    tok.index = parse_int(fields[0], name, lineno, "token index");
    tok.form = fields[1];
    tok.pos = fields[2];
    tok.head = parse_int(fields[3], name, lineno, "head index");
    tok.deprel = fields[4];
    if (tok.index != static_cast<int>(sent.tokens.size()) + 1) {
      parse_fail(name, lineno, "token index " + std::to_string(tok.index) +
                                   " out of sequence");
    }
    if (tok.form.empty() || tok.pos.empty() || tok.deprel.empty()) {
      parse_fail(name, lineno, "empty token field");
    }
    raw_tags.push_back(parse_tag_string(fields[5], name, lineno));
    sent.tokens.push_back(std::move(tok));
  }
  finish_sentence(out, sent, raw_tags, name, lineno + 1, opts);
  return out;
}

std::vector<Sentence> load_corpus(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  return parse_corpus(in, path, opts);
}

void write_corpus(std::ostream& out, const std::vector<Sentence>& sentences) {
  bool first = true;
  for (const Sentence& sent : sentences) {
    if (!first) out << '\n';
    first = false;
    std::vector<std::string> tags = encode_raw(sent.entities, sent.size());
    for (int i = 0; i < sent.size(); ++i) {
      const Token& t = sent.tokens[static_cast<size_t>(i)];
      out << t.index << '\t' << t.form << '\t' << t.pos << '\t' << t.head << '\t'
          << t.deprel << '\t' << tags[static_cast<size_t>(i)] << '\n';
    }
    for (const RelationInstance& r : sent.relations) {
      out << "#rel\t" << r.arg1_last << '\t' << r.arg2_last << '\t' << r.type << '\n';
    }
  }
}

Vocabulary build_vocab(const std::vector<Sentence>& corpus, int min_word_freq,
                       const std::string& negative_relation) {
  Vocabulary vocab;
  vocab.negative_relation = negative_relation;
  std::map<std::string, int> word_freq;
  std::set<std::string> entity_types, relation_types;
  for (const Sentence& sent : corpus) {
    for (const Token& t : sent.tokens) {
      ++word_freq[t.form];
      vocab.pos.add(t.pos);
      vocab.deps.add(t.deprel);
    }
    for (const EntitySpan& e : sent.entities) entity_types.insert(e.type);
    for (const RelationInstance& r : sent.relations) {
      if (r.type != negative_relation) relation_types.insert(r.type);
    }
  }
  for (const auto& [form, freq] : word_freq) {
    if (freq >= min_word_freq) vocab.words.add(form);
  }
  vocab.tags = TagAlphabet({entity_types.begin(), entity_types.end()});
  vocab.rels = RelAlphabet({relation_types.begin(), relation_types.end()});
  return vocab;
}

int load_word_vectors(std::istream& in, const Vocabulary& vocab, Tensor& table) {
  std::string line;
  std::unordered_map<std::string, std::vector<double>> vectors;
  bool first_line = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    if (first_line) {
      first_line = false;
      // Optional `count dim` header: exactly two integer fields.
      long a, b;
      std::string rest;
      std::istringstream probe(line);
      if ((probe >> a >> b) && !(probe >> rest)) continue;
    }
    std::string word;
    ss >> word;
    std::vector<double> v;
    double x;
    while (ss >> x) v.push_back(x);
    if (static_cast<int>(v.size()) != table.cols) {
      throw std::runtime_error("word vector for '" + word + "' has dimension " +
                               std::to_string(v.size()) + ", expected " +
                               std::to_string(table.cols));
    }
    vectors[word] = std::move(v);
  }
  int covered = 0;
  for (int id = 2; id < vocab.words.size(); ++id) {  // skip <unk>, <pad>
    const std::string& form = vocab.words.name(id);
    auto it = vectors.find(form);
    if (it == vectors.end()) it = vectors.find(lowercased(form));
    if (it == vectors.end()) continue;
    for (int c = 0; c < table.cols; ++c) table.at(id, c) = it->second[static_cast<size_t>(c)];
    ++covered;
  }
  return covered;
}

}  // namespace relex
