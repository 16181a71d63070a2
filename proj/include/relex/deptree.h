#pragma once

#include <string>
#include <vector>

namespace relex {

struct Sentence;

// Validated single-root dependency tree over one sentence. Token indices are
// 1-based throughout; parent[i] is 0 for the root.
struct DepTree {
  int n = 0;
  int root = 0;
  std::vector<int> parent;                 // size n+1, slot 0 unused
  std::vector<std::vector<int>> children;  // ascending token order
  std::vector<int> depth;                  // root depth 0
};

DepTree validate_tree(const Sentence& sentence);

// Deepest common ancestor of a and b.
int lca(const DepTree& tree, int a, int b);

// Inclusive path a -> lca -> b.
std::vector<int> shortest_path(const DepTree& tree, int a, int b);

enum class StructureKind { kSPTree, kSubTree, kFullTree };

StructureKind parse_structure_kind(const std::string& name);
std::string structure_kind_name(StructureKind kind);

enum NodeType { kOnPath = 0, kOffPath = 1 };

// A relation substructure: the shortest-path tree, the subtree under the
// lowest common ancestor, or the full tree, with per-node path typing for the
// type mapping function.
struct PathStructure {
  StructureKind kind = StructureKind::kSPTree;
  std::vector<int> nodes;     // ascending token indices
  int anchor = 0;             // lowest common ancestor of the targets
  int root = 0;               // node with no parent inside the structure
  int first = 0, second = 0;  // targets in candidate order
  std::vector<int> parent;    // size n+1; 0 when outside or structure root
  std::vector<std::vector<int>> children;  // restricted, ascending
  std::vector<NodeType> node_type;         // size n+1

  bool contains(int node) const { return node >= 1 && node <= static_cast<int>(parent.size()) - 1 && in_structure[static_cast<size_t>(node)]; }
  std::vector<bool> in_structure;
};

PathStructure extract_structure(const DepTree& tree, int first, int second,
                                StructureKind kind);

}  // namespace relex
