#include "relex/deptree.h"

#include <algorithm>
#include <stdexcept>

#include "relex/corpus.h"

namespace relex {

DepTree validate_tree(const Sentence& sentence) {
  const int n = sentence.size();
  if (n == 0) throw std::invalid_argument("validate_tree: empty sentence");
  DepTree tree;
  tree.n = n;
  tree.parent.assign(static_cast<size_t>(n) + 1, 0);
  tree.children.assign(static_cast<size_t>(n) + 1, {});
  tree.depth.assign(static_cast<size_t>(n) + 1, -1);
  for (const Token& t : sentence.tokens) {
    if (t.head < 0 || t.head > n) {
      throw std::invalid_argument("validate_tree: head " + std::to_string(t.head) +
                                  " of token " + std::to_string(t.index) +
                                  " out of range");
    }
    if (t.head == t.index) {
      throw std::invalid_argument("validate_tree: token " + std::to_string(t.index) +
                                  " is its own head");
    }
    tree.parent[static_cast<size_t>(t.index)] = t.head;
    if (t.head == 0) {
      if (tree.root != 0) {
        throw std::invalid_argument("validate_tree: multiple roots (" +
                                    std::to_string(tree.root) + " and " +
                                    std::to_string(t.index) + ")");
      }
      tree.root = t.index;
    } else {
      tree.children[static_cast<size_t>(t.head)].push_back(t.index);
    }
  }
  if (tree.root == 0) throw std::invalid_argument("validate_tree: no root token");
  // Depth assignment doubles as the cycle check: a cycle never reaches root.
  for (int i = 1; i <= n; ++i) {
    int steps = 0;
    int v = i;
    while (v != 0 && tree.depth[static_cast<size_t>(v)] < 0) {
      if (++steps > n) {
        throw std::invalid_argument("validate_tree: cycle through token " +
                                    std::to_string(i));
      }
      v = tree.parent[static_cast<size_t>(v)];
    }
    int base = (v == 0) ? -1 : tree.depth[static_cast<size_t>(v)];
    // Walk again, assigning depths down to where we stopped.
    int d = base + steps;
    v = i;
    while (v != 0 && tree.depth[static_cast<size_t>(v)] < 0) {
      tree.depth[static_cast<size_t>(v)] = d--;
      v = tree.parent[static_cast<size_t>(v)];
    }
  }
  for (auto& c : tree.children) std::sort(c.begin(), c.end());
  return tree;
}

int lca(const DepTree& tree, int a, int b) {
  while (a != b) {
    if (tree.depth[static_cast<size_t>(a)] >= tree.depth[static_cast<size_t>(b)]) {
      a = tree.parent[static_cast<size_t>(a)];
    } else {
      b = tree.parent[static_cast<size_t>(b)];
    }
  }
  return a;
}

std::vector<int> shortest_path(const DepTree& tree, int a, int b) {
  int anchor = lca(tree, a, b);
  std::vector<int> up, down;
  for (int v = a; v != anchor; v = tree.parent[static_cast<size_t>(v)]) up.push_back(v);
  up.push_back(anchor);
  for (int v = b; v != anchor; v = tree.parent[static_cast<size_t>(v)]) down.push_back(v);
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

StructureKind parse_structure_kind(const std::string& name) {
  if (name == "sptree") return StructureKind::kSPTree;
  if (name == "subtree") return StructureKind::kSubTree;
  if (name == "fulltree") return StructureKind::kFullTree;
  throw std::invalid_argument("unknown structure kind: " + name +
                              " (expected sptree, subtree, or fulltree)");
}

std::string structure_kind_name(StructureKind kind) {
  switch (kind) {
    case StructureKind::kSPTree: return "sptree";
    case StructureKind::kSubTree: return "subtree";
    case StructureKind::kFullTree: return "fulltree";
  }
  return "?";
}

PathStructure extract_structure(const DepTree& tree, int first, int second,
                                StructureKind kind) {
  if (first < 1 || first > tree.n || second < 1 || second > tree.n) {
    throw std::invalid_argument("extract_structure: target out of range");
  }
  PathStructure ps;
  ps.kind = kind;
  ps.first = first;
  ps.second = second;
  ps.anchor = lca(tree, first, second);
  ps.in_structure.assign(static_cast<size_t>(tree.n) + 1, false);
  ps.node_type.assign(static_cast<size_t>(tree.n) + 1, kOffPath);
  ps.parent.assign(static_cast<size_t>(tree.n) + 1, 0);
  ps.children.assign(static_cast<size_t>(tree.n) + 1, {});

  std::vector<int> path = shortest_path(tree, first, second);
  std::vector<bool> on_path(static_cast<size_t>(tree.n) + 1, false);
  for (int v : path) on_path[static_cast<size_t>(v)] = true;

  switch (kind) {
    case StructureKind::kSPTree:
      for (int v : path) ps.in_structure[static_cast<size_t>(v)] = true;
      ps.root = ps.anchor;
      break;
    case StructureKind::kSubTree: {
      // All descendants of the anchor, inclusive.
      std::vector<int> stack = {ps.anchor};
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ps.in_structure[static_cast<size_t>(v)] = true;
        for (int c : tree.children[static_cast<size_t>(v)]) stack.push_back(c);
      }
      ps.root = ps.anchor;
      break;
    }
    case StructureKind::kFullTree:
      for (int v = 1; v <= tree.n; ++v) ps.in_structure[static_cast<size_t>(v)] = true;
      ps.root = tree.root;
      break;
  }

  for (int v = 1; v <= tree.n; ++v) {
    if (!ps.in_structure[static_cast<size_t>(v)]) continue;
    ps.nodes.push_back(v);
    ps.node_type[static_cast<size_t>(v)] = on_path[static_cast<size_t>(v)] ? kOnPath : kOffPath;
    int p = tree.parent[static_cast<size_t>(v)];
    if (v != ps.root && p != 0 && ps.in_structure[static_cast<size_t>(p)]) {
      ps.parent[static_cast<size_t>(v)] = p;
      ps.children[static_cast<size_t>(p)].push_back(v);
    }
  }
  for (auto& c : ps.children) std::sort(c.begin(), c.end());
  return ps;
}

}  // namespace relex
