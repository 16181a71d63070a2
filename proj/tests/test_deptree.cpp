#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <queue>
#include <random>
#include <set>

#include "relex/corpus.h"
#include "relex/deptree.h"

using namespace relex;

namespace {

Sentence make_sentence(const std::vector<int>& heads) {
  Sentence s;
  for (size_t i = 0; i < heads.size(); ++i) {
    Token t;
    t.index = static_cast<int>(i) + 1;
    t.form = "w" + std::to_string(t.index);
    t.pos = "X";
    t.head = heads[i];
    t.deprel = "dep";
    s.tokens.push_back(t);
  }
  return s;
}

Sentence random_tree_sentence(int n, std::mt19937& rng) {
  std::vector<int> parent(static_cast<size_t>(n) + 1, 0);
  for (int i = 2; i <= n; ++i) {
    parent[static_cast<size_t>(i)] = std::uniform_int_distribution<int>(1, i - 1)(rng);
  }
  std::vector<int> label(static_cast<size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) label[static_cast<size_t>(i)] = i;
  std::shuffle(label.begin() + 1, label.end(), rng);
  std::vector<int> heads(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) {
    int head = (i == 1) ? 0 : label[static_cast<size_t>(parent[static_cast<size_t>(i)])];
    heads[static_cast<size_t>(label[static_cast<size_t>(i)]) - 1] = head;
  }
  return make_sentence(heads);
}

// Brute-force LCA: intersect full root paths.
int lca_brute(const DepTree& t, int a, int b) {
  std::vector<int> path;
  for (int v = a; v != 0; v = t.parent[static_cast<size_t>(v)]) path.push_back(v);
  std::set<int> on_a(path.begin(), path.end());
  for (int v = b; v != 0; v = t.parent[static_cast<size_t>(v)]) {
    if (on_a.count(v)) return v;
  }
  return 0;
}

// BFS shortest path on the undirected tree.
std::vector<int> path_bfs(const DepTree& t, int a, int b) {
  std::vector<std::vector<int>> adj(static_cast<size_t>(t.n) + 1);
  for (int v = 1; v <= t.n; ++v) {
    int p = t.parent[static_cast<size_t>(v)];
    if (p != 0) {
      adj[static_cast<size_t>(v)].push_back(p);
      adj[static_cast<size_t>(p)].push_back(v);
    }
  }
  std::vector<int> prev(static_cast<size_t>(t.n) + 1, -1);
  std::queue<int> q;
  q.push(a);
  prev[static_cast<size_t>(a)] = a;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    if (v == b) break;
    for (int w : adj[static_cast<size_t>(v)]) {
      if (prev[static_cast<size_t>(w)] < 0) {
        prev[static_cast<size_t>(w)] = v;
        q.push(w);
      }
    }
  }
  std::vector<int> path;
  for (int v = b; v != a; v = prev[static_cast<size_t>(v)]) path.push_back(v);
  path.push_back(a);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

TEST_CASE("validate_tree accepts chains and rejects malformed input") {
  DepTree t = validate_tree(make_sentence({2, 0}));
  CHECK(t.root == 2);
  CHECK(t.parent[1] == 2);
  CHECK(t.depth[2] == 0);
  CHECK(t.depth[1] == 1);

  CHECK_THROWS_WITH_AS(validate_tree(make_sentence({1})), doctest::Contains("own head"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(validate_tree(make_sentence({0, 0})),
                       doctest::Contains("multiple roots"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(validate_tree(make_sentence({2, 3, 0, 7})),
                       doctest::Contains("out of range"), std::invalid_argument);
  // 2 and 3 form a cycle hanging off nothing
  CHECK_THROWS_WITH_AS(validate_tree(make_sentence({0, 3, 2})), doctest::Contains("cycle"),
                       std::invalid_argument);
}

TEST_CASE("lca basics") {
  // 1 <- 2 <- 3 (root 3), plus 4 under 2
  DepTree t = validate_tree(make_sentence({2, 3, 0, 2}));
  CHECK(lca(t, 1, 1) == 1);
  CHECK(lca(t, 2, 1) == 2);  // ancestor case
  CHECK(lca(t, 1, 4) == 2);
  CHECK(lca(t, 1, 3) == 3);
}

TEST_CASE("lca and shortest_path match brute force on 200 random trees") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    int n = std::uniform_int_distribution<int>(2, 30)(rng);
    Sentence s = random_tree_sentence(n, rng);
    DepTree t = validate_tree(s);
    for (int probe = 0; probe < 5; ++probe) {
      int a = std::uniform_int_distribution<int>(1, n)(rng);
      int b = std::uniform_int_distribution<int>(1, n)(rng);
      REQUIRE(lca(t, a, b) == lca_brute(t, a, b));
      REQUIRE(shortest_path(t, a, b) == path_bfs(t, a, b));
    }
  }
}

TEST_CASE("shortest path on the born-in example") {
  // "Sidney Yates was born in Chicago ." with the prepositional attachment
  // through born -> in -> Chicago.
  Sentence s;
  auto add = [&](const char* form, const char* pos, int head, const char* rel) {
    Token t;
    t.index = s.size() + 1;
    t.form = form;
    t.pos = pos;
    t.head = head;
    t.deprel = rel;
    s.tokens.push_back(t);
  };
  add("Sidney", "NNP", 2, "nn");
  add("Yates", "NNP", 4, "nsubjpass");
  add("was", "VBD", 4, "auxpass");
  add("born", "VBN", 0, "root");
  add("in", "IN", 4, "prep");
  add("Chicago", "NNP", 5, "pobj");
  add(".", ".", 4, "punct");
  DepTree t = validate_tree(s);
  std::vector<int> path = shortest_path(t, 2, 6);
  CHECK(path == std::vector<int>{2, 4, 5, 6});  // Yates born in Chicago

  CHECK(shortest_path(t, 3, 3) == std::vector<int>{3});
}

TEST_CASE("extract_structure kinds and typing") {
  // chain 1 <- 2 <- 3 with root 3
  DepTree chain = validate_tree(make_sentence({2, 3, 0}));
  PathStructure sp = extract_structure(chain, 1, 3, StructureKind::kSPTree);
  CHECK(sp.nodes == std::vector<int>{1, 2, 3});
  CHECK(sp.anchor == 3);
  CHECK(sp.root == 3);
  for (int v : sp.nodes) CHECK(sp.node_type[static_cast<size_t>(v)] == kOnPath);

  // full tree contains every token
  std::mt19937 rng(3);
  Sentence s = random_tree_sentence(9, rng);
  DepTree t = validate_tree(s);
  PathStructure full = extract_structure(t, 1, 2, StructureKind::kFullTree);
  CHECK(full.nodes.size() == 9);
  CHECK(full.root == t.root);

  CHECK_THROWS_AS(extract_structure(t, 0, 2, StructureKind::kSPTree),
                  std::invalid_argument);
}

TEST_CASE("subtree equals brute-force descendant enumeration; nesting holds") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    int n = std::uniform_int_distribution<int>(2, 30)(rng);
    Sentence s = random_tree_sentence(n, rng);
    DepTree t = validate_tree(s);
    int a = std::uniform_int_distribution<int>(1, n)(rng);
    int b = std::uniform_int_distribution<int>(1, n)(rng);
    if (a == b) continue;
    PathStructure sp = extract_structure(t, a, b, StructureKind::kSPTree);
    PathStructure sub = extract_structure(t, a, b, StructureKind::kSubTree);
    PathStructure full = extract_structure(t, a, b, StructureKind::kFullTree);

    // Brute-force descendants of the anchor.
    int anchor = lca(t, a, b);
    std::set<int> want;
    for (int v = 1; v <= n; ++v) {
      for (int u = v; u != 0; u = t.parent[static_cast<size_t>(u)]) {
        if (u == anchor) {
          want.insert(v);
          break;
        }
      }
    }
    std::set<int> got(sub.nodes.begin(), sub.nodes.end());
    REQUIRE(got == want);

    // SPTree subset SubTree subset FullTree.
    std::set<int> sp_set(sp.nodes.begin(), sp.nodes.end());
    std::set<int> full_set(full.nodes.begin(), full.nodes.end());
    CHECK(std::includes(got.begin(), got.end(), sp_set.begin(), sp_set.end()));
    CHECK(std::includes(full_set.begin(), full_set.end(), got.begin(), got.end()));

    // ON_PATH nodes identical across kinds; SPTree all on-path.
    auto path = shortest_path(t, a, b);
    std::set<int> on_path(path.begin(), path.end());
    REQUIRE(sp_set == on_path);
    CHECK(path.front() == a);
    CHECK(path.back() == b);
    for (int v : sp.nodes) CHECK(sp.node_type[static_cast<size_t>(v)] == kOnPath);
    for (int v : sub.nodes) {
      CHECK((sub.node_type[static_cast<size_t>(v)] == kOnPath) == (on_path.count(v) > 0));
      CHECK(sub.node_type[static_cast<size_t>(v)] ==
            full.node_type[static_cast<size_t>(v)]);
    }

    // Every node reaches the structure root through restricted parents.
    for (const PathStructure* ps : {&sp, &sub, &full}) {
      for (int v : ps->nodes) {
        int steps = 0, u = v;
        while (u != ps->root && steps <= n) {
          u = ps->parent[static_cast<size_t>(u)];
          REQUIRE(u != 0);
          ++steps;
        }
        CHECK(u == ps->root);
      }
    }
  }
}

TEST_CASE("degenerate single-node structure") {
  DepTree chain = validate_tree(make_sentence({2, 3, 0}));
  PathStructure one = extract_structure(chain, 2, 2, StructureKind::kSPTree);
  CHECK(one.nodes == std::vector<int>{2});
  CHECK(one.anchor == 2);
  CHECK(one.root == 2);
}
