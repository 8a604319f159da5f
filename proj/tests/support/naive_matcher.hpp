#pragma once

// Independent template-matching oracle: explicit pattern tables, ordered
// tuple enumeration, and its own maximality filter. Kept deliberately naive.

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <cello/causal_graph.hpp>
#include <cello/rng.hpp>
#include <cello/template_match.hpp>

namespace naive {

struct Pattern {
  cello::GraphKind kind;
  std::vector<std::string> roles;
  std::vector<std::pair<size_t, size_t>> edges;  // role index pairs
};

inline const std::vector<Pattern>& patterns() {
  static const std::vector<Pattern> kPatterns = {
      {cello::GraphKind::Direct, {"A", "B"}, {{0, 1}}},
      {cello::GraphKind::Chain, {"A", "B", "C"}, {{0, 1}, {1, 2}}},
      {cello::GraphKind::Collision, {"A", "B", "Y"}, {{0, 2}, {1, 2}}},
      {cello::GraphKind::Confounding, {"W", "M", "Y"}, {{0, 1}, {0, 2}, {1, 2}}},
  };
  return kPatterns;
}

inline void tuples(const std::vector<std::string>& nodes, size_t k, std::vector<size_t>& cur,
                   std::vector<std::vector<size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (std::find(cur.begin(), cur.end(), i) != cur.end()) continue;
    cur.push_back(i);
    tuples(nodes, k, cur, out);
    cur.pop_back();
  }
}

inline std::vector<cello::TemplateMatch> naive_matches(const cello::CausalGraph& g) {
  const std::vector<std::string> nodes = g.nodes();
  std::set<cello::TemplateMatch> raw;
  for (const Pattern& p : patterns()) {
    std::vector<std::vector<size_t>> arrangements;
    std::vector<size_t> cur;
    tuples(nodes, p.roles.size(), cur, arrangements);
    for (const auto& a : arrangements) {
      bool ok = true;
      for (size_t i = 0; ok && i < a.size(); ++i) {
        for (size_t j = 0; ok && j < a.size(); ++j) {
          if (i == j) continue;
          bool want = std::find(p.edges.begin(), p.edges.end(), std::make_pair(i, j)) !=
                      p.edges.end();
          if (g.has_edge(nodes[a[i]], nodes[a[j]]) != want) ok = false;
        }
      }
      if (!ok) continue;
      cello::TemplateMatch m;
      m.kind = p.kind;
      for (size_t i = 0; i < p.roles.size(); ++i) m.roles[p.roles[i]] = nodes[a[i]];
      if (m.kind == cello::GraphKind::Collision && m.roles["A"] > m.roles["B"])
        std::swap(m.roles["A"], m.roles["B"]);
      raw.insert(m);
    }
  }
  std::vector<cello::TemplateMatch> kept;
  for (const auto& m : raw) {
    auto mine = m.node_set();
    bool absorbed = false;
    for (const auto& other : raw) {
      auto theirs = other.node_set();
      if (mine.size() >= theirs.size()) continue;
      if (std::includes(theirs.begin(), theirs.end(), mine.begin(), mine.end())) {
        absorbed = true;
        break;
      }
    }
    if (!absorbed) kept.push_back(m);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

/// Seeded random DAG over ids "n0".."n{k-1}" with edges only from lower to
/// higher index, matching the generator used by the matcher equivalence runs.
inline cello::CausalGraph random_dag(cello::Rng& rng, size_t max_nodes) {
  size_t k = 2 + rng.below(max_nodes - 1);
  cello::CausalGraph g;
  for (size_t i = 0; i < k; ++i) {
    std::string id = "n" + std::to_string(i);
    g.add_node(id, "entity" + std::to_string(i));
  }
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i + 1; j < k; ++j)
      if (rng.below(100) < 35)
        g.must_add_edge(cello::CausalEdge{"n" + std::to_string(i), "n" + std::to_string(j), "on",
                                          cello::VerbClass::Support, true});
  return g;
}

}  // namespace naive
