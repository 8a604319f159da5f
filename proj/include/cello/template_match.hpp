#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "causal_graph.hpp"
#include "errors.hpp"

namespace cello {

/// The four causal structures questions are built over, in canonical order.
enum class GraphKind { Direct, Confounding, Collision, Chain };

inline const char* to_string(GraphKind k) {
  switch (k) {
    case GraphKind::Direct: return "direct";
    case GraphKind::Confounding: return "confounding";
    case GraphKind::Collision: return "collision";
    case GraphKind::Chain: return "chain";
  }
  return "direct";
}

inline GraphKind graph_kind_from_string(const std::string& s) {
  if (s == "direct") return GraphKind::Direct;
  if (s == "confounding") return GraphKind::Confounding;
  if (s == "collision") return GraphKind::Collision;
  if (s == "chain") return GraphKind::Chain;
  fail(ErrorKind::ConfigError, "unknown graph kind '" + s + "'");
}

/// Short tag used inside record ids.
inline const char* kind_tag(GraphKind k) {
  switch (k) {
    case GraphKind::Direct: return "dir";
    case GraphKind::Confounding: return "cnf";
    case GraphKind::Collision: return "col";
    case GraphKind::Chain: return "chn";
  }
  return "dir";
}

/// One occurrence of a template in a causal graph. Role names:
///   Direct       A -> B
///   Confounding  W -> M, W -> Y, M -> Y
///   Collision    A -> Y <- B          (A < B by node id)
///   Chain        A -> B -> C
struct TemplateMatch {
  GraphKind kind;
  std::map<std::string, std::string> roles;

  const std::string& role(const std::string& name) const {
    auto it = roles.find(name);
    if (it == roles.end())
      fail(ErrorKind::UnknownTarget, std::string("match has no role ") + name);
    return it->second;
  }

  std::set<std::string> node_set() const {
    std::set<std::string> out;
    for (const auto& [role, id] : roles) out.insert(id);
    return out;
  }

  /// Role bindings in a fixed per-kind order; used for deterministic sorting.
  std::vector<std::string> ordered_nodes() const {
    static const std::map<GraphKind, std::vector<std::string>> kOrder = {
        {GraphKind::Direct, {"A", "B"}},
        {GraphKind::Confounding, {"W", "M", "Y"}},
        {GraphKind::Collision, {"A", "B", "Y"}},
        {GraphKind::Chain, {"A", "B", "C"}},
    };
    std::vector<std::string> out;
    for (const auto& r : kOrder.at(kind)) out.push_back(role(r));
    return out;
  }

  bool operator==(const TemplateMatch& other) const {
    return kind == other.kind && roles == other.roles;
  }

  bool operator<(const TemplateMatch& other) const {
    if (kind != other.kind) return kind < other.kind;
    return ordered_nodes() < other.ordered_nodes();
  }
};

namespace detail {

/// Matches over 2- and 3-node subsets as induced subgraph isomorphisms.
/// Each subset yields at most one match; role assignment is unique up to the
/// collision A/B symmetry, which is canonicalized by node id.
inline std::vector<TemplateMatch> raw_matches(const CausalGraph& g) {
  std::vector<TemplateMatch> out;
  std::vector<std::string> ids = g.nodes();
  const size_t n = ids.size();

  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const std::string &a = ids[i], &b = ids[j];
      if (g.has_edge(a, b) && !g.has_edge(b, a))
        out.push_back({GraphKind::Direct, {{"A", a}, {"B", b}}});
      else if (g.has_edge(b, a) && !g.has_edge(a, b))
        out.push_back({GraphKind::Direct, {{"A", b}, {"B", a}}});
    }
  }

  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      for (size_t k = j + 1; k < n; ++k) {
        std::vector<std::string> tri{ids[i], ids[j], ids[k]};
        // Count induced edges and degrees within the triple.
        std::vector<std::pair<int, int>> edges;
        for (int s = 0; s < 3; ++s)
          for (int t = 0; t < 3; ++t)
            if (s != t && g.has_edge(tri[s], tri[t])) edges.push_back({s, t});

        if (edges.size() == 3) {
          // Triangle: unique roles by degree (W out 2, Y in 2, M both 1).
          int outdeg[3] = {0, 0, 0}, indeg[3] = {0, 0, 0};
          for (auto [s, t] : edges) {
            ++outdeg[s];
            ++indeg[t];
          }
          int w = -1, m = -1, y = -1;
          for (int v = 0; v < 3; ++v) {
            if (outdeg[v] == 2 && indeg[v] == 0) w = v;
            if (outdeg[v] == 1 && indeg[v] == 1) m = v;
            if (outdeg[v] == 0 && indeg[v] == 2) y = v;
          }
          if (w >= 0 && m >= 0 && y >= 0)
            out.push_back({GraphKind::Confounding,
                           {{"W", tri[w]}, {"M", tri[m]}, {"Y", tri[y]}}});
        } else if (edges.size() == 2) {
          auto [s1, t1] = edges[0];
          auto [s2, t2] = edges[1];
          if (t1 == s2 && s1 != t2) {
            out.push_back({GraphKind::Chain,
                           {{"A", tri[s1]}, {"B", tri[t1]}, {"C", tri[t2]}}});
          } else if (t2 == s1 && s2 != t1) {
            out.push_back({GraphKind::Chain,
                           {{"A", tri[s2]}, {"B", tri[t2]}, {"C", tri[t1]}}});
          } else if (t1 == t2 && s1 != s2) {
            std::string a = tri[s1], b = tri[s2];
            if (b < a) std::swap(a, b);
            out.push_back({GraphKind::Collision,
                           {{"A", a}, {"B", b}, {"Y", tri[t1]}}});
          }
          // Two edges out of a shared source (a fork) is not a template.
        }
      }
    }
  }
  return out;
}

}  // namespace detail

/// All template occurrences, filtered to maximal node sets: a match whose
/// nodes are a strict subset of another match's nodes is absorbed by the
/// larger structure (the A->B inside a confounding triangle is not reported
/// as a separate direct pattern). Output order: kind, then role nodes.
inline std::vector<TemplateMatch> find_template_matches(const CausalGraph& g) {
  std::vector<TemplateMatch> raw = detail::raw_matches(g);
  std::vector<TemplateMatch> kept;
  for (const auto& m : raw) {
    std::set<std::string> mset = m.node_set();
    bool absorbed = false;
    for (const auto& other : raw) {
      std::set<std::string> oset = other.node_set();
      if (mset.size() < oset.size() &&
          std::includes(oset.begin(), oset.end(), mset.begin(), mset.end())) {
        absorbed = true;
        break;
      }
    }
    if (!absorbed) kept.push_back(m);
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  return kept;
}

}  // namespace cello
