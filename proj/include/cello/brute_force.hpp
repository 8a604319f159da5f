#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "causal_graph.hpp"
#include "errors.hpp"
#include "tasks.hpp"
#include "template_match.hpp"

namespace cello::reference {

/// Reference oracle that avoids the production evaluation path entirely:
/// model evaluation is exhaustive assignment enumeration, cause tests are
/// interventional contrasts, and set answers come from first principles.
/// Exponential in node count; only for validation.

constexpr size_t kMaxNodes = 12;

inline void check_size(const CausalGraph& g) {
  if (g.node_count() > kMaxNodes)
    fail(ErrorKind::TooLarge, "reference oracle handles at most " +
                                  std::to_string(kMaxNodes) + " nodes, got " +
                                  std::to_string(g.node_count()));
}

/// Solves the model by scanning all 2^n total assignments for the unique one
/// consistent with every structural equation and intervention. Shares no
/// logic with the production topological evaluator.
inline std::map<std::string, bool> solve(const CausalGraph& g,
                                             const std::map<std::string, bool>& interventions = {}) {
  check_size(g);
  std::vector<std::string> ids = g.nodes();
  const size_t n = ids.size();
  std::vector<std::map<std::string, bool>> consistent;
  for (unsigned long long bits = 0; bits < (1ull << n); ++bits) {
    std::map<std::string, bool> values;
    for (size_t i = 0; i < n; ++i) values[ids[i]] = ((bits >> i) & 1ull) != 0;
    bool ok = true;
    for (const auto& id : ids) {
      auto it = interventions.find(id);
      if (it != interventions.end()) {
        if (values[id] != it->second) { ok = false; break; }
        continue;
      }
      bool expected = true;
      for (const auto& p : g.parents(id)) expected = expected && values[p];
      if (values[id] != expected) { ok = false; break; }
    }
    if (ok) consistent.push_back(std::move(values));
  }
  if (consistent.size() != 1)
    fail(ErrorKind::CyclicGraph, "model has " + std::to_string(consistent.size()) +
                                     " consistent solutions, expected exactly 1");
  return consistent.front();
}

/// c causes f iff forcing c down drags f down (baseline has everything up).
inline bool is_cause(const CausalGraph& g, const std::string& c, const std::string& f) {
  if (c == f) return false;
  return !solve(g, {{c, false}}).at(f);
}

/// c directly causes f iff disrupting c still disrupts f with every other
/// node pinned up, which cuts all indirect routes.
inline bool is_direct_cause(const CausalGraph& g, const std::string& c, const std::string& f) {
  if (c == f) return false;
  std::map<std::string, bool> iv;
  for (const auto& id : g.nodes())
    if (id != f) iv[id] = (id != c);
  return !solve(g, iv).at(f);
}

/// All simple directed paths from a to b, as node sequences.
inline void collect_paths(const CausalGraph& g, const std::string& cur, const std::string& goal,
                          std::vector<std::string>& stack, std::vector<std::vector<std::string>>& out) {
  stack.push_back(cur);
  if (cur == goal) {
    out.push_back(stack);
  } else {
    for (const auto& c : g.children(cur))
      if (std::find(stack.begin(), stack.end(), c) == stack.end())
        collect_paths(g, c, goal, stack, out);
  }
  stack.pop_back();
}

/// Shortest directed path length by explicit path enumeration; -1 if none.
inline int path_distance(const CausalGraph& g, const std::string& a, const std::string& b) {
  std::vector<std::vector<std::string>> paths;
  std::vector<std::string> stack;
  collect_paths(g, a, b, stack, paths);
  int best = -1;
  for (const auto& p : paths) {
    int len = static_cast<int>(p.size()) - 1;
    if (best < 0 || len < best) best = len;
  }
  return best;
}

namespace backdoor {

struct Step {
  std::string node;
  bool arrow_into_next;  // node -> next (true) or node <- next (false)
};

/// Undirected simple paths from a to b as edge-direction sequences.
inline void walk(const CausalGraph& g, const std::string& cur, const std::string& goal,
                 std::vector<Step>& stack, std::set<std::string>& used,
                 std::vector<std::vector<Step>>& out) {
  if (cur == goal) {
    auto path = stack;
    path.push_back({goal, false});
    out.push_back(std::move(path));
    return;
  }
  for (const auto& next : g.nodes()) {
    if (used.count(next)) continue;
    bool fwd = g.has_edge(cur, next);
    bool bwd = g.has_edge(next, cur);
    if (!fwd && !bwd) continue;
    // A DAG pair has at most one direction.
    used.insert(next);
    stack.push_back({cur, fwd});
    walk(g, next, goal, stack, used, out);
    stack.pop_back();
    used.erase(next);
  }
}

inline bool is_collider_at(const std::vector<Step>& path, size_t i) {
  // Node i (interior) is a collider when both adjacent arrows point at it.
  return path[i - 1].arrow_into_next && !path[i].arrow_into_next;
}

inline bool blocks(const CausalGraph& g, const std::vector<Step>& path,
                   const std::set<std::string>& z) {
  for (size_t i = 1; i + 1 < path.size(); ++i) {
    const std::string& v = path[i].node;
    if (is_collider_at(path, i)) {
      bool opened = z.count(v) != 0;
      for (const auto& d : g.descendants(v))
        if (z.count(d)) opened = true;
      if (!opened) return true;
    } else {
      if (z.count(v)) return true;
    }
  }
  return false;
}

}  // namespace backdoor

/// Smallest set satisfying the backdoor criterion for (treatment, outcome):
/// no member descends from the treatment, and every path entering the
/// treatment through a parent is blocked. Ties break lexicographically.
inline std::vector<std::string> minimal_backdoor_set(const CausalGraph& g,
                                                     const std::string& treatment,
                                                     const std::string& outcome) {
  check_size(g);
  std::set<std::string> banned = g.descendants(treatment);
  banned.insert(treatment);
  banned.insert(outcome);
  std::vector<std::string> candidates;
  for (const auto& id : g.nodes())
    if (!banned.count(id)) candidates.push_back(id);

  std::vector<std::vector<backdoor::Step>> paths;
  {
    std::vector<backdoor::Step> stack;
    std::set<std::string> used{treatment};
    backdoor::walk(g, treatment, outcome, stack, used, paths);
  }
  std::vector<std::vector<backdoor::Step>> into_treatment;
  for (const auto& p : paths)
    if (!p.empty() && !p.front().arrow_into_next) into_treatment.push_back(p);

  std::vector<std::vector<std::string>> valid;
  const size_t n = candidates.size();
  for (unsigned long long bits = 0; bits < (1ull << n); ++bits) {
    std::set<std::string> z;
    for (size_t i = 0; i < n; ++i)
      if ((bits >> i) & 1ull) z.insert(candidates[i]);
    bool ok = true;
    for (const auto& p : into_treatment)
      if (!backdoor::blocks(g, p, z)) { ok = false; break; }
    if (ok) valid.push_back({z.begin(), z.end()});
  }
  if (valid.empty())
    fail(ErrorKind::UnknownTarget, "no valid backdoor set for " + treatment + " -> " + outcome);
  std::sort(valid.begin(), valid.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return valid.front();
}

inline std::vector<std::string> answer_entities(const CausalGraph& g, const TemplateMatch& m,
                                                TaskKind t, const std::string& focus) {
  check_size(g);
  std::set<std::string> out;
  switch (t) {
    case TaskKind::CaI:
      for (const auto& id : g.nodes())
        if (is_cause(g, id, focus)) out.insert(id);
      break;
    case TaskKind::CA:
      for (const auto& id : g.nodes())
        if (is_cause(g, id, focus) && path_distance(g, id, focus) >= 2) out.insert(id);
      break;
    case TaskKind::AR:
      for (const auto& id : g.nodes())
        if (is_cause(g, focus, id) && path_distance(g, focus, id) >= 2) out.insert(id);
      break;
    case TaskKind::CB:
    case TaskKind::CoI:
      for (const auto& id : g.nodes())
        if (is_direct_cause(g, id, focus)) out.insert(id);
      break;
    case TaskKind::BAS: {
      auto z = minimal_backdoor_set(g, m.role("M"), m.role("Y"));
      out.insert(z.begin(), z.end());
      break;
    }
    default:
      fail(ErrorKind::IncompatibleTask, "not a choice task");
  }
  return {out.begin(), out.end()};
}

/// Necessity over root-worlds: the focus is a necessary cause of the effect
/// iff it is down in every consistent world where the effect is down, and at
/// least one such world exists.
inline bool necessary_cause(const CausalGraph& g, const std::string& focus,
                            const std::string& effect) {
  check_size(g);
  std::vector<std::string> roots;
  for (const auto& id : g.nodes())
    if (g.parents(id).empty()) roots.push_back(id);
  bool any_world = false;
  for (unsigned long long bits = 0; bits < (1ull << roots.size()); ++bits) {
    std::map<std::string, bool> iv;
    for (size_t i = 0; i < roots.size(); ++i) iv[roots[i]] = ((bits >> i) & 1ull) != 0;
    auto values = solve(g, iv);
    if (values.at(effect)) continue;
    any_world = true;
    if (values.at(focus)) return false;
  }
  return any_world;
}

inline bool answer_binary(const CausalGraph& g, const TemplateMatch& m, TaskKind t,
                          const std::string& focus) {
  check_size(g);
  auto roles = [&]() -> std::array<std::string, 3> {
    if (m.kind == GraphKind::Confounding) return {m.role("W"), m.role("M"), m.role("Y")};
    return {m.role("A"), m.role("B"), m.role("C")};
  };
  switch (t) {
    case TaskKind::CDE: {
      auto [tr, md, oc] = roles();
      return !solve(g, {{tr, true}, {md, false}}).at(oc);
    }
    case TaskKind::CR:
      return solve(g, {{focus, false}}).at(m.role("B"));
    case TaskKind::NDE: {
      auto [tr, md, oc] = roles();
      bool natural = solve(g).at(md);
      return !solve(g, {{tr, false}, {md, natural}}).at(oc);
    }
    case TaskKind::NIE: {
      auto [tr, md, oc] = roles();
      bool counterfactual = solve(g, {{tr, false}}).at(md);
      return solve(g, {{tr, true}, {md, counterfactual}}).at(oc);
    }
    case TaskKind::SC:
      return !solve(g, {{focus, false}}).at(m.role("Y"));
    case TaskKind::NC:
      return necessary_cause(g, focus, m.role("Y"));
    default:
      fail(ErrorKind::IncompatibleTask, "not a binary task");
  }
}

}  // namespace cello::reference
