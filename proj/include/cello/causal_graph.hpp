#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"

namespace cello {

/// Coarse semantic class of a sustaining relation; drives phrasing choices
/// (state descriptions, failure verbs) during question generation.
enum class VerbClass { Support, Hold, Attach, Generic };

inline const char* to_string(VerbClass v) {
  switch (v) {
    case VerbClass::Support: return "support";
    case VerbClass::Hold: return "hold";
    case VerbClass::Attach: return "attach";
    case VerbClass::Generic: return "generic";
  }
  return "generic";
}

inline VerbClass verb_class_from_string(const std::string& s) {
  if (s == "support") return VerbClass::Support;
  if (s == "hold") return VerbClass::Hold;
  if (s == "attach") return VerbClass::Attach;
  if (s == "generic") return VerbClass::Generic;
  fail(ErrorKind::ConfigError, "unknown verb class '" + s + "'");
}

/// Directed edge cause -> effect: the cause physically sustains the effect.
/// `reversed` records the original surface orientation: true means the scene
/// relation read effect-predicate-cause ("books on shelf"), false means it
/// read cause-predicate-effect ("shelf supports books").
struct CausalEdge {
  std::string cause;
  std::string effect;
  std::string predicate;
  VerbClass verb_class = VerbClass::Generic;
  bool reversed = true;
};

enum class AddEdgeResult { Added, Duplicate, SelfLoop, WouldCycle };

/// DAG of sustaining relations between scene entities. Node ids are entity
/// ids; every mutation preserves acyclicity (cycle-creating edges are
/// rejected, not applied).
class CausalGraph {
 public:
  void add_node(const std::string& id, const std::string& name) {
    if (names_.emplace(id, name).second) node_ids_.insert(id);
  }

  AddEdgeResult add_edge(const CausalEdge& e) {
    if (!names_.count(e.cause) || !names_.count(e.effect))
      fail(ErrorKind::UnknownEntity, "edge endpoint not a node: " + e.cause + " -> " + e.effect);
    if (e.cause == e.effect) return AddEdgeResult::SelfLoop;
    if (has_edge(e.cause, e.effect)) return AddEdgeResult::Duplicate;
    if (reaches(e.effect, e.cause)) return AddEdgeResult::WouldCycle;
    edges_.push_back(e);
    edge_set_.insert(key(e.cause, e.effect));
    return AddEdgeResult::Added;
  }

  void must_add_edge(const CausalEdge& e) {
    AddEdgeResult r = add_edge(e);
    if (r == AddEdgeResult::WouldCycle)
      fail(ErrorKind::CyclicGraph, "edge would create a cycle: " + e.cause + " -> " + e.effect);
    if (r == AddEdgeResult::SelfLoop)
      fail(ErrorKind::CyclicGraph, "self loop rejected: " + e.cause);
  }

  bool contains(const std::string& id) const { return names_.count(id) != 0; }

  const std::string& name_of(const std::string& id) const {
    auto it = names_.find(id);
    if (it == names_.end()) fail(ErrorKind::UnknownEntity, "no node with id " + id);
    return it->second;
  }

  /// Node ids in lexicographic order.
  std::vector<std::string> nodes() const {
    return std::vector<std::string>(node_ids_.begin(), node_ids_.end());
  }

  size_t node_count() const { return node_ids_.size(); }
  size_t edge_count() const { return edges_.size(); }

  /// Edges in insertion (corpus) order.
  const std::vector<CausalEdge>& edges() const { return edges_; }

  bool has_edge(const std::string& cause, const std::string& effect) const {
    return edge_set_.count(key(cause, effect)) != 0;
  }

  std::vector<std::string> parents(const std::string& id) const {
    std::set<std::string> out;
    for (const auto& e : edges_)
      if (e.effect == id) out.insert(e.cause);
    return {out.begin(), out.end()};
  }

  std::vector<std::string> children(const std::string& id) const {
    std::set<std::string> out;
    for (const auto& e : edges_)
      if (e.cause == id) out.insert(e.effect);
    return {out.begin(), out.end()};
  }

  std::set<std::string> ancestors(const std::string& id) const {
    std::set<std::string> seen;
    std::deque<std::string> frontier{id};
    while (!frontier.empty()) {
      std::string cur = frontier.front();
      frontier.pop_front();
      for (const auto& p : parents(cur))
        if (seen.insert(p).second) frontier.push_back(p);
    }
    return seen;
  }

  std::set<std::string> descendants(const std::string& id) const {
    std::set<std::string> seen;
    std::deque<std::string> frontier{id};
    while (!frontier.empty()) {
      std::string cur = frontier.front();
      frontier.pop_front();
      for (const auto& c : children(cur))
        if (seen.insert(c).second) frontier.push_back(c);
    }
    return seen;
  }

  /// Directed BFS distance from -> to; -1 when unreachable.
  int distance(const std::string& from, const std::string& to) const {
    if (from == to) return 0;
    std::map<std::string, int> dist{{from, 0}};
    std::deque<std::string> frontier{from};
    while (!frontier.empty()) {
      std::string cur = frontier.front();
      frontier.pop_front();
      for (const auto& c : children(cur)) {
        if (dist.count(c)) continue;
        dist[c] = dist[cur] + 1;
        if (c == to) return dist[c];
        frontier.push_back(c);
      }
    }
    return -1;
  }

  /// Kahn's algorithm with smallest-id-first tie breaking, so the order is
  /// identical across runs and platforms.
  std::vector<std::string> topo_order() const {
    std::map<std::string, int> indegree;
    for (const auto& id : node_ids_) indegree[id] = 0;
    for (const auto& e : edges_) ++indegree[e.effect];
    std::set<std::string> ready;
    for (const auto& [id, d] : indegree)
      if (d == 0) ready.insert(id);
    std::vector<std::string> order;
    while (!ready.empty()) {
      std::string cur = *ready.begin();
      ready.erase(ready.begin());
      order.push_back(cur);
      for (const auto& c : children(cur))
        if (--indegree[c] == 0) ready.insert(c);
    }
    if (order.size() != node_ids_.size())
      fail(ErrorKind::CyclicGraph, "graph contains a cycle");
    return order;
  }

  /// Incoming edges in insertion order; the first one fixes the phrasing
  /// class used when this node is the effect under discussion.
  std::vector<CausalEdge> incoming_edges(const std::string& id) const {
    std::vector<CausalEdge> out;
    for (const auto& e : edges_)
      if (e.effect == id) out.push_back(e);
    return out;
  }

  VerbClass verb_class_for(const std::string& id) const {
    auto in = incoming_edges(id);
    return in.empty() ? VerbClass::Generic : in.front().verb_class;
  }

  const CausalEdge* edge_between(const std::string& cause, const std::string& effect) const {
    for (const auto& e : edges_)
      if (e.cause == cause && e.effect == effect) return &e;
    return nullptr;
  }

 private:
  bool reaches(const std::string& from, const std::string& to) const {
    if (from == to) return true;
    std::set<std::string> seen{from};
    std::deque<std::string> frontier{from};
    while (!frontier.empty()) {
      std::string cur = frontier.front();
      frontier.pop_front();
      for (const auto& c : children(cur)) {
        if (c == to) return true;
        if (seen.insert(c).second) frontier.push_back(c);
      }
    }
    return false;
  }

  static std::string key(const std::string& a, const std::string& b) { return a + "\x1f" + b; }

  std::set<std::string> node_ids_;
  std::map<std::string, std::string> names_;
  std::vector<CausalEdge> edges_;
  std::set<std::string> edge_set_;
};

}  // namespace cello
