#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "causal_graph.hpp"
#include "errors.hpp"
#include "tasks.hpp"
#include "template_match.hpp"

namespace cello {

/// Boolean state of a scene entity: true = sustained (in place, stable),
/// false = disrupted (fallen, detached, removed).
using Assignment = std::map<std::string, bool>;

/// Evaluates the structural model under do-interventions. Semantics are
/// conjunctive: a root holds by itself, an inner node holds iff every parent
/// holds. An intervened node takes its forced value and its incoming edges
/// are severed.
inline Assignment propagate(const CausalGraph& g, const Assignment& interventions = {}) {
  for (const auto& [id, v] : interventions) {
    (void)v;
    if (!g.contains(id)) fail(ErrorKind::UnknownEntity, "intervention on unknown node " + id);
  }
  Assignment values;
  for (const auto& id : g.topo_order()) {
    auto it = interventions.find(id);
    if (it != interventions.end()) {
      values[id] = it->second;
      continue;
    }
    bool v = true;
    for (const auto& p : g.parents(id)) v = v && values.at(p);
    values[id] = v;
  }
  return values;
}

/// Treatment, mediator, outcome nodes for the mediation tasks, resolved from
/// the match's roles. Only the two mediating structures carry them.
struct MediationRoles {
  std::string treatment;
  std::string mediator;
  std::string outcome;
};

inline MediationRoles mediation_roles(const TemplateMatch& m) {
  if (m.kind == GraphKind::Confounding)
    return {m.role("W"), m.role("M"), m.role("Y")};
  if (m.kind == GraphKind::Chain)
    return {m.role("A"), m.role("B"), m.role("C")};
  fail(ErrorKind::IncompatibleTask,
       std::string("no mediation roles on a ") + to_string(m.kind) + " structure");
}

/// Focus entities a task may be asked about on a given match, in role order.
inline std::vector<std::string> valid_foci(const TemplateMatch& m, TaskKind t) {
  if (!task_compatible(m.kind, t))
    fail(ErrorKind::IncompatibleTask, std::string(to_string(t)) + " cannot be asked on a " +
                                          to_string(m.kind) + " structure");
  switch (t) {
    case TaskKind::CaI: return {m.role("B")};
    case TaskKind::CR: return {m.role("A")};
    case TaskKind::CoI: return {m.role("Y")};
    case TaskKind::BAS: return {m.role("Y")};
    case TaskKind::SC: return {m.role("W"), m.role("M")};
    case TaskKind::CB: return {m.role("Y")};
    case TaskKind::NC: return {m.role("A"), m.role("B")};
    case TaskKind::CA: return {m.role("C")};
    case TaskKind::AR: return {m.role("A")};
    case TaskKind::CDE:
      return {mediation_roles(m).mediator};
    case TaskKind::NDE:
    case TaskKind::NIE:
      return {mediation_roles(m).treatment};
  }
  return {};
}

inline void check_focus(const TemplateMatch& m, TaskKind t, const std::string& focus) {
  for (const auto& f : valid_foci(m, t))
    if (f == focus) return;
  fail(ErrorKind::UnknownTarget, std::string("entity ") + focus + " is not a valid focus for " +
                                     to_string(t) + " on this " + to_string(m.kind) + " structure");
}

namespace detail {

/// Common ancestors of a and b, excluding a and b themselves.
inline std::vector<std::string> common_ancestors(const CausalGraph& g, const std::string& a,
                                                 const std::string& b) {
  std::set<std::string> aa = g.ancestors(a);
  std::set<std::string> ab = g.ancestors(b);
  std::vector<std::string> out;
  for (const auto& id : aa)
    if (ab.count(id) && id != a && id != b) out.push_back(id);
  return out;
}

}  // namespace detail

/// Gold entity set for a multiple-choice task, in canonical order
/// (role-derived where the task fixes roles, otherwise node-id order).
inline std::vector<std::string> answer_entities(const CausalGraph& g, const TemplateMatch& m,
                                                TaskKind t, const std::string& focus) {
  check_focus(m, t, focus);
  if (is_binary(t))
    fail(ErrorKind::IncompatibleTask, std::string(to_string(t)) + " is a binary task");
  switch (t) {
    case TaskKind::CaI: {
      std::set<std::string> anc = g.ancestors(focus);
      return {anc.begin(), anc.end()};
    }
    case TaskKind::CA: {
      std::vector<std::string> out;
      for (const auto& id : g.ancestors(focus))
        if (g.distance(id, focus) >= 2) out.push_back(id);
      return out;
    }
    case TaskKind::AR: {
      std::vector<std::string> out;
      for (const auto& id : g.descendants(focus))
        if (g.distance(focus, id) >= 2) out.push_back(id);
      return out;
    }
    case TaskKind::CB:
      return g.parents(focus);
    case TaskKind::CoI: {
      // Direct cause first, then the confounders behind it.
      std::vector<std::string> out{m.role("M")};
      for (const auto& id : detail::common_ancestors(g, m.role("M"), m.role("Y")))
        out.push_back(id);
      return out;
    }
    case TaskKind::BAS:
      return detail::common_ancestors(g, m.role("M"), m.role("Y"));
    default:
      fail(ErrorKind::IncompatibleTask, "unhandled task");
  }
}

/// Outcome node whose state a binary task asks about.
inline std::string binary_effect_node(const TemplateMatch& m, TaskKind t) {
  switch (t) {
    case TaskKind::CDE:
    case TaskKind::NDE:
    case TaskKind::NIE:
      return mediation_roles(m).outcome;
    case TaskKind::CR:
      return m.role("B");
    case TaskKind::SC:
      return m.role("Y");
    case TaskKind::NC:
      return m.role("Y");
    default:
      fail(ErrorKind::IncompatibleTask, std::string(to_string(t)) + " is not a binary task");
  }
}

/// Truth of a binary task's affirmative proposition. The propositions are:
///   CDE  keep the control sustained, disrupt the treated node: the outcome drops
///   CR   with the cause disrupted, the effect still stays sustained
///   NDE  disrupt the treatment but freeze the mediator at its natural state:
///        the outcome drops
///   NIE  keep the treatment sustained but move the mediator to the state it
///        would take were the treatment disrupted: the outcome stays steady
///   SC   disrupting the focus alone makes the outcome drop
///   NC   given that the outcome dropped, the focus must have failed
inline bool answer_binary(const CausalGraph& g, const TemplateMatch& m, TaskKind t,
                          const std::string& focus) {
  check_focus(m, t, focus);
  switch (t) {
    case TaskKind::CDE: {
      MediationRoles r = mediation_roles(m);
      Assignment v = propagate(g, {{r.treatment, true}, {r.mediator, false}});
      return !v.at(r.outcome);
    }
    case TaskKind::CR: {
      Assignment v = propagate(g, {{focus, false}});
      return v.at(m.role("B"));
    }
    case TaskKind::NDE: {
      MediationRoles r = mediation_roles(m);
      // Mediator frozen at its baseline natural value.
      bool mediator_natural = propagate(g).at(r.mediator);
      Assignment v = propagate(g, {{r.treatment, false}, {r.mediator, mediator_natural}});
      return !v.at(r.outcome);
    }
    case TaskKind::NIE: {
      MediationRoles r = mediation_roles(m);
      bool mediator_counterfactual = propagate(g, {{r.treatment, false}}).at(r.mediator);
      Assignment v = propagate(g, {{r.treatment, true}, {r.mediator, mediator_counterfactual}});
      return v.at(r.outcome);
    }
    case TaskKind::SC: {
      Assignment v = propagate(g, {{focus, false}});
      return !v.at(m.role("Y"));
    }
    case TaskKind::NC:
      // With conjunctive parents, a single parent is always necessary; any
      // sibling parent could equally have caused the drop.
      return g.parents(m.role("Y")).size() < 2;
    default:
      fail(ErrorKind::IncompatibleTask, std::string(to_string(t)) + " is not a binary task");
  }
}

}  // namespace cello
