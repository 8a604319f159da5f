#pragma once

#include <array>
#include <string>
#include <vector>

#include "errors.hpp"
#include "template_match.hpp"

namespace cello {

/// The twelve task types in canonical report order (grouped by rung).
enum class TaskKind { CaI, CA, AR, CB, CoI, BAS, CDE, CR, NDE, NIE, SC, NC };

enum class Rung { Discovery, Association, Intervention, Counterfactual };

inline const char* to_string(TaskKind t) {
  switch (t) {
    case TaskKind::CaI: return "CaI";
    case TaskKind::CA: return "CA";
    case TaskKind::AR: return "AR";
    case TaskKind::CB: return "CB";
    case TaskKind::CoI: return "CoI";
    case TaskKind::BAS: return "BAS";
    case TaskKind::CDE: return "CDE";
    case TaskKind::CR: return "CR";
    case TaskKind::NDE: return "NDE";
    case TaskKind::NIE: return "NIE";
    case TaskKind::SC: return "SC";
    case TaskKind::NC: return "NC";
  }
  return "CaI";
}

inline const char* task_title(TaskKind t) {
  switch (t) {
    case TaskKind::CaI: return "Causality Identification";
    case TaskKind::CA: return "Causal Attribution";
    case TaskKind::AR: return "Abstract Reasoning";
    case TaskKind::CB: return "Collider Bias";
    case TaskKind::CoI: return "Confounder Identification";
    case TaskKind::BAS: return "Backdoor Adjustment Set";
    case TaskKind::CDE: return "Controlled Direct Effect";
    case TaskKind::CR: return "Counterfactual Reasoning";
    case TaskKind::NDE: return "Natural Direct Effect";
    case TaskKind::NIE: return "Natural Indirect Effect";
    case TaskKind::SC: return "Sufficient Cause";
    case TaskKind::NC: return "Necessary Cause";
  }
  return "";
}

inline TaskKind task_from_string(const std::string& s) {
  static const std::array<TaskKind, 12> kAll = {
      TaskKind::CaI, TaskKind::CA,  TaskKind::AR,  TaskKind::CB,
      TaskKind::CoI, TaskKind::BAS, TaskKind::CDE, TaskKind::CR,
      TaskKind::NDE, TaskKind::NIE, TaskKind::SC,  TaskKind::NC};
  for (TaskKind t : kAll)
    if (s == to_string(t)) return t;
  fail(ErrorKind::ConfigError, "unknown task '" + s + "'");
}

inline const char* to_string(Rung r) {
  switch (r) {
    case Rung::Discovery: return "discovery";
    case Rung::Association: return "association";
    case Rung::Intervention: return "intervention";
    case Rung::Counterfactual: return "counterfactual";
  }
  return "discovery";
}

inline Rung rung_from_string(const std::string& s) {
  if (s == "discovery") return Rung::Discovery;
  if (s == "association") return Rung::Association;
  if (s == "intervention") return Rung::Intervention;
  if (s == "counterfactual") return Rung::Counterfactual;
  fail(ErrorKind::ConfigError, "unknown rung '" + s + "'");
}

inline Rung rung_of(TaskKind t) {
  switch (t) {
    case TaskKind::CaI:
    case TaskKind::CA:
    case TaskKind::AR:
      return Rung::Discovery;
    case TaskKind::CB:
      return Rung::Association;
    case TaskKind::CoI:
    case TaskKind::BAS:
    case TaskKind::CDE:
      return Rung::Intervention;
    default:
      return Rung::Counterfactual;
  }
}

/// Binary tasks answer yes/no; the rest are four-option multiple choice.
inline bool is_binary(TaskKind t) {
  switch (t) {
    case TaskKind::CDE:
    case TaskKind::CR:
    case TaskKind::NDE:
    case TaskKind::NIE:
    case TaskKind::SC:
    case TaskKind::NC:
      return true;
    default:
      return false;
  }
}

inline std::vector<TaskKind> all_tasks() {
  return {TaskKind::CaI, TaskKind::CA,  TaskKind::AR,  TaskKind::CB,
          TaskKind::CoI, TaskKind::BAS, TaskKind::CDE, TaskKind::CR,
          TaskKind::NDE, TaskKind::NIE, TaskKind::SC,  TaskKind::NC};
}

inline std::vector<Rung> all_rungs() {
  return {Rung::Discovery, Rung::Association, Rung::Intervention, Rung::Counterfactual};
}

inline std::vector<TaskKind> tasks_of_rung(Rung r) {
  std::vector<TaskKind> out;
  for (TaskKind t : all_tasks())
    if (rung_of(t) == r) out.push_back(t);
  return out;
}

/// Which tasks each causal structure can pose, in generation order.
inline std::vector<TaskKind> tasks_for(GraphKind k) {
  switch (k) {
    case GraphKind::Direct:
      return {TaskKind::CaI, TaskKind::CR};
    case GraphKind::Confounding:
      return {TaskKind::CoI, TaskKind::BAS, TaskKind::CDE,
              TaskKind::NDE, TaskKind::NIE, TaskKind::SC};
    case GraphKind::Collision:
      return {TaskKind::CB, TaskKind::NC};
    case GraphKind::Chain:
      return {TaskKind::CA, TaskKind::AR, TaskKind::CDE,
              TaskKind::NDE, TaskKind::NIE};
  }
  return {};
}

inline bool task_compatible(GraphKind k, TaskKind t) {
  for (TaskKind allowed : tasks_for(k))
    if (allowed == t) return true;
  return false;
}

}  // namespace cello
