#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "causal_graph.hpp"
#include "errors.hpp"
#include "scene_graph.hpp"
#include "text.hpp"

namespace cello {

struct PredicateRule {
  std::string predicate;
  /// true: the relation object sustains the subject ("books on shelf");
  /// false: the subject sustains the object ("shelf supports books").
  bool reversed = true;
  VerbClass verb_class = VerbClass::Generic;
};

/// Maps relation predicates to sustaining-edge direction. Only relations
/// whose predicate appears here become causal edges; everything else is
/// spatial decoration.
class PredicateLexicon {
 public:
  static PredicateLexicon defaults() {
    PredicateLexicon lex;
    auto add = [&](const char* p, bool rev, VerbClass v) {
      lex.rules_[lower(p)] = PredicateRule{p, rev, v};
    };
    add("on", true, VerbClass::Support);
    add("on top of", true, VerbClass::Support);
    add("sitting on", true, VerbClass::Support);
    add("standing on", true, VerbClass::Support);
    add("lying on", true, VerbClass::Support);
    add("resting on", true, VerbClass::Support);
    add("placed on", true, VerbClass::Support);
    add("stacked on", true, VerbClass::Support);
    add("leaning on", true, VerbClass::Support);
    add("leaning against", true, VerbClass::Support);
    add("supported by", true, VerbClass::Support);
    add("fixed to", true, VerbClass::Attach);
    add("attached to", true, VerbClass::Attach);
    add("mounted on", true, VerbClass::Attach);
    add("fastened to", true, VerbClass::Attach);
    add("hangs on", true, VerbClass::Attach);
    add("hanging on", true, VerbClass::Attach);
    add("hanging from", true, VerbClass::Attach);
    add("supports", false, VerbClass::Support);
    add("supporting", false, VerbClass::Support);
    add("holds", false, VerbClass::Hold);
    add("holding", false, VerbClass::Hold);
    add("hold", false, VerbClass::Hold);
    add("holds up", false, VerbClass::Hold);
    add("carries", false, VerbClass::Hold);
    add("carrying", false, VerbClass::Hold);
    return lex;
  }

  /// File format: blank-line-separated records of `key: value` lines.
  /// Required keys `predicate` and `reversed` (yes|no); optional
  /// `class` (support|hold|attach|generic). '#' starts a comment line.
  static PredicateLexicon load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoFailure, "cannot open predicate lexicon " + path);
    PredicateLexicon lex;
    std::map<std::string, std::string> rec;
    std::string line;
    size_t lineno = 0;
    auto flush = [&]() {
      if (rec.empty()) return;
      auto pit = rec.find("predicate");
      if (pit == rec.end())
        fail(ErrorKind::ConfigError, path + ": record ending at line " +
                                         std::to_string(lineno) + " lacks a predicate key");
      auto rit = rec.find("reversed");
      if (rit == rec.end())
        fail(ErrorKind::ConfigError, path + ": predicate '" + pit->second + "' lacks a reversed key");
      PredicateRule rule;
      rule.predicate = pit->second;
      if (rit->second == "yes")
        rule.reversed = true;
      else if (rit->second == "no")
        rule.reversed = false;
      else
        fail(ErrorKind::ConfigError,
             path + ": reversed must be yes or no, got '" + rit->second + "'");
      if (auto cit = rec.find("class"); cit != rec.end())
        rule.verb_class = verb_class_from_string(cit->second);
      lex.rules_[lower(rule.predicate)] = rule;
      rec.clear();
    };
    while (std::getline(in, line)) {
      ++lineno;
      std::string t = trim(line);
      if (t.empty()) {
        flush();
        continue;
      }
      if (t[0] == '#') continue;
      size_t colon = t.find(':');
      if (colon == std::string::npos)
        fail(ErrorKind::ConfigError,
             path + ": line " + std::to_string(lineno) + " is not 'key: value'");
      std::string key = lower(trim(t.substr(0, colon)));
      std::string value = trim(t.substr(colon + 1));
      rec[key] = value;
    }
    flush();
    if (lex.rules_.empty()) fail(ErrorKind::EmptyInput, "predicate lexicon " + path + " has no records");
    return lex;
  }

  const PredicateRule* find(const std::string& predicate) const {
    auto it = rules_.find(lower(trim(predicate)));
    return it == rules_.end() ? nullptr : &it->second;
  }

  size_t size() const { return rules_.size(); }

 private:
  std::map<std::string, PredicateRule> rules_;
};

struct ExtractionWarning {
  enum class Kind { SelfLoop, Duplicate, CycleDropped };
  Kind kind;
  std::string cause;
  std::string effect;
  std::string predicate;
};

struct ExtractionReport {
  size_t relations_seen = 0;
  size_t edges_added = 0;
  size_t relations_skipped = 0;  // predicate not in lexicon
  std::vector<ExtractionWarning> warnings;
};

struct Extraction {
  CausalGraph graph;
  ExtractionReport report;
};

/// Turns a scene's sustaining relations into a causal DAG. Relations are
/// processed in corpus order: the first edge between a pair wins, and an
/// edge that would close a cycle is dropped with a warning.
inline Extraction extract_causal_graph(const SceneGraph& scene, const PredicateLexicon& lexicon) {
  Extraction out;
  for (const auto& rel : scene.relationships) {
    ++out.report.relations_seen;
    const PredicateRule* rule = lexicon.find(rel.predicate);
    if (!rule) {
      ++out.report.relations_skipped;
      continue;
    }
    const std::string& cause = rule->reversed ? rel.object_id : rel.subject_id;
    const std::string& effect = rule->reversed ? rel.subject_id : rel.object_id;
    out.graph.add_node(cause, scene.require(cause).name());
    out.graph.add_node(effect, scene.require(effect).name());
    CausalEdge edge{cause, effect, rel.predicate, rule->verb_class, rule->reversed};
    switch (out.graph.add_edge(edge)) {
      case AddEdgeResult::Added:
        ++out.report.edges_added;
        break;
      case AddEdgeResult::Duplicate:
        out.report.warnings.push_back(
            {ExtractionWarning::Kind::Duplicate, cause, effect, rel.predicate});
        break;
      case AddEdgeResult::SelfLoop:
        out.report.warnings.push_back(
            {ExtractionWarning::Kind::SelfLoop, cause, effect, rel.predicate});
        break;
      case AddEdgeResult::WouldCycle:
        out.report.warnings.push_back(
            {ExtractionWarning::Kind::CycleDropped, cause, effect, rel.predicate});
        break;
    }
  }
  return out;
}

}  // namespace cello
