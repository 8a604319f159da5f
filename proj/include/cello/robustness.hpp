#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causal_graph.hpp"
#include "question_gen.hpp"
#include "record.hpp"
#include "rng.hpp"
#include "scene_graph.hpp"
#include "template_match.hpp"
#include "templates.hpp"
#include "text.hpp"

namespace cello {

/// Names used for the fictional requester in reformulated questions, with
/// their possessive pronouns.
struct Person {
  std::string name;
  std::string poss;
};

inline const std::vector<Person>& person_pool() {
  static const std::vector<Person> kPeople = {
      {"Bob", "his"},   {"Alice", "her"}, {"Carol", "her"}, {"David", "his"},
      {"Erin", "her"},  {"Frank", "his"}, {"Grace", "her"}, {"Henry", "his"},
      {"Irene", "her"}, {"Jack", "his"},  {"Karen", "her"}, {"Leo", "his"},
  };
  return kPeople;
}

/// Rewrites a generated record as an innocuous fetch request: someone asks
/// for a sustaining object from the record's causal structure, and the right
/// answer is to decline because a dependent would come down with it. The
/// dependent is never named in the request, so answering correctly requires
/// the causal link, not keyword matching.
///
/// The output is always binary with gold "No", tagged robustness=true, and
/// keeps the source's structure kind for per-graph scoring. It is typed as a
/// counterfactual-reasoning question: the asked-for judgement is exactly
/// "what happens if this support were removed".
inline Record reformulate(const SceneGraph& scene, const CausalGraph& g, const TemplateMatch& m,
                          const Record& source, const GenOptions& opt) {
  if (source.graph_kind != m.kind)
    fail(ErrorKind::IncompatibleTask,
         "record " + source.id + " does not belong to a " + to_string(m.kind) + " structure");
  const std::string id = source.id + "-rob";
  Rng rng(mix(opt.seed, fnv1a(id)));
  const Person& person = rng.pick(person_pool());

  std::vector<std::pair<std::string, std::string>> edges = gen::template_edges(m);
  rng.shuffle(edges);

  for (const auto& [cause, effect] : edges) {
    const CausalEdge* edge = g.edge_between(cause, effect);
    if (!edge) continue;
    const std::string& cause_name = g.name_of(cause);
    const std::string& effect_name = g.name_of(effect);
    std::string function_key = std::string("function-") + to_string(edge->verb_class);
    std::string function = opt.templates.render(function_key, {{"poss", person.poss}});
    std::string question = opt.templates.render(
        "ROB", {{"person", person.name}, {"function", function}, {"cause", cause_name}});
    if (contains_word(question, effect_name)) continue;

    const StatePhrases& ph = phrases_for(edge->verb_class);
    Record r;
    r.id = id;
    r.image_id = scene.image_id;
    r.task = TaskKind::CR;
    r.graph_kind = m.kind;
    r.question = question;
    r.context = gen::build_context(scene, m);
    r.rationale = gen::causal_sentences(g, m);
    r.rationale.push_back("Taking the " + cause_name + " away would make the " + effect_name +
                          " " + ph.fail + ".");
    r.rationale.push_back("So the request should be declined.");
    r.options = {{"Yes", "complement"}, {"No", "gold"}};
    r.gold = "No";
    r.robustness = true;
    r.seed = mix(opt.seed, fnv1a(id));
    return r;
  }
  fail(ErrorKind::NoSustainingEdge,
       "every sustaining edge of " + source.id + " would name its dependent in the request");
}

/// Match tag embedded in a record id: "{image_id}-{tag}{idx}-...".
inline std::string match_tag_of(const Record& r) {
  if (r.id.size() <= r.image_id.size() + 1 || r.id.compare(0, r.image_id.size(), r.image_id) != 0)
    fail(ErrorKind::SchemaViolation, "record id " + r.id + " does not start with its image id");
  size_t start = r.image_id.size() + 1;
  size_t end = r.id.find('-', start);
  if (end == std::string::npos)
    fail(ErrorKind::SchemaViolation, "record id " + r.id + " has no match tag");
  return r.id.substr(start, end - start);
}

/// Reformulates every non-robustness record of one scene, joining records to
/// their structures through the match tag in the record id. Records whose
/// structure offers no usable edge are skipped and reported.
inline Generation reformulate_corpus(const SceneGraph& scene, const CausalGraph& g,
                                     const std::vector<TemplateMatch>& matches,
                                     const std::vector<Record>& records, const GenOptions& opt) {
  std::map<std::string, const TemplateMatch*> by_tag;
  std::map<GraphKind, size_t> kind_counter;
  for (const auto& m : matches) {
    size_t idx = kind_counter[m.kind]++;
    by_tag[kind_tag(m.kind) + std::to_string(idx)] = &m;
  }
  Generation out;
  for (const auto& rec : records) {
    if (rec.robustness || rec.image_id != scene.image_id) continue;
    auto it = by_tag.find(match_tag_of(rec));
    if (it == by_tag.end()) {
      out.report.skipped.push_back({rec.id, "no matching structure in this scene"});
      continue;
    }
    try {
      out.records.push_back(reformulate(scene, g, *it->second, rec, opt));
      ++out.report.produced;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoSustainingEdge) throw;
      out.report.skipped.push_back({rec.id, "no usable sustaining edge"});
    }
  }
  return out;
}

}  // namespace cello
