#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "causal_graph.hpp"
#include "oracle.hpp"
#include "record.hpp"
#include "rng.hpp"
#include "scene_graph.hpp"
#include "tasks.hpp"
#include "template_match.hpp"
#include "templates.hpp"
#include "text.hpp"

namespace cello {

struct GenOptions {
  uint64_t seed = 0;
  QuestionTemplates templates = QuestionTemplates::defaults();
  TextDistractorLexicon text_lexicon = TextDistractorLexicon::defaults();
  // Image-distractor fallback when the scene has no entity outside the causal
  // graph. A corpus driver may refill this from sibling scenes.
  std::vector<std::string> sibling_entities = {"window", "curtain", "lamp", "chair",
                                               "door",   "rug",     "mirror"};
};

struct SkippedQuestion {
  std::string id;
  std::string reason;
};

struct GenerationReport {
  size_t produced = 0;
  size_t leakage_dropped = 0;
  size_t missing_context = 0;
  size_t image_fallbacks = 0;
  std::vector<SkippedQuestion> skipped;
};

struct Generation {
  std::vector<Record> records;
  GenerationReport report;
};

namespace gen {

inline std::string capitalize(std::string s) {
  for (char& c : s) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      break;
    }
  }
  return s;
}

/// "the a", "the a and the b", "the a, the b and the c".
inline std::string join_the(const std::vector<std::string>& names) {
  std::vector<std::string> parts;
  for (const auto& n : names) parts.push_back("the " + n);
  if (parts.empty()) return "";
  if (parts.size() == 1) return parts[0];
  std::string out;
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out + " and " + parts.back();
}

inline std::string entity_option(const std::vector<std::string>& names) {
  return capitalize(join_the(names)) + ".";
}

inline std::string because_option(const std::vector<std::string>& names) {
  return "Because of " + join_the(names) + ".";
}

inline bool because_style(TaskKind t) { return t == TaskKind::CoI || t == TaskKind::CB; }

inline std::string style_option(TaskKind t, const std::vector<std::string>& names) {
  return because_style(t) ? because_option(names) : entity_option(names);
}

/// Template edges in canonical role order per structure.
inline std::vector<std::pair<std::string, std::string>> template_edges(const TemplateMatch& m) {
  switch (m.kind) {
    case GraphKind::Direct:
      return {{m.role("A"), m.role("B")}};
    case GraphKind::Confounding:
      return {{m.role("W"), m.role("M")}, {m.role("W"), m.role("Y")}, {m.role("M"), m.role("Y")}};
    case GraphKind::Collision:
      return {{m.role("A"), m.role("Y")}, {m.role("B"), m.role("Y")}};
    case GraphKind::Chain:
      return {{m.role("A"), m.role("B")}, {m.role("B"), m.role("C")}};
  }
  return {};
}

/// Scene-surface sentence for one causal edge, using the original relation
/// orientation: "The books are on the shelf." / "The shelf supports the books."
inline std::string verbalize_relation(const CausalGraph& g, const CausalEdge& e) {
  const std::string& cause = g.name_of(e.cause);
  const std::string& effect = g.name_of(e.effect);
  std::string s;
  if (e.reversed)
    s = "the " + effect + " " + be_verb(effect) + " " + e.predicate + " the " + cause;
  else
    s = "the " + cause + " " + e.predicate + " the " + effect;
  return capitalize(s) + ".";
}

/// Scene phrases anchored to the structure: every region description that
/// mentions at least one bound entity, in corpus order, deduplicated. A scene
/// without such regions yields an empty context (reported, not fatal).
inline std::vector<std::string> build_context(const SceneGraph& scene, const TemplateMatch& m) {
  auto idx = index_regions(scene);
  std::set<std::string> bound = m.node_set();
  std::vector<const RegionDescription*> hits;
  for (const auto& id : bound) {
    auto it = idx.find(id);
    if (it == idx.end()) continue;
    for (const RegionDescription* r : it->second) hits.push_back(r);
  }
  // corpus order, one mention per region
  std::vector<std::string> out;
  for (const auto& r : scene.regions) {
    if (std::find(hits.begin(), hits.end(), &r) == hits.end()) continue;
    std::string phrase = trim(r.phrase);
    if (std::find(out.begin(), out.end(), phrase) == out.end()) out.push_back(phrase);
  }
  return out;
}

/// Causal-direction restatement of the structure's edges.
inline std::vector<std::string> causal_sentences(const CausalGraph& g, const TemplateMatch& m) {
  std::vector<std::string> out;
  for (const auto& [cause, effect] : template_edges(m)) {
    const CausalEdge* e = g.edge_between(cause, effect);
    const StatePhrases& ph = phrases_for(e ? e->verb_class : VerbClass::Generic);
    out.push_back(capitalize("the " + g.name_of(cause) + " " + ph.sustains + " the " +
                             g.name_of(effect)) +
                  ".");
  }
  return out;
}

inline std::vector<std::string> names_of(const CausalGraph& g, const std::vector<std::string>& ids) {
  std::vector<std::string> out;
  for (const auto& id : ids) out.push_back(g.name_of(id));
  return out;
}

/// Node whose stability the question's state/failure phrasing refers to.
inline std::string phrasing_node(const TemplateMatch& m, TaskKind t, const std::string& focus) {
  return is_binary(t) ? binary_effect_node(m, t) : focus;
}

inline std::map<std::string, std::string> base_slots(const CausalGraph& g, const TemplateMatch& m,
                                                     TaskKind t, const std::string& focus) {
  std::map<std::string, std::string> slots;
  for (const auto& [role, id] : m.roles) slots[role] = g.name_of(id);
  const std::string& focus_name = g.name_of(focus);
  slots["focus"] = focus_name;
  if (m.kind == GraphKind::Confounding || m.kind == GraphKind::Chain) {
    MediationRoles r = mediation_roles(m);
    slots["treatment"] = g.name_of(r.treatment);
    slots["mediator"] = g.name_of(r.mediator);
    slots["outcome"] = g.name_of(r.outcome);
    slots["control"] = g.name_of(r.treatment);
    slots["treat"] = g.name_of(r.mediator);
  }
  const StatePhrases& ph = phrases_for(g.verb_class_for(phrasing_node(m, t, focus)));
  slots["state"] = ph.state;
  slots["fail"] = ph.fail;
  slots["fail_past"] = ph.fail_past;
  slots["be"] = be_verb(focus_name);
  slots["dont"] = do_not(focus_name);
  return slots;
}

inline std::string conclusion(const CausalGraph& g, const TemplateMatch& m, TaskKind t,
                              const std::string& focus, const std::vector<std::string>& gold_names,
                              bool truth) {
  auto slot = base_slots(g, m, t, focus);
  const std::string& focus_name = slot["focus"];
  switch (t) {
    case TaskKind::CaI:
      return "Without " + join_the(gold_names) + ", the " + focus_name + " would " + slot["fail"] + ".";
    case TaskKind::CA:
      return capitalize(join_the(gold_names)) + " reaches the " + focus_name +
             " only through intermediate links.";
    case TaskKind::AR:
      return "The " + focus_name + " matters to " + join_the(gold_names) +
             " only through intermediate links.";
    case TaskKind::CB:
      return "Every one of them must hold for the " + focus_name + " to stay " + slot["state"] + ".";
    case TaskKind::CoI:
      return "The " + slot["W"] + " acts on the " + slot["Y"] + " both directly and through the " +
             slot["M"] + ".";
    case TaskKind::BAS:
      return "The " + slot["W"] + " influences both the " + slot["M"] + " and the " + slot["Y"] +
             ", opening a backdoor path that must be closed.";
    case TaskKind::CDE:
      return "With the " + slot["treat"] + " gone, the " + slot["outcome"] +
             " loses what keeps it " + slot["state"] + ".";
    case TaskKind::CR:
      return "Nothing else would hold the " + slot["B"] + " up once the " + slot["A"] + " is gone.";
    case TaskKind::NDE:
      return truth ? "Even with the " + slot["mediator"] + " unchanged, the " + slot["outcome"] +
                         " still needs the " + slot["treatment"] + " directly."
                   : "The " + slot["treatment"] + " matters to the " + slot["outcome"] +
                         " only through the " + slot["mediator"] + ", which stays put.";
    case TaskKind::NIE:
      return truth ? "The " + slot["outcome"] + " does not depend on the " + slot["mediator"] + "."
                   : "Once the " + slot["mediator"] + " gives way, the " + slot["outcome"] +
                         " follows, whatever the " + slot["treatment"] + " does.";
    case TaskKind::SC:
      return truth ? "Losing the " + focus_name + " alone already brings the " + slot["Y"] + " down."
                   : "The " + slot["Y"] + " would survive the loss of the " + focus_name + " alone.";
    case TaskKind::NC:
      return truth ? "Only the " + focus_name + " holds the " + slot["Y"] +
                         " up, so it must have failed."
                   : "The " + slot["Y"] + " could have " + slot["fail_past"] +
                         " because another of its supports failed, so the " + focus_name +
                         " need not have.";
  }
  return "";
}

struct IdParts {
  std::string base;  // "{image_id}-{tag}{idx}-{task}" plus focus suffix
};

}  // namespace gen

/// Builds one multiple-choice record, or nothing when a distractor class
/// cannot be realized or the question would leak a gold entity name.
inline std::optional<Record> make_choice_record(const SceneGraph& scene, const CausalGraph& g,
                                                const TemplateMatch& m, TaskKind t,
                                                const std::string& focus, const std::string& id,
                                                const GenOptions& opt, GenerationReport& report) {
  std::vector<std::string> gold_ids = answer_entities(g, m, t, focus);
  if (gold_ids.empty()) {
    report.skipped.push_back({id, "no gold entities"});
    return std::nullopt;
  }
  std::vector<std::string> gold_names = gen::names_of(g, gold_ids);
  std::set<std::string> gold_name_set;
  for (const auto& n : gold_names) gold_name_set.insert(lower(n));

  Rng rng(mix(opt.seed, fnv1a(id)));

  // Graph distractor: drop the last gold entity when there are several
  // (partially correct), otherwise another node of the causal structure.
  std::vector<std::string> graph_names;
  if (gold_ids.size() >= 2) {
    graph_names.assign(gold_names.begin(), gold_names.end() - 1);
  } else {
    std::vector<std::string> candidates;
    std::vector<std::string> fallback;
    for (const auto& id_ : g.nodes()) {
      if (std::find(gold_ids.begin(), gold_ids.end(), id_) != gold_ids.end()) continue;
      if (gold_name_set.count(lower(g.name_of(id_)))) continue;
      (id_ == focus ? fallback : candidates).push_back(id_);
    }
    const auto& pool = candidates.empty() ? fallback : candidates;
    if (pool.empty()) {
      report.skipped.push_back({id, "no graph distractor candidate"});
      return std::nullopt;
    }
    graph_names = {g.name_of(rng.pick(pool))};
  }
  std::set<std::string> taken = gold_name_set;
  for (const auto& n : graph_names) taken.insert(lower(n));

  // Image distractor: present in the scene, absent from the causal graph.
  std::set<std::string> graph_entity_names;
  for (const auto& id_ : g.nodes()) graph_entity_names.insert(lower(g.name_of(id_)));
  std::vector<std::string> image_candidates;
  for (const auto& e : scene.objects) {
    if (g.contains(e.id)) continue;
    std::string n = lower(e.name());
    if (graph_entity_names.count(n) || taken.count(n)) continue;
    image_candidates.push_back(e.name());
  }
  if (image_candidates.empty()) {
    for (const auto& w : opt.sibling_entities)
      if (!graph_entity_names.count(lower(w)) && !taken.count(lower(w)))
        image_candidates.push_back(w);
    if (image_candidates.empty()) {
      report.skipped.push_back({id, "no image distractor candidate"});
      return std::nullopt;
    }
    ++report.image_fallbacks;
  }
  std::string image_name = rng.pick(image_candidates);
  taken.insert(lower(image_name));

  // Text distractor: induced, named nowhere in the scene.
  std::set<std::string> scene_names;
  for (const auto& e : scene.objects)
    for (const auto& n : e.names) scene_names.insert(lower(n));
  VerbClass cls = g.verb_class_for(gen::phrasing_node(m, t, focus));
  std::vector<std::string> text_candidates;
  for (const auto& w : opt.text_lexicon.pool(cls))
    if (!scene_names.count(lower(w)) && !taken.count(lower(w))) text_candidates.push_back(w);
  if (text_candidates.empty()) {
    report.skipped.push_back({id, "no text distractor candidate"});
    return std::nullopt;
  }
  std::string text_name = rng.pick(text_candidates);

  Record r;
  r.id = id;
  r.image_id = scene.image_id;
  r.task = t;
  r.graph_kind = m.kind;
  r.question = opt.templates.render(to_string(t), gen::base_slots(g, m, t, focus));
  r.context = gen::build_context(scene, m);
  if (r.context.empty()) ++report.missing_context;
  r.rationale = gen::causal_sentences(g, m);
  r.rationale.push_back(gen::conclusion(g, m, t, focus, gold_names, false));
  r.gold = gen::style_option(t, gold_names);
  r.options = {{r.gold, "gold"},
               {gen::style_option(t, {image_name}), "image"},
               {gen::style_option(t, graph_names), "graph"},
               {gen::style_option(t, {text_name}), "text"}};
  rng.shuffle(r.options);
  r.seed = mix(opt.seed, fnv1a(id));

  for (const auto& name : gold_names) {
    if (contains_word(r.question, name)) {
      ++report.leakage_dropped;
      return std::nullopt;
    }
  }
  return r;
}

/// Builds the affirmative/negated pair for a binary task. Emitting both
/// polarities keeps the corpus yes-rate at one half by construction.
inline std::vector<Record> make_binary_pair(const SceneGraph& scene, const CausalGraph& g,
                                            const TemplateMatch& m, TaskKind t,
                                            const std::string& focus, const std::string& id_base,
                                            const GenOptions& opt) {
  bool truth = answer_binary(g, m, t, focus);
  std::vector<Record> out;
  for (bool affirmative : {true, false}) {
    Record r;
    r.id = id_base + (affirmative ? "-aff" : "-neg");
    r.image_id = scene.image_id;
    r.task = t;
    r.graph_kind = m.kind;
    std::string key = std::string(to_string(t)) + (affirmative ? "-aff" : "-neg");
    r.question = opt.templates.render(key, gen::base_slots(g, m, t, focus));
    r.context = gen::build_context(scene, m);
    r.rationale = gen::causal_sentences(g, m);
    r.rationale.push_back(gen::conclusion(g, m, t, focus, {}, truth));
    bool gold_yes = affirmative ? truth : !truth;
    r.options = {{"Yes", gold_yes ? "gold" : "complement"},
                 {"No", gold_yes ? "complement" : "gold"}};
    r.gold = gold_yes ? "Yes" : "No";
    r.seed = mix(opt.seed, fnv1a(r.id));
    out.push_back(std::move(r));
  }
  return out;
}

/// Generates every question the structures of one scene support, in a fixed
/// deterministic order: matches as sorted, tasks in structure order, foci in
/// role order, affirmative before negated.
inline Generation generate_questions(const SceneGraph& scene, const CausalGraph& g,
                                     const std::vector<TemplateMatch>& matches,
                                     const GenOptions& opt) {
  Generation out;
  std::map<GraphKind, size_t> kind_counter;
  for (const auto& m : matches) {
    size_t idx = kind_counter[m.kind]++;
    std::string match_tag = scene.image_id + "-" + kind_tag(m.kind) + std::to_string(idx);
    for (TaskKind t : tasks_for(m.kind)) {
      std::vector<std::string> foci = valid_foci(m, t);
      for (size_t fi = 0; fi < foci.size(); ++fi) {
        std::string id_base = match_tag + "-" + to_string(t);
        if (foci.size() > 1) id_base += "-f" + std::to_string(fi);
        if (is_binary(t)) {
          for (auto& r : make_binary_pair(scene, g, m, t, foci[fi], id_base, opt)) {
            if (r.context.empty()) ++out.report.missing_context;
            out.records.push_back(std::move(r));
            ++out.report.produced;
          }
        } else {
          auto r = make_choice_record(scene, g, m, t, foci[fi], id_base, opt, out.report);
          if (r) {
            out.records.push_back(std::move(*r));
            ++out.report.produced;
          }
        }
      }
    }
  }
  return out;
}

/// Request shape for an external text-generation service. Transport is the
/// caller's concern; rewriting stays optional and non-fatal.
struct TextRequest {
  std::string instruction;
  std::vector<std::string> demonstrations;
  std::string payload;
};

class TextClient {
 public:
  virtual ~TextClient() = default;
  virtual std::string generate(const TextRequest& request) = 0;
};

namespace gen {

/// Content words of an option surface form, minus connective filler.
inline std::vector<std::string> option_content_words(const std::string& text) {
  static const std::set<std::string> kFiller = {"the", "a", "an", "and", "of", "because"};
  std::vector<std::string> out;
  for (const auto& tok : lexical_tokens(text))
    if (!kFiller.count(tok)) out.push_back(tok);
  return out;
}

}  // namespace gen

/// Optional LLM rewrite of a record's surface text. The response must be a
/// JSON object {"question","options"}; the options may be reordered but the
/// gold text must survive verbatim, and no gold content word may enter the
/// question. Any violation keeps the original record. A ClientUnavailable
/// transport error likewise passes the record through.
inline Record paraphrase_external(const Record& r, TextClient& client) {
  TextRequest req;
  req.instruction =
      "Rephrase the question so it reads naturally and keep every option's meaning. "
      "Reply with a JSON object holding \"question\" and \"options\". "
      "Never mention entities from the correct option inside the question.";
  req.demonstrations = {
      "{\"question\": \"Why is the cup held in place?\", \"options\": [\"Because of the hand.\"]}"
      " -> {\"question\": \"What keeps the cup from tipping over?\", \"options\": [\"Because of "
      "the hand.\"]}"};
  Json payload;
  payload["question"] = r.question;
  payload["options"] = Json::array();
  for (const auto& o : r.options) payload["options"].push_back(o.text);
  req.payload = payload.dump();

  std::string response;
  try {
    response = client.generate(req);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ClientUnavailable) return r;
    throw;
  }

  Json doc = Json::parse(response, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return r;
  if (!doc.contains("question") || !doc["question"].is_string()) return r;
  if (!doc.contains("options") || !doc["options"].is_array()) return r;
  std::string question = doc["question"].get<std::string>();
  if (trim(question).empty()) return r;
  std::vector<std::string> texts;
  for (const auto& item : doc["options"]) {
    if (!item.is_string()) return r;
    texts.push_back(item.get<std::string>());
  }
  if (texts.size() != r.options.size()) return r;
  std::set<std::string> distinct(texts.begin(), texts.end());
  if (distinct.size() != texts.size()) return r;
  if (!distinct.count(r.gold)) return r;

  // Leakage re-validation mirrors generation: no gold content word in the
  // question. Binary golds carry no entity words, so they pass trivially.
  for (const auto& w : gen::option_content_words(r.gold))
    if (contains_word(question, w)) return r;

  // Provenance follows surviving texts; rephrased options inherit leftover
  // provenances in order.
  std::vector<const OptionEntry*> unused;
  for (const auto& o : r.options) unused.push_back(&o);
  std::vector<OptionEntry> options(texts.size());
  std::vector<size_t> pending;
  for (size_t i = 0; i < texts.size(); ++i) {
    auto it = std::find_if(unused.begin(), unused.end(),
                           [&](const OptionEntry* o) { return o->text == texts[i]; });
    if (it != unused.end()) {
      options[i] = {texts[i], (*it)->provenance};
      unused.erase(it);
    } else {
      pending.push_back(i);
    }
  }
  for (size_t k = 0; k < pending.size(); ++k)
    options[pending[k]] = {texts[pending[k]], unused[k]->provenance};

  Record out = r;
  out.question = question;
  out.options = std::move(options);
  out.gold_index();  // re-validates the gold mapping
  return out;
}

}  // namespace cello
