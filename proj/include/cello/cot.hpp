#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "errors.hpp"
#include "record.hpp"
#include "tasks.hpp"
#include "text.hpp"

namespace cello {

/// Version tag for the prompt wording; reports carry it so scores are only
/// compared within a wording generation.
inline constexpr const char* kPromptVersion = "cot-v1";

/// The four reasoning steps. A plan is an order-preserving non-empty
/// subsequence; steps keep their canonical numbers even when earlier steps
/// are omitted, so ablation removes exactly one block of text.
enum class Step { S1, S2, S3, S4 };

inline int step_number(Step s) { return static_cast<int>(s) + 1; }

struct PromptPlan {
  std::vector<Step> steps;

  static PromptPlan full() { return {{Step::S1, Step::S2, Step::S3, Step::S4}}; }

  /// Full plan minus one step.
  static PromptPlan without(Step omitted) {
    PromptPlan p;
    for (Step s : full().steps)
      if (s != omitted) p.steps.push_back(s);
    return p;
  }

  /// Parses "s1,s2,s4"; validates the subsequence property.
  static PromptPlan parse(const std::string& text) {
    PromptPlan p;
    for (const auto& part : split(text, ',')) {
      std::string s = lower(trim(part));
      if (s == "s1")
        p.steps.push_back(Step::S1);
      else if (s == "s2")
        p.steps.push_back(Step::S2);
      else if (s == "s3")
        p.steps.push_back(Step::S3);
      else if (s == "s4")
        p.steps.push_back(Step::S4);
      else
        fail(ErrorKind::ConfigError, "unknown plan step '" + trim(part) + "'");
    }
    p.validate();
    return p;
  }

  void validate() const {
    if (steps.empty()) fail(ErrorKind::ConfigError, "plan must contain at least one step");
    for (size_t i = 1; i < steps.size(); ++i)
      if (static_cast<int>(steps[i]) <= static_cast<int>(steps[i - 1]))
        fail(ErrorKind::ConfigError, "plan steps must be an in-order subsequence of s1..s4");
  }

  bool contains(Step s) const {
    for (Step x : steps)
      if (x == s) return true;
    return false;
  }

  std::string to_string() const {
    std::vector<std::string> parts;
    for (Step s : steps) parts.push_back("s" + std::to_string(step_number(s)));
    return join(parts, ",");
  }
};

/// Causal-inference background compiled into step 4, keyed by task type.
inline const char* knowledge_snippet(TaskKind t) {
  switch (t) {
    case TaskKind::CaI:
      return "A cause is an element without which the effect would not hold; "
             "look for what the object in question depends on.";
    case TaskKind::CA:
      return "An indirect cause acts through at least one intermediate element "
             "rather than touching the effect directly.";
    case TaskKind::AR:
      return "Influence is transitive: whatever depends on something you "
             "affect is itself affected, even at several removes.";
    case TaskKind::CB:
      return "A collider is an effect with two or more independent causes; "
             "all of them must hold for it to stand, and conditioning on it "
             "links its causes spuriously.";
    case TaskKind::CoI:
      return "A confounder is a common cause of both a treatment and an "
             "outcome; it affects the outcome directly and through the "
             "treated element.";
    case TaskKind::BAS:
      return "The backdoor criterion: to isolate the effect of one variable "
             "on another, control a set of variables that blocks every path "
             "entering the treatment from behind and contains no descendant "
             "of the treatment.";
    case TaskKind::CDE:
      return "The controlled direct effect holds the mediator fixed by "
             "intervention and asks what the treatment change alone does to "
             "the outcome.";
    case TaskKind::CR:
      return "Counterfactual reasoning asks what would follow in the world "
             "where an intervention had changed one element, all else "
             "following the causal laws.";
    case TaskKind::NDE:
      return "The natural direct effect changes the treatment while freezing "
             "the mediator at the value it naturally had, isolating the path "
             "that bypasses the mediator.";
    case TaskKind::NIE:
      return "The natural indirect effect keeps the treatment fixed but moves "
             "the mediator to the value it would take under the changed "
             "treatment, isolating the mediated path.";
    case TaskKind::SC:
      return "A sufficient cause is one whose loss or occurrence alone "
             "guarantees the effect, whatever else happens.";
    case TaskKind::NC:
      return "A necessary cause is one without which the effect cannot occur; "
             "if the effect has several independent supports, no single one "
             "is necessary.";
  }
  return "";
}

/// The text block one step contributes to a prompt, newline-terminated.
inline std::string step_block(Step s, const Record& r) {
  switch (s) {
    case Step::S1:
      return "Step 1: List the core entities mentioned in the question and the options.\n";
    case Step::S2:
      return "Step 2: Identify the causal graph that links these entities in the image.\n";
    case Step::S3:
      return "Step 3: Determine which type of causal task the question poses.\n";
    case Step::S4:
      return std::string("Step 4: Use this causal knowledge: ") + knowledge_snippet(r.task) + "\n";
  }
  return "";
}

inline char option_letter(size_t index) { return static_cast<char>('A' + index); }

/// Deterministic prompt: step blocks for the plan, the scene context, the
/// question with its options in stored order, and a fixed final-answer
/// directive.
inline std::string build_prompt(const Record& r, const PromptPlan& plan) {
  plan.validate();
  std::string out = "You will answer a causal question about an image.\n";
  out += "Work through the numbered steps in order before answering.\n\n";
  for (Step s : plan.steps) out += step_block(s, r);
  out += "\nContext:\n";
  for (const auto& c : r.context) out += "- " + c + "\n";
  out += "\nQuestion: " + r.question + "\n";
  if (r.format() == "MCQ") {
    out += "Options:\n";
    for (size_t i = 0; i < r.options.size(); ++i)
      out += std::string(1, option_letter(i)) + ") " + r.options[i].text + "\n";
    out += "\nEnd your reply with one line of the form:\nFinal answer: <letter of the chosen option>\n";
  } else {
    out += "Answer yes or no.\n";
    out += "\nEnd your reply with one line of the form:\nFinal answer: <yes or no>\n";
  }
  return out;
}

/// Per-step slice of a model response, matched by canonical step headers.
struct StepResponse {
  Step step;
  std::string text;
};

inline std::vector<StepResponse> parse_step_responses(const std::string& response,
                                                      const PromptPlan& plan) {
  plan.validate();
  std::vector<StepResponse> out;
  std::string low = lower(response);
  struct Span {
    Step step;
    size_t begin;
  };
  std::vector<Span> spans;
  for (Step s : plan.steps) {
    std::string header = "step " + std::to_string(step_number(s));
    size_t pos = low.find(header);
    if (pos == std::string::npos) continue;
    spans.push_back({s, pos});
  }
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.begin < b.begin; });
  for (size_t i = 0; i < spans.size(); ++i) {
    size_t end = i + 1 < spans.size() ? spans[i + 1].begin : response.size();
    size_t final_pos = low.find("final answer", spans[i].begin);
    if (final_pos != std::string::npos && final_pos < end) end = final_pos;
    std::string text = trim(response.substr(spans[i].begin, end - spans[i].begin));
    out.push_back({spans[i].step, text});
  }
  return out;
}

}  // namespace cello
