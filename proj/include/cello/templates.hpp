#pragma once

#include <fstream>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include "causal_graph.hpp"
#include "errors.hpp"
#include "text.hpp"

namespace cello {

/// Phrase family for one verb class: the stable-state description, the
/// failure verb (infinitive and past), and the sustaining verb used in
/// rationale sentences.
struct StatePhrases {
  std::string state;
  std::string fail;
  std::string fail_past;
  std::string sustains;
};

inline const StatePhrases& phrases_for(VerbClass v) {
  static const StatePhrases kSupport{"placed steadily", "drop", "dropped", "supports"};
  static const StatePhrases kHold{"held in place", "fall", "fell", "holds"};
  static const StatePhrases kAttach{"firmly attached", "come loose", "came loose", "secures"};
  static const StatePhrases kGeneric{"in a stable state", "give way", "gave way", "sustains"};
  switch (v) {
    case VerbClass::Support: return kSupport;
    case VerbClass::Hold: return kHold;
    case VerbClass::Attach: return kAttach;
    case VerbClass::Generic: return kGeneric;
  }
  return kGeneric;
}

/// Wording table for question surface forms. Every entry is a pattern with
/// {slot} placeholders; callers pass a fully resolved slot map and rendering
/// fails loudly on any placeholder left unfilled, so a typo in an override
/// file cannot silently leak braces into questions.
class QuestionTemplates {
 public:
  static QuestionTemplates defaults() {
    QuestionTemplates t;
    auto& m = t.table_;
    m["CaI"] = "Which of the following elements is crucial for keeping the {focus} {state}?";
    m["CA"] = "Which of the following indirectly keeps the {focus} {state}?";
    m["AR"] = "Which of the following is indirectly affected by the {focus}?";
    m["CB"] = "Why {dont} the {focus} {fail}?";
    m["CoI"] = "Why {be} the {focus} {state}?";
    m["BAS"] =
        "To study how the {M} affects the {Y}, which of the following "
        "variables should we control for?";
    m["CDE-aff"] =
        "Suppose the {control} stays right where it is, but the {treat} is "
        "taken away. Will the {outcome} {fail}?";
    m["CDE-neg"] =
        "Suppose the {control} stays right where it is, but the {treat} is "
        "taken away. Will the {outcome} remain {state}?";
    m["CR-aff"] = "If the {A} were gone, would the {B} still be {state}?";
    m["CR-neg"] = "If the {A} were gone, would the {B} {fail}?";
    m["NDE-aff"] =
        "Imagine the {treatment} were taken away while the {mediator} somehow "
        "stayed exactly as it is now. Would the {outcome} {fail}?";
    m["NDE-neg"] =
        "Imagine the {treatment} were taken away while the {mediator} somehow "
        "stayed exactly as it is now. Would the {outcome} remain {state}?";
    m["NIE-aff"] =
        "Imagine the {treatment} stays put, but the {mediator} shifts to the "
        "state it would take if the {treatment} were gone. Would the {outcome} "
        "remain {state}?";
    m["NIE-neg"] =
        "Imagine the {treatment} stays put, but the {mediator} shifts to the "
        "state it would take if the {treatment} were gone. Would the {outcome} "
        "{fail}?";
    m["SC-aff"] = "If the {focus} alone were removed, would the {Y} {fail}?";
    m["SC-neg"] = "If the {focus} alone were removed, would the {Y} stay {state}?";
    m["NC-aff"] = "The {Y} {fail_past}. Does this mean the {focus} must have given way?";
    m["NC-neg"] =
        "The {Y} {fail_past}. Could the {Y} have ended up this way even if "
        "the {focus} had stayed firm?";
    m["ROB"] = "{person} needs {function}. Can you bring this {cause} over?";
    m["function-support"] = "support for {poss} toys";
    m["function-hold"] = "something to hold {poss} tools in place";
    m["function-attach"] = "something to fasten {poss} poster";
    m["function-generic"] = "a sturdy piece for {poss} project";
    return t;
  }

  /// Override file: `key = pattern` lines, '#' comments. Unknown keys are
  /// rejected so typos surface immediately; omitted keys keep the default.
  static QuestionTemplates load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoFailure, "cannot open template file " + path);
    QuestionTemplates t = defaults();
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string s = trim(line);
      if (s.empty() || s[0] == '#') continue;
      size_t eq = s.find('=');
      if (eq == std::string::npos)
        fail(ErrorKind::ConfigError,
             path + ": line " + std::to_string(lineno) + " is not 'key = pattern'");
      std::string key = trim(s.substr(0, eq));
      std::string value = trim(s.substr(eq + 1));
      if (!t.table_.count(key))
        fail(ErrorKind::ConfigError, path + ": unknown template key '" + key + "'");
      if (value.empty())
        fail(ErrorKind::ConfigError, path + ": empty pattern for key '" + key + "'");
      t.table_[key] = value;
    }
    return t;
  }

  const std::string& pattern(const std::string& key) const {
    auto it = table_.find(key);
    if (it == table_.end()) fail(ErrorKind::ConfigError, "no template for key '" + key + "'");
    return it->second;
  }

  std::string render(const std::string& key, const std::map<std::string, std::string>& slots) const {
    std::string out = pattern(key);
    for (const auto& [slot, value] : slots) out = replace_all(out, "{" + slot + "}", value);
    static const std::regex kLeftover(R"(\{[A-Za-z_]+\})");
    std::smatch m;
    if (std::regex_search(out, m, kLeftover))
      fail(ErrorKind::ConfigError,
           "template '" + key + "' has unfilled slot " + m.str(0));
    return out;
  }

 private:
  std::map<std::string, std::string> table_;
};

/// Induced distractor pool: plausible sustaining objects that are absent
/// from the scene, keyed by verb class.
class TextDistractorLexicon {
 public:
  static TextDistractorLexicon defaults() {
    TextDistractorLexicon lex;
    lex.pools_[VerbClass::Support] = {"bookends", "bracket", "stand",  "pedestal",
                                      "easel",    "trestle", "prop",   "platform"};
    lex.pools_[VerbClass::Hold] = {"clamp", "strap", "clip",  "hook",
                                   "sling", "grip",  "tongs", "handle"};
    lex.pools_[VerbClass::Attach] = {"nail", "screw", "bolt",   "glue",
                                     "tape", "rivet", "staple", "fastener"};
    lex.pools_[VerbClass::Generic] = {"frame", "base", "anchor", "beam",
                                      "post",  "rod",  "brace",  "mount"};
    return lex;
  }

  /// File format: `class: word` lines, one entry per line.
  static TextDistractorLexicon load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoFailure, "cannot open distractor lexicon " + path);
    TextDistractorLexicon lex;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string s = trim(line);
      if (s.empty() || s[0] == '#') continue;
      size_t colon = s.find(':');
      if (colon == std::string::npos)
        fail(ErrorKind::ConfigError,
             path + ": line " + std::to_string(lineno) + " is not 'class: word'");
      VerbClass cls = verb_class_from_string(lower(trim(s.substr(0, colon))));
      std::string word = trim(s.substr(colon + 1));
      if (word.empty())
        fail(ErrorKind::ConfigError, path + ": empty word at line " + std::to_string(lineno));
      lex.pools_[cls].push_back(word);
    }
    if (lex.pools_.empty()) fail(ErrorKind::EmptyInput, path + " has no entries");
    return lex;
  }

  /// Pool for a class, falling back to the generic pool when empty.
  const std::vector<std::string>& pool(VerbClass v) const {
    auto it = pools_.find(v);
    if (it != pools_.end() && !it->second.empty()) return it->second;
    auto git = pools_.find(VerbClass::Generic);
    if (git != pools_.end() && !git->second.empty()) return git->second;
    fail(ErrorKind::EmptyInput, "text distractor lexicon has no usable pool");
  }

  bool contains(const std::string& word) const {
    for (const auto& [cls, pool] : pools_) {
      (void)cls;
      for (const auto& w : pool)
        if (lower(w) == lower(word)) return true;
    }
    return false;
  }

 private:
  std::map<VerbClass, std::vector<std::string>> pools_;
};

}  // namespace cello
