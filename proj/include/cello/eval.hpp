#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cot.hpp"
#include "errors.hpp"
#include "record.hpp"
#include "tasks.hpp"
#include "template_match.hpp"
#include "text.hpp"

namespace cello {

/// Transport-agnostic model interface. Implementations may talk to a remote
/// service or replay scripted answers; the harness treats them identically.
class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual std::string name() const = 0;
  virtual int timeout_ms() const { return 30000; }
  /// Returns the raw response text; throws on transport failure.
  virtual std::string generate(const std::string& prompt, const std::string& image_ref) = 0;
};

/// Replays a fixed response per record. The record is recovered from the
/// prompt by question-text containment (longest question wins), mirroring
/// how a scripted evaluation run is keyed.
class ScriptedClient : public ModelClient {
 public:
  using Responder = std::function<std::string(const Record&)>;

  ScriptedClient(std::string name, const std::vector<Record>& records, Responder responder)
      : name_(std::move(name)), records_(records), responder_(std::move(responder)) {}

  std::string name() const override { return name_; }

  std::string generate(const std::string& prompt, const std::string&) override {
    const Record* best = nullptr;
    for (const auto& r : records_) {
      if (prompt.find(r.question) == std::string::npos) continue;
      if (!best || r.question.size() > best->question.size()) best = &r;
    }
    if (!best) return "";
    return responder_(*best);
  }

 private:
  std::string name_;
  const std::vector<Record>& records_;
  Responder responder_;
};

/// Canonical answer stubs used by tests and the CLI's offline mode.
inline std::unique_ptr<ModelClient> make_stub(const std::string& kind,
                                              const std::vector<Record>& records) {
  auto gold_line = [](const Record& r) {
    if (r.format() == "BIN") return std::string("Final answer: ") + lower(r.gold);
    return std::string("Final answer: ") + option_letter(r.gold_index());
  };
  auto wrong_line = [](const Record& r) {
    size_t gold = r.gold_index();
    size_t pick = gold == 0 ? 1 : 0;
    if (r.format() == "BIN")
      return std::string("Final answer: ") + lower(r.options[pick].text);
    return std::string("Final answer: ") + option_letter(pick);
  };
  if (kind == "gold") return std::make_unique<ScriptedClient>("stub-gold", records, gold_line);
  if (kind == "wrong") return std::make_unique<ScriptedClient>("stub-wrong", records, wrong_line);
  if (kind == "yes")
    return std::make_unique<ScriptedClient>("stub-yes", records,
                                            [](const Record&) { return "Yes."; });
  if (kind == "no")
    return std::make_unique<ScriptedClient>("stub-no", records,
                                            [](const Record&) { return "No."; });
  if (kind == "idk")
    return std::make_unique<ScriptedClient>("stub-idk", records,
                                            [](const Record&) { return "I don't know."; });
  if (kind == "ood")
    return std::make_unique<ScriptedClient>("stub-ood", records,
                                            [](const Record&) { return "The curtain."; });
  if (kind == "garbage")
    return std::make_unique<ScriptedClient>(
        "stub-garbage", records,
        [](const Record&) { return "lorem ipsum dolor sit amet qq zz"; });
  fail(ErrorKind::ConfigError, "unknown stub kind '" + kind + "'");
}

enum class ErrorClass { Mischosen, OOD, Unformatted, Uncertain };

inline const char* to_string(ErrorClass e) {
  switch (e) {
    case ErrorClass::Mischosen: return "Mischosen";
    case ErrorClass::OOD: return "OOD";
    case ErrorClass::Unformatted: return "Unformatted";
    case ErrorClass::Uncertain: return "Uncertain";
  }
  return "Unformatted";
}

inline const std::array<ErrorClass, 4>& all_error_classes() {
  static const std::array<ErrorClass, 4> kAll = {ErrorClass::Mischosen, ErrorClass::OOD,
                                                 ErrorClass::Unformatted, ErrorClass::Uncertain};
  return kAll;
}

struct ParseResult {
  std::optional<size_t> choice;
  bool marker = false;          // a "Final answer:" line was present
  std::string marker_content;   // what followed it
};

namespace detail {

/// Comparable core of an option: lowercased, trailing period and leading
/// "because of " / "the " removed.
inline std::string option_core(const std::string& text) {
  std::string s = lower(trim(text));
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s.rfind("because of ", 0) == 0) s = s.substr(11);
  if (s.rfind("the ", 0) == 0) s = s.substr(4);
  return trim(s);
}

inline std::optional<size_t> match_letter_token(const std::string& content, size_t n_options) {
  std::string s = trim(content);
  if (s.empty()) return std::nullopt;
  char c = s[0];
  if (c == '(') {
    if (s.size() < 2) return std::nullopt;
    c = s[1];
  }
  char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper < 'A' || upper >= static_cast<char>('A' + n_options)) return std::nullopt;
  // The letter must stand alone, not start a word.
  size_t pos = s.find(c);
  if (pos + 1 < s.size() && is_word_char(s[pos + 1])) return std::nullopt;
  return static_cast<size_t>(upper - 'A');
}

inline std::optional<size_t> match_yes_no(const std::string& text, const Record& r) {
  for (const auto& tok : lexical_tokens(text)) {
    if (tok == "yes" || tok == "no") {
      for (size_t i = 0; i < r.options.size(); ++i)
        if (lower(r.options[i].text) == tok) return i;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

inline std::optional<size_t> match_option_text(const std::string& text, const Record& r) {
  std::optional<size_t> best;
  size_t best_len = 0;
  for (size_t i = 0; i < r.options.size(); ++i) {
    std::string core = option_core(r.options[i].text);
    if (core.empty()) continue;
    if (contains_word(text, core) && core.size() > best_len) {
      best = i;
      best_len = core.size();
    }
  }
  return best;
}

/// Maps the content of an explicit final-answer line to an option.
inline std::optional<size_t> map_marker_content(const std::string& content, const Record& r) {
  if (r.format() == "BIN") {
    if (auto c = match_yes_no(content, r)) return c;
    return std::nullopt;
  }
  if (auto c = match_letter_token(content, r.options.size())) return c;
  if (auto c = match_option_text(content, r)) return c;
  return std::nullopt;
}

}  // namespace detail

/// Extracts the chosen option. Precedence: explicit final-answer line, then
/// a standalone choice letter, then option-text containment, then a yes/no
/// keyword for binary records.
inline ParseResult parse_final_answer(const std::string& response, const Record& r) {
  ParseResult out;
  std::string low = lower(response);
  size_t pos = low.rfind("final answer");
  if (pos != std::string::npos) {
    out.marker = true;
    size_t start = pos + std::string("final answer").size();
    while (start < response.size() && (response[start] == ':' || response[start] == ' ')) ++start;
    size_t end = response.find('\n', start);
    if (end == std::string::npos) end = response.size();
    out.marker_content = trim(response.substr(start, end - start));
    if (auto c = detail::map_marker_content(out.marker_content, r)) {
      out.choice = c;
      return out;
    }
  }
  if (r.format() == "MCQ") {
    // Uppercase letter with a boundary, or any-case letter followed by ')'.
    static const std::regex kLetter(R"((?:^|[\s(])([A-Da-d])(?:[).:,]|\s|$))");
    for (auto it = std::sregex_iterator(response.begin(), response.end(), kLetter);
         it != std::sregex_iterator(); ++it) {
      std::string m = (*it)[1].str();
      char c = m[0];
      bool lower_case = c >= 'a' && c <= 'z';
      std::string suffix = it->suffix().str();
      std::string matched = it->str();
      bool followed_by_paren = matched.find(')') != std::string::npos;
      if (lower_case && !followed_by_paren) continue;
      size_t idx = static_cast<size_t>(std::toupper(static_cast<unsigned char>(c)) - 'A');
      if (idx < r.options.size()) {
        out.choice = idx;
        return out;
      }
    }
    if (auto c = detail::match_option_text(response, r)) {
      out.choice = c;
      return out;
    }
  } else {
    if (auto c = detail::match_yes_no(response, r)) {
      out.choice = c;
      return out;
    }
  }
  return out;
}

namespace detail {

inline bool expresses_uncertainty(const std::string& raw) {
  static const char* kPhrases[] = {
      "i don't know", "i do not know",  "cannot determine", "can't determine",
      "not sure",     "cannot tell",    "can't tell",       "unable to determine",
      "unable to tell", "no way to know",
  };
  std::string low = lower(raw);
  for (const char* p : kPhrases)
    if (low.find(p) != std::string::npos) return true;
  return false;
}

/// A confident answer outside the option set: an unmatched explicit
/// final-answer line, or a short direct noun-phrase reply.
inline bool looks_out_of_domain(const ParseResult& pr, const std::string& raw) {
  if (pr.marker && !pr.marker_content.empty()) return true;
  std::string low = lower(trim(raw));
  if (tokenize(low).size() > 5) return false;
  return low.rfind("the ", 0) == 0 || low.rfind("a ", 0) == 0 || low.rfind("an ", 0) == 0;
}

}  // namespace detail

/// Error taxonomy for an incorrect outcome. Priority: an explicit statement
/// of inability, then a confident non-option answer, then an unparseable
/// reply; a parsed-but-wrong choice is Mischosen.
inline std::optional<ErrorClass> classify_error(const ParseResult& pr, const std::string& raw,
                                                const Record& r) {
  bool correct = pr.choice && r.options[*pr.choice].text == r.gold;
  if (correct) return std::nullopt;
  if (detail::expresses_uncertainty(raw)) return ErrorClass::Uncertain;
  if (pr.choice) return ErrorClass::Mischosen;
  if (detail::looks_out_of_domain(pr, raw)) return ErrorClass::OOD;
  return ErrorClass::Unformatted;
}

struct EvalOutcome {
  std::string record_id;
  std::string raw;
  std::optional<size_t> choice;
  bool correct = false;
  std::optional<ErrorClass> error;
};

struct EvalConfig {
  size_t parallelism = 1;
  int retries = 2;
  int backoff_ms = 250;
};

/// Evaluates one response text against its record.
inline EvalOutcome judge(const Record& r, const std::string& response) {
  EvalOutcome o;
  o.record_id = r.id;
  o.raw = response;
  ParseResult pr = parse_final_answer(response, r);
  o.choice = pr.choice;
  o.correct = pr.choice && r.options[*pr.choice].text == r.gold;
  o.error = classify_error(pr, response, r);
  return o;
}

/// Runs the client over every record with bounded parallelism. Outcomes are
/// indexed by record order, so output is identical for any worker count.
/// A record that still fails after the retry budget is marked Unformatted
/// with the transport error as its raw text.
inline std::vector<EvalOutcome> run_eval(const std::vector<Record>& records, ModelClient& client,
                                         const PromptPlan& plan, const EvalConfig& cfg = {}) {
  if (cfg.parallelism < 1) fail(ErrorKind::ConfigError, "parallelism must be at least 1");
  plan.validate();
  std::vector<EvalOutcome> outcomes(records.size());
  std::atomic<size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= records.size()) return;
      const Record& r = records[i];
      std::string prompt = build_prompt(r, plan);
      std::string response;
      bool got = false;
      std::string last_error;
      for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
        if (attempt > 0)
          std::this_thread::sleep_for(
              std::chrono::milliseconds(cfg.backoff_ms * (1 << (attempt - 1))));
        try {
          response = client.generate(prompt, r.image_id);
          got = true;
          break;
        } catch (const std::exception& e) {
          last_error = e.what();
        }
      }
      if (got) {
        outcomes[i] = judge(r, response);
      } else {
        EvalOutcome o;
        o.record_id = r.id;
        o.raw = "transport failure: " + last_error;
        o.correct = false;
        o.error = ErrorClass::Unformatted;
        outcomes[i] = o;
      }
    }
  };

  size_t n_threads = std::min(cfg.parallelism, records.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  return outcomes;
}

}  // namespace cello
