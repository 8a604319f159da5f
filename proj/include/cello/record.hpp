#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "tasks.hpp"
#include "template_match.hpp"

namespace cello {

using Json = nlohmann::ordered_json;

/// Answer option with its origin: "gold" for the correct choice; "image",
/// "graph", "text" for the three distractor classes; "complement" for the
/// wrong side of a yes/no pair.
struct OptionEntry {
  std::string text;
  std::string provenance;
};

/// One benchmark question. `gold` always equals the text of exactly one
/// option. `format` and `rung` are derived from `task` on serialization and
/// re-checked on load.
struct Record {
  std::string id;
  std::string image_id;
  TaskKind task = TaskKind::CaI;
  GraphKind graph_kind = GraphKind::Direct;
  std::string question;
  std::vector<std::string> context;
  std::vector<std::string> rationale;
  std::vector<OptionEntry> options;
  std::string gold;
  bool robustness = false;
  uint64_t seed = 0;

  std::string format() const { return is_binary(task) ? "BIN" : "MCQ"; }

  size_t gold_index() const {
    for (size_t i = 0; i < options.size(); ++i)
      if (options[i].text == gold) return i;
    fail(ErrorKind::SchemaViolation, "record " + id + ": gold matches no option");
  }
};

inline Json to_json(const Record& r) {
  Json doc;
  doc["id"] = r.id;
  doc["image_id"] = r.image_id;
  doc["task"] = to_string(r.task);
  doc["rung"] = to_string(rung_of(r.task));
  doc["graph_kind"] = to_string(r.graph_kind);
  doc["format"] = r.format();
  doc["question"] = r.question;
  doc["context"] = r.context;
  doc["rationale"] = r.rationale;
  doc["options"] = Json::array();
  for (const auto& o : r.options) {
    Json opt;
    opt["text"] = o.text;
    opt["provenance"] = o.provenance;
    doc["options"].push_back(std::move(opt));
  }
  doc["gold"] = r.gold;
  doc["robustness"] = r.robustness;
  doc["seed"] = r.seed;
  return doc;
}

inline Record record_from_json(const Json& doc) {
  if (!doc.is_object()) fail(ErrorKind::SchemaViolation, "record is not an object");
  auto need = [&](const char* key) -> const Json& {
    auto it = doc.find(key);
    if (it == doc.end())
      fail(ErrorKind::SchemaViolation, std::string("record missing field '") + key + "'");
    return *it;
  };
  auto str = [&](const char* key) {
    const Json& v = need(key);
    if (!v.is_string()) fail(ErrorKind::SchemaViolation, std::string(key) + " must be a string");
    return v.get<std::string>();
  };
  Record r;
  r.id = str("id");
  r.image_id = str("image_id");
  r.task = task_from_string(str("task"));
  if (str("rung") != to_string(rung_of(r.task)))
    fail(ErrorKind::SchemaViolation, "record " + r.id + ": rung does not match task");
  r.graph_kind = graph_kind_from_string(str("graph_kind"));
  r.question = str("question");
  for (const char* key : {"context", "rationale"}) {
    const Json& arr = need(key);
    if (!arr.is_array()) fail(ErrorKind::SchemaViolation, std::string(key) + " must be an array");
    auto& dst = std::string(key) == "context" ? r.context : r.rationale;
    for (const Json& v : arr) {
      if (!v.is_string())
        fail(ErrorKind::SchemaViolation, std::string(key) + " entries must be strings");
      dst.push_back(v.get<std::string>());
    }
  }
  const Json& opts = need("options");
  if (!opts.is_array() || opts.empty())
    fail(ErrorKind::SchemaViolation, "options must be a non-empty array");
  const size_t expected = is_binary(r.task) ? 2 : 4;
  if (opts.size() != expected)
    fail(ErrorKind::SchemaViolation, "record " + r.id + ": expected " + std::to_string(expected) +
                                         " options, got " + std::to_string(opts.size()));
  for (const Json& o : opts) {
    if (!o.is_object() || !o.contains("text") || !o.contains("provenance"))
      fail(ErrorKind::SchemaViolation, "each option needs text and provenance");
    r.options.push_back({o["text"].get<std::string>(), o["provenance"].get<std::string>()});
  }
  r.gold = str("gold");
  if (str("format") != r.format())
    fail(ErrorKind::SchemaViolation, "record " + r.id + ": format does not match task");
  const Json& rob = need("robustness");
  if (!rob.is_boolean()) fail(ErrorKind::SchemaViolation, "robustness must be a boolean");
  r.robustness = rob.get<bool>();
  const Json& seed = need("seed");
  if (!seed.is_number_integer() && !seed.is_number_unsigned())
    fail(ErrorKind::SchemaViolation, "seed must be an integer");
  r.seed = seed.get<uint64_t>();
  r.gold_index();  // validates gold is one of the options
  return r;
}

}  // namespace cello
