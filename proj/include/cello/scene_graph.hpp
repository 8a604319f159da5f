#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "text.hpp"

namespace cello {

using Json = nlohmann::ordered_json;

struct Entity {
  std::string id;
  std::vector<std::string> names;
  std::optional<double> x, y, w, h;

  /// Preferred surface form; the first listed name.
  const std::string& name() const { return names.front(); }
};

struct Relation {
  std::string subject_id;
  std::string predicate;
  std::string object_id;
};

struct RegionDescription {
  std::string phrase;
  std::vector<std::string> object_ids;
};

struct SceneGraph {
  std::string image_id;
  std::vector<Entity> objects;
  std::vector<Relation> relationships;
  std::vector<RegionDescription> regions;

  const Entity* find(const std::string& id) const {
    for (const auto& e : objects)
      if (e.id == id) return &e;
    return nullptr;
  }

  const Entity& require(const std::string& id) const {
    const Entity* e = find(id);
    if (!e) fail(ErrorKind::UnknownEntity, "no entity with id " + id + " in image " + image_id);
    return *e;
  }
};

/// Set of nouns treated as people when partitioning a scene into human and
/// non-human entities. Loaded from a plain word-per-line file; lines starting
/// with '#' are comments.
class HumanLexicon {
 public:
  HumanLexicon() = default;

  static HumanLexicon defaults() {
    HumanLexicon lex;
    static const char* kWords[] = {
        "man", "men", "woman", "women", "person", "people", "child", "children",
        "boy", "boys", "girl", "girls", "guy", "lady", "gentleman", "kid", "kids",
        "player", "players", "rider", "skier", "snowboarder", "skateboarder",
        "surfer", "pedestrian", "worker", "officer", "driver", "passenger",
        "crowd", "team", "chef", "waiter", "waitress", "batter", "pitcher",
        "catcher", "umpire", "tennis player", "baseball player", "spectator",
        "spectators", "family", "couple", "baby", "toddler", "teenager",
    };
    for (const char* w : kWords) lex.words_.insert(w);
    return lex;
  }

  static HumanLexicon load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoFailure, "cannot open human lexicon " + path);
    HumanLexicon lex;
    std::string line;
    while (std::getline(in, line)) {
      std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      lex.words_.insert(lower(t));
    }
    if (lex.words_.empty()) fail(ErrorKind::EmptyInput, "human lexicon " + path + " has no entries");
    return lex;
  }

  bool is_human(std::string_view raw) const {
    std::string name = lower(trim(raw));
    if (words_.count(name)) return true;
    // Fall back to the head noun ("young man" -> "man").
    auto toks = tokenize(name);
    return !toks.empty() && words_.count(toks.back());
  }

  bool is_human(const Entity& e) const {
    for (const auto& n : e.names)
      if (is_human(n)) return true;
    return false;
  }

  size_t size() const { return words_.size(); }

 private:
  std::set<std::string> words_;
};

namespace detail {

/// Ids may arrive as JSON numbers or strings; both normalize to the decimal
/// string form so later joins by id are exact.
inline std::string id_from_json(const Json& v, const std::string& where) {
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_string()) {
    std::string s = trim(v.get<std::string>());
    if (s.empty()) fail(ErrorKind::MalformedDocument, "empty id in " + where);
    return s;
  }
  fail(ErrorKind::MalformedDocument, "id must be a number or string in " + where);
}

inline bool looks_numeric(const std::string& id) {
  if (id.empty()) return false;
  for (char c : id)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return id.size() == 1 || id[0] != '0';
}

inline Json id_to_json(const std::string& id) {
  if (looks_numeric(id)) return Json(std::stoll(id));
  return Json(id);
}

inline const Json& field(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    fail(ErrorKind::MalformedDocument, std::string("missing field '") + key + "' in " + where);
  return *it;
}

}  // namespace detail

/// Parses one scene-graph document (a single image record).
inline SceneGraph parse_scene_graph(const Json& doc) {
  if (!doc.is_object()) fail(ErrorKind::MalformedDocument, "scene record is not an object");
  SceneGraph g;
  const Json& image_id = detail::field(doc, "image_id", "scene record");
  g.image_id = detail::id_from_json(image_id, "image_id");
  const std::string where = "image " + g.image_id;

  const Json& objects = detail::field(doc, "objects", where);
  if (!objects.is_array()) fail(ErrorKind::MalformedDocument, "objects is not an array in " + where);
  std::set<std::string> ids;
  for (const Json& o : objects) {
    if (!o.is_object()) fail(ErrorKind::MalformedDocument, "object entry is not an object in " + where);
    Entity e;
    e.id = detail::id_from_json(detail::field(o, "object_id", where), where);
    const Json& names = detail::field(o, "names", where + " object " + e.id);
    if (!names.is_array() || names.empty())
      fail(ErrorKind::MalformedDocument, "object " + e.id + " needs a non-empty names array in " + where);
    for (const Json& n : names) {
      if (!n.is_string())
        fail(ErrorKind::MalformedDocument, "object " + e.id + " has a non-string name in " + where);
      std::string name = trim(n.get<std::string>());
      if (name.empty())
        fail(ErrorKind::MalformedDocument, "object " + e.id + " has an empty name in " + where);
      e.names.push_back(name);
    }
    auto num = [&](const char* key) -> std::optional<double> {
      auto it = o.find(key);
      if (it == o.end() || it->is_null()) return std::nullopt;
      if (!it->is_number())
        fail(ErrorKind::MalformedDocument, std::string(key) + " must be numeric in " + where);
      return it->get<double>();
    };
    e.x = num("x");
    e.y = num("y");
    e.w = num("w");
    e.h = num("h");
    if (!ids.insert(e.id).second)
      fail(ErrorKind::MalformedDocument, "duplicate object id " + e.id + " in " + where);
    g.objects.push_back(std::move(e));
  }

  auto check_ref = [&](const std::string& id, const char* role) {
    if (!ids.count(id))
      fail(ErrorKind::DanglingReference,
           std::string(role) + " references unknown object " + id + " in " + where);
  };

  if (auto it = doc.find("relationships"); it != doc.end() && !it->is_null()) {
    if (!it->is_array())
      fail(ErrorKind::MalformedDocument, "relationships is not an array in " + where);
    for (const Json& r : *it) {
      if (!r.is_object())
        fail(ErrorKind::MalformedDocument, "relationship entry is not an object in " + where);
      Relation rel;
      rel.subject_id = detail::id_from_json(detail::field(r, "subject_id", where), where);
      const Json& pred = detail::field(r, "predicate", where);
      if (!pred.is_string())
        fail(ErrorKind::MalformedDocument, "predicate must be a string in " + where);
      rel.predicate = trim(pred.get<std::string>());
      if (rel.predicate.empty())
        fail(ErrorKind::MalformedDocument, "empty predicate in " + where);
      rel.object_id = detail::id_from_json(detail::field(r, "object_id", where), where);
      check_ref(rel.subject_id, "relationship subject");
      check_ref(rel.object_id, "relationship object");
      g.relationships.push_back(std::move(rel));
    }
  }

  if (auto it = doc.find("regions"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) fail(ErrorKind::MalformedDocument, "regions is not an array in " + where);
    for (const Json& r : *it) {
      if (!r.is_object())
        fail(ErrorKind::MalformedDocument, "region entry is not an object in " + where);
      RegionDescription reg;
      const Json& phrase = detail::field(r, "phrase", where);
      if (!phrase.is_string())
        fail(ErrorKind::MalformedDocument, "region phrase must be a string in " + where);
      reg.phrase = trim(phrase.get<std::string>());
      const Json& oids = detail::field(r, "object_ids", where);
      if (!oids.is_array())
        fail(ErrorKind::MalformedDocument, "region object_ids is not an array in " + where);
      for (const Json& oid : oids) {
        std::string id = detail::id_from_json(oid, where);
        check_ref(id, "region");
        reg.object_ids.push_back(std::move(id));
      }
      g.regions.push_back(std::move(reg));
    }
  }

  return g;
}

inline Json serialize_scene_graph(const SceneGraph& g) {
  Json doc;
  doc["image_id"] = detail::id_to_json(g.image_id);
  doc["objects"] = Json::array();
  for (const auto& e : g.objects) {
    Json o;
    o["object_id"] = detail::id_to_json(e.id);
    o["names"] = e.names;
    if (e.x) o["x"] = *e.x;
    if (e.y) o["y"] = *e.y;
    if (e.w) o["w"] = *e.w;
    if (e.h) o["h"] = *e.h;
    doc["objects"].push_back(std::move(o));
  }
  doc["relationships"] = Json::array();
  for (const auto& r : g.relationships) {
    Json o;
    o["subject_id"] = detail::id_to_json(r.subject_id);
    o["predicate"] = r.predicate;
    o["object_id"] = detail::id_to_json(r.object_id);
    doc["relationships"].push_back(std::move(o));
  }
  doc["regions"] = Json::array();
  for (const auto& r : g.regions) {
    Json o;
    o["phrase"] = r.phrase;
    o["object_ids"] = Json::array();
    for (const auto& id : r.object_ids) o["object_ids"].push_back(detail::id_to_json(id));
    doc["regions"].push_back(std::move(o));
  }
  return doc;
}

/// Parses a corpus from a stream. Line-delimited mode expects one JSON record
/// per non-blank line; array mode expects one top-level JSON array.
inline std::vector<SceneGraph> parse_scene_graphs(std::istream& in, bool line_delimited) {
  std::vector<SceneGraph> out;
  if (line_delimited) {
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string t = trim(line);
      if (t.empty()) continue;
      Json doc = Json::parse(t, nullptr, false);
      if (doc.is_discarded())
        fail(ErrorKind::MalformedDocument, "invalid JSON on line " + std::to_string(lineno));
      out.push_back(parse_scene_graph(doc));
    }
  } else {
    Json doc = Json::parse(in, nullptr, false);
    if (doc.is_discarded()) fail(ErrorKind::MalformedDocument, "invalid JSON document");
    if (!doc.is_array()) fail(ErrorKind::MalformedDocument, "top-level value is not an array");
    for (const Json& rec : doc) out.push_back(parse_scene_graph(rec));
  }
  return out;
}

inline std::vector<SceneGraph> load_scene_graphs(const std::string& path, bool line_delimited) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoFailure, "cannot open scene graph file " + path);
  return parse_scene_graphs(in, line_delimited);
}

/// Regions indexed by member object id; preserves corpus order per entity.
inline std::map<std::string, std::vector<const RegionDescription*>> index_regions(const SceneGraph& g) {
  std::map<std::string, std::vector<const RegionDescription*>> idx;
  for (const auto& r : g.regions)
    for (const auto& id : r.object_ids) idx[id].push_back(&r);
  return idx;
}

}  // namespace cello
