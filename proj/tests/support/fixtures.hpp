#pragma once

#include <string>
#include <vector>

#include <cello/rng.hpp>
#include <cello/scene_graph.hpp>

namespace fixtures {

using cello::Entity;
using cello::Relation;
using cello::RegionDescription;
using cello::SceneGraph;

/// The worked confounding example: a shelf fixed to a wall, books resting on
/// the shelf and leaning on the wall, plus a window that plays no causal
/// role. Wall sustains shelf and books; shelf sustains books.
inline SceneGraph shelf_scene() {
  SceneGraph s;
  s.image_id = "4001";
  s.objects = {Entity{"101", {"wall"}, {}, {}, {}, {}},
               Entity{"102", {"shelf"}, {}, {}, {}, {}},
               Entity{"103", {"books"}, {}, {}, {}, {}},
               Entity{"104", {"window"}, {}, {}, {}, {}}};
  s.relationships = {Relation{"102", "fixed to", "101"}, Relation{"103", "on", "102"},
                     Relation{"103", "leaning on", "101"}};
  s.regions = {RegionDescription{"books are on the shelf", {"103", "102"}},
               RegionDescription{"a window lets in light", {"104"}}};
  return s;
}

inline SceneGraph direct_scene() {
  SceneGraph s;
  s.image_id = "4002";
  s.objects = {Entity{"201", {"table"}, {}, {}, {}, {}},
               Entity{"202", {"cup"}, {}, {}, {}, {}},
               Entity{"203", {"curtain"}, {}, {}, {}, {}}};
  s.relationships = {Relation{"202", "on", "201"}};
  s.regions = {RegionDescription{"a cup sits on the table", {"202", "201"}}};
  return s;
}

inline SceneGraph chain_scene() {
  SceneGraph s;
  s.image_id = "4003";
  s.objects = {Entity{"301", {"floor"}, {}, {}, {}, {}},
               Entity{"302", {"table"}, {}, {}, {}, {}},
               Entity{"303", {"vase"}, {}, {}, {}, {}},
               Entity{"304", {"curtain"}, {}, {}, {}, {}}};
  s.relationships = {Relation{"302", "standing on", "301"}, Relation{"303", "on", "302"}};
  s.regions = {RegionDescription{"a vase on the table", {"303", "302"}},
               RegionDescription{"the table stands on the floor", {"302", "301"}}};
  return s;
}

inline SceneGraph collision_scene() {
  SceneGraph s;
  s.image_id = "4004";
  s.objects = {Entity{"401", {"barrel"}, {}, {}, {}, {}},
               Entity{"402", {"crate"}, {}, {}, {}, {}},
               Entity{"403", {"board"}, {}, {}, {}, {}},
               Entity{"404", {"plant"}, {}, {}, {}, {}}};
  s.relationships = {Relation{"403", "resting on", "401"},
                     Relation{"403", "leaning against", "402"}};
  s.regions = {RegionDescription{"a board rests across the barrel and the crate",
                                 {"403", "401", "402"}}};
  return s;
}

inline SceneGraph confounding_scene() { return shelf_scene(); }

/// Nouns for synthetic scenes. Disjoint from the text-distractor pools so
/// distractor realization never starves.
inline const std::vector<std::string>& noun_pool() {
  static const std::vector<std::string> kNouns = {
      "wall",    "shelf",  "books",  "table", "cup",     "ladder", "floor",  "ceiling",
      "desk",    "cabinet", "vase",  "plant", "box",     "crate",  "barrel", "plank",
      "board",   "tile",   "jar",    "mug",   "bottle",  "tray",   "basket", "pot",
      "pan",     "pipe",   "wire",   "cable", "curtain", "window", "door",   "chair",
      "stool",   "bench",  "rack",   "ledge", "sill",    "mantel", "counter", "sink"};
  return kNouns;
}

/// Seeded scene generator cycling through the four structure shapes. Entity
/// names are distinct within a scene; every scene carries one extra entity
/// outside the causal graph and regions over the related entities.
inline std::vector<SceneGraph> synthetic_corpus(size_t n_scenes, uint64_t seed) {
  static const std::vector<std::string> kOn = {"on", "resting on", "placed on", "sitting on",
                                               "stacked on"};
  static const std::vector<std::string> kLean = {"leaning on", "leaning against"};
  static const std::vector<std::string> kAttach = {"fixed to", "attached to", "mounted on",
                                                   "hanging on"};
  static const std::vector<std::string> kFinite = {"supports", "holds", "holds up", "carries"};

  std::vector<SceneGraph> out;
  for (size_t i = 0; i < n_scenes; ++i) {
    cello::Rng rng(cello::mix(seed, i + 1));
    std::vector<std::string> names = noun_pool();
    rng.shuffle(names);

    SceneGraph s;
    s.image_id = "syn" + std::to_string(i);
    auto add_entity = [&](size_t k) {
      s.objects.push_back(Entity{std::to_string(k + 1), {names[k]}, {}, {}, {}, {}});
    };
    // relation helper: subject rests on object (object sustains subject)
    auto rel_on = [&](size_t subj, size_t obj) {
      s.relationships.push_back(
          Relation{std::to_string(subj + 1), rng.pick(kOn), std::to_string(obj + 1)});
    };
    auto rel_lean = [&](size_t subj, size_t obj) {
      s.relationships.push_back(
          Relation{std::to_string(subj + 1), rng.pick(kLean), std::to_string(obj + 1)});
    };
    auto rel_attach = [&](size_t subj, size_t obj) {
      s.relationships.push_back(
          Relation{std::to_string(subj + 1), rng.pick(kAttach), std::to_string(obj + 1)});
    };
    // finite verb: subject sustains object
    auto rel_finite = [&](size_t subj, size_t obj) {
      s.relationships.push_back(
          Relation{std::to_string(subj + 1), rng.pick(kFinite), std::to_string(obj + 1)});
    };
    auto region = [&](const std::string& phrase, std::vector<size_t> ks) {
      RegionDescription r;
      r.phrase = phrase;
      for (size_t k : ks) r.object_ids.push_back(std::to_string(k + 1));
      s.regions.push_back(r);
    };

    switch (i % 4) {
      case 0: {  // direct: 0 sustains 1
        for (size_t k = 0; k < 3; ++k) add_entity(k);
        if (rng.coin())
          rel_on(1, 0);
        else
          rel_finite(0, 1);
        region("the " + names[1] + " and the " + names[0], {1, 0});
        break;
      }
      case 1: {  // chain: 0 -> 1 -> 2
        for (size_t k = 0; k < 4; ++k) add_entity(k);
        rel_on(1, 0);
        if (rng.coin())
          rel_on(2, 1);
        else
          rel_finite(1, 2);
        region("the " + names[1] + " rests on the " + names[0], {1, 0});
        region("the " + names[2] + " sits on the " + names[1], {2, 1});
        break;
      }
      case 2: {  // collision: 0 -> 2 <- 1
        for (size_t k = 0; k < 4; ++k) add_entity(k);
        rel_on(2, 0);
        rel_lean(2, 1);
        region("the " + names[2] + " spans the " + names[0] + " and the " + names[1], {2, 0, 1});
        break;
      }
      default: {  // confounding: 0 -> 1, 0 -> 2, 1 -> 2
        for (size_t k = 0; k < 4; ++k) add_entity(k);
        rel_attach(1, 0);
        rel_on(2, 1);
        rel_lean(2, 0);
        region("the " + names[2] + " on the " + names[1], {2, 1});
        region("the " + names[1] + " against the " + names[0], {1, 0});
        break;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace fixtures
