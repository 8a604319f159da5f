#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <cello/scene_graph.hpp>

#include "support/fixtures.hpp"

using namespace cello;

namespace {

Json shelf_doc() {
  return Json::parse(R"({
    "image_id": 4001,
    "objects": [
      {"object_id": 101, "names": ["wall"]},
      {"object_id": 102, "names": ["shelf"], "x": 10, "y": 20, "w": 30, "h": 5},
      {"object_id": 103, "names": ["books", "stack of books"]},
      {"object_id": 104, "names": ["window"]}
    ],
    "relationships": [
      {"subject_id": 102, "predicate": "fixed to", "object_id": 101},
      {"subject_id": 103, "predicate": "on", "object_id": 102},
      {"subject_id": 103, "predicate": "leaning on", "object_id": 101}
    ],
    "regions": [
      {"phrase": "books are on the shelf", "object_ids": [103, 102]}
    ]
  })");
}

}  // namespace

TEST_CASE("parses a scene with numeric ids") {
  SceneGraph g = parse_scene_graph(shelf_doc());
  CHECK(g.image_id == "4001");
  REQUIRE(g.objects.size() == 4);
  CHECK(g.objects[0].id == "101");
  CHECK(g.objects[0].name() == "wall");
  CHECK(g.objects[2].names.size() == 2);
  CHECK(g.objects[1].x == 10.0);
  REQUIRE(g.relationships.size() == 3);
  CHECK(g.relationships[0].predicate == "fixed to");
  REQUIRE(g.regions.size() == 1);
  CHECK(g.regions[0].object_ids == std::vector<std::string>({"103", "102"}));
}

TEST_CASE("string ids are accepted and round-trip as strings") {
  Json doc = Json::parse(R"({
    "image_id": "img-7",
    "objects": [{"object_id": "a", "names": ["cup"]}],
    "relationships": [],
    "regions": []
  })");
  SceneGraph g = parse_scene_graph(doc);
  CHECK(g.image_id == "img-7");
  Json out = serialize_scene_graph(g);
  CHECK(out["image_id"].is_string());
  CHECK(out["objects"][0]["object_id"] == "a");
}

TEST_CASE("numeric ids serialize back as numbers") {
  SceneGraph g = parse_scene_graph(shelf_doc());
  Json out = serialize_scene_graph(g);
  CHECK(out["image_id"] == 4001);
  CHECK(out["objects"][0]["object_id"] == 101);
  CHECK(out["regions"][0]["object_ids"][0] == 103);
  // full round trip
  SceneGraph again = parse_scene_graph(out);
  CHECK(serialize_scene_graph(again) == out);
}

TEST_CASE("rejects dangling references") {
  Json doc = shelf_doc();
  doc["relationships"][0]["object_id"] = 999;
  try {
    parse_scene_graph(doc);
    FAIL("expected dangling reference");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DanglingReference);
  }

  Json doc2 = shelf_doc();
  doc2["regions"][0]["object_ids"][0] = 999;
  CHECK_THROWS_AS(parse_scene_graph(doc2), Error);
}

TEST_CASE("rejects malformed documents") {
  auto expect_malformed = [](Json doc) {
    try {
      parse_scene_graph(doc);
      FAIL("expected malformed document");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MalformedDocument);
    }
  };
  expect_malformed(Json::parse("[]"));
  Json no_names = shelf_doc();
  no_names["objects"][0].erase("names");
  expect_malformed(no_names);
  Json empty_names = shelf_doc();
  empty_names["objects"][0]["names"] = Json::array();
  expect_malformed(empty_names);
  Json dup = shelf_doc();
  dup["objects"][1]["object_id"] = 101;
  expect_malformed(dup);
  Json bad_pred = shelf_doc();
  bad_pred["relationships"][0]["predicate"] = "";
  expect_malformed(bad_pred);
}

TEST_CASE("line-delimited and array corpus parsing agree") {
  std::string one = shelf_doc().dump();
  std::istringstream nd(one + "\n\n" + one + "\n");
  auto a = parse_scene_graphs(nd, true);
  REQUIRE(a.size() == 2);

  std::istringstream arr("[" + one + "," + one + "]");
  auto b = parse_scene_graphs(arr, false);
  REQUIRE(b.size() == 2);
  CHECK(serialize_scene_graph(a[0]) == serialize_scene_graph(b[0]));
}

TEST_CASE("line numbers surface in corpus errors") {
  std::istringstream nd(shelf_doc().dump() + "\n{not json\n");
  try {
    parse_scene_graphs(nd, true);
    FAIL("expected parse failure");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("human lexicon flags people by name or head noun") {
  HumanLexicon lex = HumanLexicon::defaults();
  CHECK(lex.is_human("man"));
  CHECK(lex.is_human("young man"));
  CHECK(lex.is_human("tennis player"));
  CHECK_FALSE(lex.is_human("shelf"));
  CHECK_FALSE(lex.is_human("bookshelf"));

  Entity person{"1", {"woman"}, {}, {}, {}, {}};
  Entity cup{"2", {"cup"}, {}, {}, {}, {}};
  CHECK(lex.is_human(person.name()));
  CHECK_FALSE(lex.is_human(cup.name()));
}

TEST_CASE("data file mirrors the built-in human lexicon") {
  HumanLexicon from_file = HumanLexicon::load(std::string(CELLO_DATA_DIR) + "/human_lexicon.txt");
  HumanLexicon builtin = HumanLexicon::defaults();
  for (const char* probe : {"man", "woman", "tennis player", "umpire", "toddler"})
    CHECK(from_file.is_human(probe) == builtin.is_human(probe));
  CHECK_FALSE(from_file.is_human("table"));
}

TEST_CASE("regions index by member entity") {
  SceneGraph g = fixtures::shelf_scene();
  auto idx = index_regions(g);
  REQUIRE(idx.count("103"));
  CHECK(idx.at("103").size() == 1);
  CHECK(idx.at("103")[0]->phrase == "books are on the shelf");
  CHECK(idx.count("101") == 0);
}
