#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>

#include <cello/dataset_io.hpp>
#include <cello/pipeline.hpp>

#include "support/fixtures.hpp"

using namespace cello;

namespace {

std::vector<Record> shelf_records(uint64_t seed = 1) {
  SceneAnalysis a = analyze_scene(fixtures::shelf_scene(), PredicateLexicon::defaults());
  GenOptions opt;
  opt.seed = seed;
  return generate_questions(a.scene, a.graph, a.matches, opt).records;
}

std::vector<Record> corpus_records(size_t scenes, uint64_t seed) {
  GenOptions opt;
  opt.seed = seed;
  return generate_corpus(fixtures::synthetic_corpus(scenes, seed), PredicateLexicon::defaults(), opt)
      .records;
}

}  // namespace

TEST_CASE("datasets survive a write-read round trip byte for byte") {
  std::vector<Record> recs = shelf_records();
  std::ostringstream first;
  write_records(first, recs);

  std::istringstream in(first.str());
  std::vector<Record> back = read_records(in);
  REQUIRE(back.size() == recs.size());

  std::ostringstream second;
  write_records(second, back);
  CHECK(first.str() == second.str());
}

TEST_CASE("blank lines are ignored, bad lines are pinpointed") {
  std::vector<Record> recs = shelf_records();
  std::string one = to_json(recs[0]).dump();

  SECTION("blank and whitespace lines") {
    std::istringstream in("\n" + one + "\n   \n" + one + "\n");
    CHECK(read_records(in).size() == 2);
  }
  SECTION("invalid json names the line") {
    std::istringstream in(one + "\n{not json\n");
    try {
      read_records(in);
      FAIL("expected SchemaViolation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SchemaViolation);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SECTION("schema errors name the line") {
    Json doc = to_json(recs[0]);
    doc.erase("gold");
    std::istringstream in(one + "\n" + one + "\n" + doc.dump() + "\n");
    try {
      read_records(in);
      FAIL("expected SchemaViolation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SchemaViolation);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SECTION("wrong option count names the line") {
    Json doc = to_json(recs[0]);
    doc["options"].erase(3);
    std::istringstream in(doc.dump() + "\n");
    REQUIRE_THROWS_AS(read_records(in), Error);
  }
}

TEST_CASE("file round trip through a real path") {
  std::vector<Record> recs = shelf_records();
  std::string path = "/tmp/cello_io_test.ndjson";
  CHECK(write_dataset(path, recs) == recs.size());
  std::vector<Record> back = read_dataset(path);
  REQUIRE(back.size() == recs.size());
  for (size_t i = 0; i < recs.size(); ++i)
    CHECK(to_json(back[i]).dump() == to_json(recs[i]).dump());
  CHECK_THROWS_AS(read_dataset("/tmp/does_not_exist_cello.ndjson"), Error);
}

TEST_CASE("stats count what the shelf corpus contains") {
  std::vector<Record> recs = shelf_records();
  DatasetStats s = compute_stats(recs);
  CHECK(s.total == 12);
  CHECK(s.robustness_count == 0);
  CHECK(s.by_rung.count(Rung::Discovery) == 0);
  CHECK(s.by_rung.count(Rung::Association) == 0);
  CHECK(s.by_rung.at(Rung::Intervention) == 4);    // CoI, BAS, CDE pair
  CHECK(s.by_rung.at(Rung::Counterfactual) == 8);  // NDE, NIE, SC x2 foci
  CHECK(s.by_task.at(TaskKind::CoI).count == 1);
  CHECK(s.by_task.at(TaskKind::SC).count == 4);
  CHECK(s.by_graph_kind.at(GraphKind::Confounding) == 12);
  CHECK(s.by_graph_kind.count(GraphKind::Direct) == 0);
  CHECK(s.graph_task.at(GraphKind::Confounding).at(TaskKind::NDE) == 2);
  CHECK(s.binary_count == 10);
  CHECK(s.binary_yes == 5);  // each pair contributes exactly one yes
  CHECK(s.binary_yes_rate() == 0.5);

  // "Why are the books placed steadily?" is six tokens
  CHECK(s.by_task.at(TaskKind::CoI).mean_question_tokens() == 6.0);
  // gold "Because of the shelf and the wall." is seven tokens
  CHECK(s.by_task.at(TaskKind::CoI).mean_answer_tokens() == 7.0);
}

TEST_CASE("stats are invariant under record order") {
  std::vector<Record> recs = corpus_records(24, 7);
  Json a = stats_to_json(compute_stats(recs));
  std::mt19937 urbg(99);
  std::shuffle(recs.begin(), recs.end(), urbg);
  Json b = stats_to_json(compute_stats(recs));
  CHECK(a.dump() == b.dump());
}

TEST_CASE("stats json keeps every task and rung key") {
  DatasetStats s = compute_stats({});
  Json doc = stats_to_json(s);
  CHECK(doc["total"] == 0);
  CHECK(doc["by_rung"].size() == 4);
  CHECK(doc["by_task"].size() == 12);
  for (TaskKind t : all_tasks()) {
    REQUIRE(doc["by_task"].contains(to_string(t)));
    if (is_binary(t)) CHECK(doc["by_task"][to_string(t)]["mean_answer_tokens"].is_null());
  }
  CHECK(doc["by_graph_kind"].size() == 4);
  std::string text = render_stats(s);
  CHECK(text.find("total records: 0") != std::string::npos);
  for (TaskKind t : all_tasks()) CHECK(text.find(to_string(t)) != std::string::npos);
}

TEST_CASE("rendered stats carry the headline numbers") {
  std::vector<Record> recs = shelf_records();
  std::string text = render_stats(compute_stats(recs));
  CHECK(text.find("total records: 12") != std::string::npos);
  CHECK(text.find("binary yes-rate: 0.50 over 10 records") != std::string::npos);
  CHECK(text.find("counterfactual") != std::string::npos);
}

TEST_CASE("sampling draws exactly the asked-for slice") {
  std::vector<Record> recs = corpus_records(200, 3);
  std::map<TaskKind, size_t> have;
  for (const auto& r : recs) ++have[r.task];
  size_t per_task = 10;
  for (TaskKind t : all_tasks()) REQUIRE(have[t] >= per_task);

  std::vector<Record> sampled = sample_test_set(recs, per_task, 11);
  REQUIRE(sampled.size() == per_task * 12);

  // canonical task order, ids sorted inside each block
  size_t pos = 0;
  for (TaskKind t : all_tasks()) {
    for (size_t i = 0; i < per_task; ++i, ++pos) {
      CHECK(sampled[pos].task == t);
      if (i > 0) CHECK(sampled[pos - 1].id < sampled[pos].id);
    }
  }
}

TEST_CASE("sampling ignores input order but honours the seed") {
  std::vector<Record> recs = corpus_records(200, 3);
  std::vector<Record> a = sample_test_set(recs, 8, 21);

  std::vector<Record> shuffled = recs;
  std::mt19937 urbg(5);
  std::shuffle(shuffled.begin(), shuffled.end(), urbg);
  std::vector<Record> b = sample_test_set(shuffled, 8, 21);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].id == b[i].id);

  std::vector<Record> c = sample_test_set(recs, 8, 22);
  bool same = true;
  for (size_t i = 0; i < a.size(); ++i) same &= a[i].id == c[i].id;
  CHECK_FALSE(same);
}

TEST_CASE("sampling failure modes") {
  std::vector<Record> recs = shelf_records();

  SECTION("missing tasks are reported by name") {
    try {
      sample_test_set(recs, 1, 1);
      FAIL("expected InsufficientRecords");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InsufficientRecords);
      CHECK(std::string(e.what()).find("CaI") != std::string::npos);
    }
  }
  SECTION("robustness records never count toward the pool") {
    std::vector<Record> recs2 = corpus_records(100, 3);
    size_t plain = 0;
    for (auto& r : recs2)
      if (r.task == TaskKind::CR && !r.robustness) ++plain;
    // flip everything but one CR record to robustness
    size_t kept = 0;
    for (auto& r : recs2)
      if (r.task == TaskKind::CR && !r.robustness && ++kept > 1) r.robustness = true;
    REQUIRE(plain > 2);
    CHECK_THROWS_AS(sample_test_set(recs2, 2, 1), Error);
    std::vector<Record> one = sample_test_set(recs2, 1, 1);
    for (const auto& r : one) CHECK_FALSE(r.robustness);
  }
  SECTION("zero per task is an empty draw") {
    CHECK(sample_test_set(recs, 0, 1).empty());
  }
}
