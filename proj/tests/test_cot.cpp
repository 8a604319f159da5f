#include <catch2/catch_amalgamated.hpp>

#include <cello/cot.hpp>
#include <cello/pipeline.hpp>

#include "support/fixtures.hpp"

using namespace cello;

namespace {

std::vector<Record> shelf_records() {
  SceneAnalysis a = analyze_scene(fixtures::shelf_scene(), PredicateLexicon::defaults());
  GenOptions opt;
  return generate_questions(a.scene, a.graph, a.matches, opt).records;
}

const Record& by_task(const std::vector<Record>& recs, TaskKind t) {
  for (const auto& r : recs)
    if (r.task == t) return r;
  FAIL("no record for task");
  return recs.front();
}

}  // namespace

TEST_CASE("plans parse, print, and validate") {
  CHECK(PromptPlan::full().to_string() == "s1,s2,s3,s4");
  CHECK(PromptPlan::parse("s1,s2,s3,s4").to_string() == "s1,s2,s3,s4");
  CHECK(PromptPlan::parse(" S1 , s3 ").to_string() == "s1,s3");
  CHECK(PromptPlan::parse("s4").to_string() == "s4");
  CHECK(PromptPlan::without(Step::S2).to_string() == "s1,s3,s4");
  CHECK(PromptPlan::without(Step::S4).to_string() == "s1,s2,s3");
  CHECK(PromptPlan::full().contains(Step::S3));
  CHECK_FALSE(PromptPlan::without(Step::S3).contains(Step::S3));

  CHECK_THROWS_AS(PromptPlan::parse(""), Error);
  CHECK_THROWS_AS(PromptPlan::parse("s1,s5"), Error);
  CHECK_THROWS_AS(PromptPlan::parse("s2,s1"), Error);   // out of order
  CHECK_THROWS_AS(PromptPlan::parse("s1,s1"), Error);   // repeated
  CHECK_THROWS_AS(PromptPlan{}.validate(), Error);      // empty
  try {
    PromptPlan::parse("s1,sx");
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
    CHECK(std::string(e.what()).find("sx") != std::string::npos);
  }
}

TEST_CASE("the full prompt carries steps, context, question, and directive") {
  std::vector<Record> recs = shelf_records();
  const Record& coi = by_task(recs, TaskKind::CoI);
  std::string p = build_prompt(coi, PromptPlan::full());

  CHECK(p.rfind("You will answer a causal question about an image.\n", 0) == 0);
  size_t s1 = p.find("Step 1: List the core entities");
  size_t s2 = p.find("Step 2: Identify the causal graph");
  size_t s3 = p.find("Step 3: Determine which type of causal task");
  size_t s4 = p.find("Step 4: Use this causal knowledge: ");
  size_t ctx = p.find("\nContext:\n- books are on the shelf\n");
  size_t q = p.find("\nQuestion: Why are the books placed steadily?\n");
  size_t opts = p.find("Options:\nA) ");
  size_t fin = p.find("Final answer: <letter of the chosen option>\n");
  REQUIRE(s1 != std::string::npos);
  REQUIRE(s4 != std::string::npos);
  REQUIRE(ctx != std::string::npos);
  REQUIRE(q != std::string::npos);
  REQUIRE(opts != std::string::npos);
  REQUIRE(fin != std::string::npos);
  CHECK(s1 < s2);
  CHECK(s2 < s3);
  CHECK(s3 < s4);
  CHECK(s4 < ctx);
  CHECK(ctx < q);
  CHECK(q < opts);
  CHECK(opts < fin);

  // options appear lettered in stored order
  for (size_t i = 0; i < coi.options.size(); ++i) {
    std::string line = std::string(1, static_cast<char>('A' + i)) + ") " + coi.options[i].text;
    CHECK(p.find(line) != std::string::npos);
  }
  // snippet matches the record's task
  CHECK(p.find(knowledge_snippet(TaskKind::CoI)) != std::string::npos);
}

TEST_CASE("binary prompts ask for yes or no instead of a letter") {
  std::vector<Record> recs = shelf_records();
  const Record& cde = by_task(recs, TaskKind::CDE);
  std::string p = build_prompt(cde, PromptPlan::full());
  CHECK(p.find("Answer yes or no.\n") != std::string::npos);
  CHECK(p.find("Final answer: <yes or no>\n") != std::string::npos);
  CHECK(p.find("Options:") == std::string::npos);
  CHECK(p.find("A) ") == std::string::npos);
}

TEST_CASE("dropping one step removes exactly its block") {
  std::vector<Record> recs = shelf_records();
  for (const Record& r : {by_task(recs, TaskKind::CoI), by_task(recs, TaskKind::SC)}) {
    std::string full = build_prompt(r, PromptPlan::full());
    for (Step s : PromptPlan::full().steps) {
      std::string ablated = build_prompt(r, PromptPlan::without(s));
      std::string block = step_block(s, r);
      // the ablated prompt is the full prompt with one block spliced out
      size_t at = full.find(block);
      REQUIRE(at != std::string::npos);
      std::string spliced = full.substr(0, at) + full.substr(at + block.size());
      CHECK(ablated == spliced);
      CHECK(ablated.find(block) == std::string::npos);
      // numbering of the remaining steps is unchanged
      for (Step keep : PromptPlan::without(s).steps)
        CHECK(ablated.find("Step " + std::to_string(step_number(keep))) != std::string::npos);
    }
  }
}

TEST_CASE("prompts are deterministic") {
  std::vector<Record> recs = shelf_records();
  const Record& r = recs.front();
  CHECK(build_prompt(r, PromptPlan::full()) == build_prompt(r, PromptPlan::full()));
  CHECK(build_prompt(r, PromptPlan::parse("s2,s4")) == build_prompt(r, PromptPlan::parse("s2,s4")));
}

TEST_CASE("every task has a distinct knowledge snippet") {
  std::set<std::string> seen;
  for (TaskKind t : all_tasks()) {
    std::string s = knowledge_snippet(t);
    CHECK(!s.empty());
    CHECK(seen.insert(s).second);
  }
  // spot checks tie snippets to their concepts
  CHECK(std::string(knowledge_snippet(TaskKind::BAS)).find("backdoor") != std::string::npos);
  CHECK(std::string(knowledge_snippet(TaskKind::CB)).find("collider") != std::string::npos);
  CHECK(std::string(knowledge_snippet(TaskKind::NDE)).find("natural direct") != std::string::npos);
  CHECK(std::string(knowledge_snippet(TaskKind::NC)).find("necessary") != std::string::npos);
}

TEST_CASE("prompt version tag is stable") {
  CHECK(std::string(kPromptVersion) == "cot-v1");
}

TEST_CASE("step responses are sliced by canonical headers") {
  PromptPlan plan = PromptPlan::full();
  std::string response =
      "Step 1: the entities are the books, the shelf and the wall.\n"
      "Step 2: wall supports shelf, both support books.\n"
      "Step 3: this is an attribution question.\n"
      "Step 4: a cause is what the effect depends on.\n"
      "Final answer: A\n";
  std::vector<StepResponse> parts = parse_step_responses(response, plan);
  REQUIRE(parts.size() == 4);
  CHECK(parts[0].step == Step::S1);
  CHECK(parts[0].text == "Step 1: the entities are the books, the shelf and the wall.");
  CHECK(parts[3].step == Step::S4);
  CHECK(parts[3].text == "Step 4: a cause is what the effect depends on.");

  // missing steps simply do not appear
  std::vector<StepResponse> sparse =
      parse_step_responses("Step 2: graph only.\nFinal answer: B\n", plan);
  REQUIRE(sparse.size() == 1);
  CHECK(sparse[0].step == Step::S2);
  CHECK(sparse[0].text == "Step 2: graph only.");

  // headers outside the plan are ignored
  std::vector<StepResponse> planned =
      parse_step_responses(response, PromptPlan::parse("s1,s3"));
  REQUIRE(planned.size() == 2);
  CHECK(planned[0].step == Step::S1);
  CHECK(planned[1].step == Step::S3);
  // the unclaimed step 2 text rides along with step 1's span
  CHECK(planned[0].text.find("wall supports shelf") != std::string::npos);

  CHECK(parse_step_responses("no structure at all", plan).empty());
}

TEST_CASE("prompt building rejects an invalid plan") {
  std::vector<Record> recs = shelf_records();
  PromptPlan bad;
  CHECK_THROWS_AS(build_prompt(recs.front(), bad), Error);
}
