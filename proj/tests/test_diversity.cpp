#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <cello/diversity.hpp>
#include <cello/pipeline.hpp>
#include <cello/text.hpp>

#include "support/fixtures.hpp"

using namespace cello;

namespace {

std::vector<std::string> rep(std::initializer_list<std::pair<const char*, size_t>> spec) {
  std::vector<std::string> out;
  for (const auto& [word, n] : spec)
    for (size_t i = 0; i < n; ++i) out.emplace_back(word);
  return out;
}

std::vector<std::string> distinct(size_t n) {
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) out.push_back("w" + std::to_string(i));
  return out;
}

}  // namespace

TEST_CASE("mattr on hand-checked sequences") {
  CHECK(mattr(rep({{"a", 3}}), 2) == 0.5);
  CHECK(mattr({"a", "b", "a", "b"}, 2) == 1.0);
  CHECK(mattr(distinct(20), 5) == 1.0);
  // shorter than the window: plain type-token ratio
  CHECK(mattr({"a", "a", "b"}, 5) == Catch::Approx(2.0 / 3.0));
  // windows aab, abb, bba each hold two types
  CHECK(mattr({"a", "b", "b", "a"}, 3) == Catch::Approx(2.0 / 3.0));
  // sequence length equal to the window is still plain TTR
  CHECK(mattr({"a", "b", "a"}, 3) == Catch::Approx(2.0 / 3.0));
}

TEST_CASE("mattr input validation") {
  CHECK_THROWS_AS(mattr({}, 5), Error);
  try {
    mattr({"a"}, 0);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
  }
}

TEST_CASE("mtld on hand-checked sequences") {
  // ten identical tokens: each pass closes factors as soon as TTR dips
  CHECK(mtld(rep({{"a", 10}})) == Catch::Approx(2.0).epsilon(1e-12));
  // all distinct: no factor closes, both passes count as one factor
  CHECK(mtld(distinct(10)) == Catch::Approx(10.0).epsilon(1e-12));
  CHECK(mtld({"a"}) == Catch::Approx(1.0).epsilon(1e-12));
  // forward pass: TTR dips to 0.75 at "a b c a", partial (1-0.75)/0.28;
  // same backwards, so 4 / ((25/28) ... ) worked out by hand to 4.48
  CHECK(mtld({"a", "b", "c", "a"}, 0.72) == Catch::Approx(4.48).epsilon(1e-9));
}

TEST_CASE("mtld threshold must be a proper fraction") {
  CHECK_THROWS_AS(mtld({"a"}, 0.0), Error);
  CHECK_THROWS_AS(mtld({"a"}, 1.0), Error);
  CHECK_THROWS_AS(mtld({"a"}, -0.3), Error);
  CHECK_THROWS_AS(mtld({}, 0.72), Error);
  CHECK_NOTHROW(mtld({"a"}, 0.01));
}

TEST_CASE("hdd exact rationals on hand-checked sequences") {
  Rational all_distinct = hdd_exact(distinct(42), 42);
  CHECK(all_distinct.num == 1);
  CHECK(all_distinct.den == 1);

  Rational all_same = hdd_exact(rep({{"a", 42}}), 42);
  CHECK(all_same.num == 1);
  CHECK(all_same.den == 42);

  // tokens a a b c, sample 2: C(4,2)=6 pairs
  //   P(a in sample) = 1 - C(2,2)/6 = 5/6, P(b) = P(c) = 1 - C(3,2)/6 = 1/2
  //   HDD = (5/6 + 1/2 + 1/2) / 2 = 11/12
  Rational mixed = hdd_exact({"a", "a", "b", "c"}, 2);
  CHECK(mixed.num == 11);
  CHECK(mixed.den == 12);
  CHECK(mixed.value() == Catch::Approx(11.0 / 12.0).epsilon(1e-12));

  CHECK(hdd({"a", "a", "b", "c"}, 2) == Catch::Approx(11.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("hdd is exactly order independent") {
  std::vector<std::string> tokens;
  for (size_t i = 0; i < 120; ++i) tokens.push_back("w" + std::to_string(i % 17));
  Rational base = hdd_exact(tokens, 42);
  std::mt19937 urbg(7);
  for (int round = 0; round < 50; ++round) {
    std::shuffle(tokens.begin(), tokens.end(), urbg);
    Rational again = hdd_exact(tokens, 42);
    REQUIRE(again == base);
  }
}

TEST_CASE("hdd input validation") {
  CHECK_THROWS_AS(hdd_exact({}, 42), Error);
  try {
    hdd_exact({"a", "b"}, 0);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
  }
  try {
    hdd_exact({"a", "b"}, 3);
    FAIL("expected SampleTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SampleTooLarge);
    CHECK(std::string(e.what()).find("exceeds token count") != std::string::npos);
  }
  // boundary: sample equal to token count is fine
  CHECK_NOTHROW(hdd_exact({"a", "b"}, 2));
}

TEST_CASE("metrics agree on scale for a generated corpus") {
  GenOptions opt;
  opt.seed = 3;
  auto corpus =
      generate_corpus(fixtures::synthetic_corpus(40, 3), PredicateLexicon::defaults(), opt);
  std::vector<std::string> tokens;
  for (const auto& r : corpus.records)
    for (const auto& t : lexical_tokens(r.question)) tokens.push_back(t);
  REQUIRE(tokens.size() > 500);

  double ma = mattr(tokens, 50);
  double mt = mtld(tokens);
  double hd = hdd(tokens, 42);
  CHECK(ma > 0.0);
  CHECK(ma <= 1.0);
  CHECK(mt >= 1.0);
  CHECK(mt <= static_cast<double>(tokens.size()));
  CHECK(hd > 0.0);
  CHECK(hd <= 1.0);

  // templated questions repeat wording, so diversity sits well below the open end
  CHECK(ma < 0.95);
  CHECK(hd < 0.95);
}

TEST_CASE("big binomials stay exact") {
  // C(200,100) is far beyond 64 bits; exactness shows in a clean reduction
  std::vector<std::string> tokens;
  for (size_t i = 0; i < 200; ++i) tokens.push_back(i % 2 ? "a" : "b");
  Rational r = hdd_exact(tokens, 100);
  // both types are all but certain to appear: P = 1 - C(100,100)/C(200,100)
  // HDD = 2 * (1 - 1/C(200,100)) / 100
  BigInt c = 1;
  for (size_t i = 1; i <= 100; ++i) {
    c *= static_cast<unsigned long long>(100 + i);
    c /= static_cast<unsigned long long>(i);
  }
  Rational expect;
  expect.num = 2 * (c - 1);
  expect.den = 100 * c;
  expect.reduce();
  CHECK(r == expect);
}
