#include <doctest.h>

#include "dialtree/db.hpp"
#include "dialtree/error.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace dialtree;

TEST_CASE("query with empty constraints returns the whole domain in order") {
  const auto db = fixtures::restaurant_db();
  const auto all = query(db, BeliefState{}, "restaurant");
  REQUIRE(all.size() == 10);
  CHECK(all.front()->name == "place 0");
  CHECK(all.back()->name == "place 9");
  CHECK(query(db, BeliefState{}, "hotel").empty());
}

TEST_CASE("query on the running belief finds the two matching entities") {
  const auto db = fixtures::restaurant_db();
  const auto b = fixtures::belief("[restaurant] pricerange expensive area centre food chinese");
  const auto hits = query(db, b, "restaurant");
  REQUIRE(hits.size() == 2);
  CHECK(hits[0]->name == "place 3");
  CHECK(hits[1]->name == "place 7");  // stored as "Chinese": matching ignores case
  CHECK(bucketize(hits.size()) == DbBucket::Two);
}

TEST_CASE("query failure modes") {
  const auto db = fixtures::restaurant_db();
  CHECK(query(db, fixtures::belief("[restaurant] food thai"), "restaurant").empty());
  // Constraints on a slot no entity carries never match.
  CHECK(query(db, fixtures::belief("[restaurant] name place 3 food chinese"), "restaurant").size() == 1);
  CHECK_THROWS_AS(query(db, BeliefState{}, "spaceport"), LookupError);
}

TEST_CASE("adding constraints never increases the match count") {
  const auto o = fixtures::ontology();
  const auto db = fixtures::restaurant_db();
  const std::vector<std::pair<std::string, std::vector<std::string>>> pools = {
      {"area", {"centre", "north", "south"}}, {"pricerange", {"cheap", "expensive"}}, {"food", {"chinese", "indian"}}};
  gen::Source src(17);
  for (int trial = 0; trial < 200; ++trial) {
    BeliefState b;
    std::size_t last = query(db, b, "restaurant").size();
    for (const auto& [slot, values] : pools) {
      if (!src.coin()) continue;
      b.set("restaurant", slot, src.pick(values));
      const auto now = query(db, b, "restaurant").size();
      CHECK(now <= last);
      last = now;
    }
    CHECK(query(db, b, "restaurant").size() == last);
  }
}

TEST_CASE("bucketize") {
  CHECK(bucketize(0) == DbBucket::Zero);
  CHECK(bucketize(1) == DbBucket::One);
  CHECK(bucketize(2) == DbBucket::Two);
  CHECK(bucketize(3) == DbBucket::Three);
  CHECK(bucketize(4) == DbBucket::Many);
  CHECK(bucketize(17) == DbBucket::Many);
  for (std::size_t c = 1; c < 50; ++c) CHECK(static_cast<int>(bucketize(c)) >= static_cast<int>(bucketize(c - 1)));
  CHECK(parse_db_bucket(to_string(DbBucket::Three)) == DbBucket::Three);
  CHECK_THROWS_AS(parse_db_bucket("lots"), LookupError);
}

TEST_CASE("entity db validation") {
  const auto o = fixtures::ontology();
  CHECK_THROWS_AS(EntityDb(o, {{"spaceport", {}}}), ValidationError);
  CHECK_THROWS_AS(EntityDb(o, {{"hotel", {Entity{"a", {}}, Entity{"a", {}}}}}), ValidationError);
  CHECK_THROWS_AS(EntityDb(o, {{"hotel", {Entity{"a", {{"food", "thai"}}}}}}), ValidationError);
  CHECK_THROWS_AS(EntityDb(o, {{"hotel", {Entity{"", {}}}}}), ValidationError);
}
