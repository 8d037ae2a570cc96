#pragma once

#include <string>
#include <vector>

#include "dialtree/codec.hpp"
#include "dialtree/db.hpp"
#include "dialtree/dialog.hpp"
#include "dialtree/ontology.hpp"

namespace fixtures {

// Small restaurant/hotel ontology in the shape of the MultiWOZ examples.
inline dialtree::Ontology ontology() {
  using dialtree::DomainSchema;
  return dialtree::Ontology(
      {DomainSchema{"restaurant", {"name", "pricerange", "area", "food"}, {"address", "phone", "postcode"}},
       DomainSchema{"hotel", {"name", "area", "stars", "type", "parking"}, {"address", "phone"}},
       DomainSchema{"general", {}, {}}},
      {"inform", "request", "offerbook", "recommend", "select", "bye", "reqmore"},
      {"[value_name]", "[value_address]", "[value_area]", "[value_food]", "[value_pricerange]",
       "[value_phone]", "[value_postcode]", "[value_stars]"});
}

inline dialtree::BeliefState belief(const std::string& text) {
  return dialtree::parse_belief(text, ontology());
}

inline dialtree::ActionSeq action(const std::string& text) {
  return dialtree::parse_action(text, ontology());
}

/// The running example: a user narrowing down an expensive Chinese place in
/// the centre, then being offered its name and address.
inline dialtree::Dialog figure_dialog() {
  using namespace dialtree;
  Dialog d;
  d.id = "fig2";
  d.goal.domains.push_back({"restaurant",
                            {{"pricerange", "expensive"}, {"area", "centre"}, {"food", "chinese"}},
                            {"address"}});
  Turn t0;
  t0.index = 0;
  t0.user = "i need an expensive restaurant in the centre";
  t0.belief = belief("[restaurant] pricerange expensive area centre");
  t0.db_bucket = DbBucket::Many;
  t0.action = action("[restaurant] [request] food");
  t0.response_delex = "what type of [value_food] would you like ?";
  Turn t1;
  t1.index = 1;
  t1.user = "chinese food please";
  t1.belief = belief("[restaurant] pricerange expensive area centre food chinese");
  t1.db_bucket = DbBucket::Two;
  t1.action = action("[restaurant] [inform] address name [offerbook]");
  t1.response_delex = "the [value_name] is at [value_address] . shall i book it ?";
  Turn t2;
  t2.index = 2;
  t2.user = "no thanks , bye";
  t2.belief = t1.belief;
  t2.db_bucket = DbBucket::Two;
  t2.action = action("[general] [bye]");
  t2.response_delex = "thank you , goodbye .";
  d.turns = {t0, t1, t2};
  return d;
}

/// Ten restaurants; exactly two (indices 3 and 7) are expensive, centre, chinese.
inline dialtree::EntityDb restaurant_db() {
  using namespace dialtree;
  std::vector<Entity> list;
  const char* areas[] = {"north", "centre", "south", "centre", "east", "centre", "west", "centre", "centre", "north"};
  const char* prices[] = {"cheap", "expensive", "cheap", "expensive", "expensive", "moderate", "expensive",
                          "expensive", "cheap", "expensive"};
  const char* foods[] = {"chinese", "italian", "chinese", "chinese", "chinese", "chinese", "indian", "Chinese",
                         "chinese", "chinese"};
  for (int k = 0; k < 10; ++k) {
    Entity e{"place " + std::to_string(k), {}};
    e.slots = {{"name", e.name}, {"area", areas[k]}, {"pricerange", prices[k]}, {"food", foods[k]},
               {"address", std::to_string(k) + " main street"}, {"phone", "0100" + std::to_string(k)}};
    list.push_back(std::move(e));
  }
  return EntityDb(ontology(), {{"restaurant", std::move(list)}});
}

}  // namespace fixtures
