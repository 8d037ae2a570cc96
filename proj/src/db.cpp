#include "dialtree/db.hpp"

#include <set>

#include "dialtree/error.hpp"
#include "dialtree/text.hpp"

namespace dialtree {

DbBucket bucketize(std::size_t count) {
  switch (count) {
    case 0: return DbBucket::Zero;
    case 1: return DbBucket::One;
    case 2: return DbBucket::Two;
    case 3: return DbBucket::Three;
    default: return DbBucket::Many;
  }
}

std::string_view to_string(DbBucket bucket) {
  switch (bucket) {
    case DbBucket::Zero: return "zero";
    case DbBucket::One: return "one";
    case DbBucket::Two: return "two";
    case DbBucket::Three: return "three";
    case DbBucket::Many: return "many";
  }
  return "zero";
}

DbBucket parse_db_bucket(std::string_view name) {
  for (auto b : {DbBucket::Zero, DbBucket::One, DbBucket::Two, DbBucket::Three, DbBucket::Many})
    if (to_string(b) == name) return b;
  throw LookupError("unknown db bucket '" + std::string(name) + "'");
}

const std::string* Entity::find(std::string_view slot) const {
  for (const auto& [s, v] : slots)
    if (s == slot) return &v;
  return nullptr;
}

EntityDb::EntityDb(const Ontology& ontology, std::vector<DomainEntities> domains) {
  for (auto& d : domains)
    if (!ontology.has_domain(d.domain)) throw ValidationError("db has unknown domain '" + d.domain + "'");
  for (const auto& schema : ontology.domains()) {
    DomainEntities entry{schema.name, {}};
    for (auto& d : domains)
      if (d.domain == schema.name)
        for (auto& e : d.entities) entry.entities.push_back(std::move(e));
    std::set<std::string> names;
    for (const auto& e : entry.entities) {
      if (e.name.empty()) throw ValidationError("entity without a name in domain '" + schema.name + "'");
      if (!names.insert(e.name).second)
        throw ValidationError("duplicate entity '" + e.name + "' in domain '" + schema.name + "'");
      for (const auto& kv : e.slots)
        if (!ontology.has_action_slot(schema.name, kv.first))
          throw ValidationError("entity '" + e.name + "' has unknown slot '" + kv.first + "'");
    }
    domains_.push_back(std::move(entry));
  }
}

const std::vector<Entity>& EntityDb::entities(std::string_view domain) const {
  for (const auto& d : domains_)
    if (d.domain == domain) return d.entities;
  throw LookupError("unknown db domain '" + std::string(domain) + "'");
}

std::vector<const Entity*> query(const EntityDb& db, const BeliefState& belief, std::string_view domain) {
  const auto& entities = db.entities(domain);
  const auto* constraints = belief.find_domain(domain);
  std::vector<const Entity*> out;
  for (const auto& e : entities) {
    bool ok = true;
    if (constraints) {
      for (const auto& [slot, value] : *constraints) {
        const auto* v = e.find(slot);
        if (!v || to_lower(*v) != to_lower(value)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) out.push_back(&e);
  }
  return out;
}

}  // namespace dialtree
