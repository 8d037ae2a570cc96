#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dialtree/db_bucket.hpp"
#include "dialtree/dialog.hpp"
#include "dialtree/ontology.hpp"

namespace dialtree {

struct Entity {
  std::string name;
  SlotValues slots;
  const std::string* find(std::string_view slot) const;
  friend bool operator==(const Entity&, const Entity&) = default;
};

struct DomainEntities {
  std::string domain;
  std::vector<Entity> entities;
  friend bool operator==(const DomainEntities&, const DomainEntities&) = default;
};

/// Entities per ontology domain, in file order. Immutable after construction.
class EntityDb {
 public:
  EntityDb() = default;
  /// Every ontology domain gets an entry, possibly empty. Throws
  /// ValidationError for unknown domains or slots and duplicate names.
  EntityDb(const Ontology& ontology, std::vector<DomainEntities> domains);

  /// Throws LookupError for a domain outside the ontology.
  const std::vector<Entity>& entities(std::string_view domain) const;
  const std::vector<DomainEntities>& domains() const { return domains_; }

  friend bool operator==(const EntityDb&, const EntityDb&) = default;

 private:
  std::vector<DomainEntities> domains_;
};

/// Entities of `domain` whose value equals the belief value (ASCII
/// case-insensitive) for every constrained slot of that domain.
std::vector<const Entity*> query(const EntityDb& db, const BeliefState& belief,
                                 std::string_view domain);

}  // namespace dialtree
