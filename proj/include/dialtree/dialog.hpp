#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialtree/db_bucket.hpp"
#include "dialtree/ontology.hpp"

namespace dialtree {

using SlotValues = std::vector<std::pair<std::string, std::string>>;

/// Accumulated user constraints: domain -> slot -> value, in insertion order.
class BeliefState {
 public:
  struct DomainEntry {
    std::string domain;
    SlotValues slots;
    friend bool operator==(const DomainEntry&, const DomainEntry&) = default;
  };

  /// Inserts or overwrites in place. The value is whitespace-normalized and
  /// must be nonempty afterwards.
  void set(std::string_view domain, std::string_view slot, std::string_view value);
  /// Removes a slot; a domain left without slots is removed too.
  bool erase(std::string_view domain, std::string_view slot);

  const std::string* find(std::string_view domain, std::string_view slot) const;
  const SlotValues* find_domain(std::string_view domain) const;

  const std::vector<DomainEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  /// Number of (domain, slot) pairs.
  std::size_t size() const;

  friend bool operator==(const BeliefState&, const BeliefState&) = default;

 private:
  std::vector<DomainEntry> entries_;
};

struct ActEntry {
  std::string act;
  std::vector<std::string> slots;
  friend bool operator==(const ActEntry&, const ActEntry&) = default;
};

struct DomainActs {
  std::string domain;
  std::vector<ActEntry> acts;
  friend bool operator==(const DomainActs&, const DomainActs&) = default;
};

/// System action plan. Order is significant at every level, and a domain may
/// appear more than once.
struct ActionSeq {
  std::vector<DomainActs> domains;
  bool empty() const { return domains.empty(); }
  friend bool operator==(const ActionSeq&, const ActionSeq&) = default;
};

struct DomainGoal {
  std::string domain;
  SlotValues informable;
  std::vector<std::string> requested;
  friend bool operator==(const DomainGoal&, const DomainGoal&) = default;
};

struct Goal {
  std::vector<DomainGoal> domains;
  const DomainGoal* find(std::string_view domain) const;
  friend bool operator==(const Goal&, const Goal&) = default;
};

struct Turn {
  std::size_t index = 0;
  std::string user;
  BeliefState belief;
  DbBucket db_bucket = DbBucket::Zero;
  ActionSeq action;
  std::string response_delex;
  std::optional<std::string> response_lex;
  friend bool operator==(const Turn&, const Turn&) = default;
};

struct Dialog {
  std::string id;
  Goal goal;
  std::vector<Turn> turns;
  friend bool operator==(const Dialog&, const Dialog&) = default;
};

/// Marker closing every history turn block in a context.
inline constexpr std::string_view kEndOfTurn = "<eot>";

void validate(const Ontology& ontology, const BeliefState& belief);
void validate(const Ontology& ontology, const ActionSeq& action);
void validate(const Ontology& ontology, const Goal& goal);
/// Checks every invariant of a dialog, including consecutive turn indices.
void validate(const Ontology& ontology, const Dialog& dialog);

/// Linearizes turns 0..t-1 as U B DB A R <eot> blocks, followed by U_t.
std::vector<std::string> build_context(const Dialog& dialog, std::size_t t);

/// Indices of every end-of-turn marker, ascending.
std::vector<std::size_t> turn_end_positions(const std::vector<std::string>& context);

}  // namespace dialtree
