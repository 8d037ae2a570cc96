#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dialtree {

struct DomainSchema {
  std::string name;
  std::vector<std::string> slots;         // informable slots, ordered
  std::vector<std::string> requestables;  // slots a user may ask about
  friend bool operator==(const DomainSchema&, const DomainSchema&) = default;
};

/// Names of everything that may appear in states, actions and responses.
///
/// Domain names and act names share the bracket syntax of the linear formats,
/// so the two sets must be disjoint. Slot names must be single identifier
/// tokens. Construction validates all invariants and throws ValidationError.
class Ontology {
 public:
  Ontology() = default;
  Ontology(std::vector<DomainSchema> domains, std::vector<std::string> acts,
           std::vector<std::string> keyword_vocab);

  const std::vector<DomainSchema>& domains() const { return domains_; }
  const std::vector<std::string>& acts() const { return acts_; }
  const std::vector<std::string>& keyword_vocab() const { return keyword_vocab_; }

  const DomainSchema* find_domain(std::string_view name) const;
  bool has_domain(std::string_view name) const { return find_domain(name) != nullptr; }
  bool has_act(std::string_view name) const;
  bool has_slot(std::string_view domain, std::string_view slot) const;
  bool is_requestable(std::string_view domain, std::string_view slot) const;
  /// Slots allowed in an action: informable or requestable.
  bool has_action_slot(std::string_view domain, std::string_view slot) const;

  friend bool operator==(const Ontology&, const Ontology&) = default;

 private:
  std::vector<DomainSchema> domains_;
  std::vector<std::string> acts_;
  std::vector<std::string> keyword_vocab_;
};

}  // namespace dialtree
