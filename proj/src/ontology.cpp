#include "dialtree/ontology.hpp"

#include <algorithm>
#include <set>

#include "dialtree/error.hpp"
#include "dialtree/text.hpp"

namespace dialtree {

namespace {

bool contains(const std::vector<std::string>& names, std::string_view name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

void require_unique_identifiers(const std::vector<std::string>& names, const std::string& what) {
  std::set<std::string_view> seen;
  for (const auto& n : names) {
    if (!is_identifier(n)) throw ValidationError("invalid " + what + " name '" + n + "'");
    if (!seen.insert(n).second) throw ValidationError("duplicate " + what + " '" + n + "'");
  }
}

}  // namespace

Ontology::Ontology(std::vector<DomainSchema> domains, std::vector<std::string> acts,
                   std::vector<std::string> keyword_vocab)
    : domains_(std::move(domains)), acts_(std::move(acts)), keyword_vocab_(std::move(keyword_vocab)) {
  std::vector<std::string> domain_names;
  for (const auto& d : domains_) domain_names.push_back(d.name);
  require_unique_identifiers(domain_names, "domain");
  require_unique_identifiers(acts_, "act");
  for (const auto& a : acts_) {
    if (contains(domain_names, a))
      throw ValidationError("name '" + a + "' is both a domain and an act");
  }
  for (const auto& d : domains_) {
    require_unique_identifiers(d.slots, "slot in domain " + d.name);
    require_unique_identifiers(d.requestables, "requestable in domain " + d.name);
  }
  std::set<std::string_view> seen;
  for (const auto& k : keyword_vocab_) {
    if (!is_placeholder(k)) throw ValidationError("keyword '" + k + "' is not a [value_xxx] token");
    if (!seen.insert(k).second) throw ValidationError("duplicate keyword '" + k + "'");
  }
}

const DomainSchema* Ontology::find_domain(std::string_view name) const {
  for (const auto& d : domains_)
    if (d.name == name) return &d;
  return nullptr;
}

bool Ontology::has_act(std::string_view name) const { return contains(acts_, name); }

bool Ontology::has_slot(std::string_view domain, std::string_view slot) const {
  const auto* d = find_domain(domain);
  return d && contains(d->slots, slot);
}

bool Ontology::is_requestable(std::string_view domain, std::string_view slot) const {
  const auto* d = find_domain(domain);
  return d && contains(d->requestables, slot);
}

bool Ontology::has_action_slot(std::string_view domain, std::string_view slot) const {
  return has_slot(domain, slot) || is_requestable(domain, slot);
}

}  // namespace dialtree
