#include "dialtree/dialog.hpp"

#include <algorithm>

#include "dialtree/codec.hpp"
#include "dialtree/error.hpp"
#include "dialtree/text.hpp"

namespace dialtree {

void BeliefState::set(std::string_view domain, std::string_view slot, std::string_view value) {
  std::string v = normalize_space(value);
  if (v.empty())
    throw ValidationError("empty value for " + std::string(domain) + "-" + std::string(slot));
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const DomainEntry& e) { return e.domain == domain; });
  if (it == entries_.end()) {
    entries_.push_back({std::string(domain), {}});
    it = std::prev(entries_.end());
  }
  for (auto& [s, old] : it->slots) {
    if (s == slot) {
      old = std::move(v);
      return;
    }
  }
  it->slots.emplace_back(std::string(slot), std::move(v));
}

bool BeliefState::erase(std::string_view domain, std::string_view slot) {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const DomainEntry& e) { return e.domain == domain; });
  if (it == entries_.end()) return false;
  auto& slots = it->slots;
  auto s = std::find_if(slots.begin(), slots.end(), [&](const auto& kv) { return kv.first == slot; });
  if (s == slots.end()) return false;
  slots.erase(s);
  if (slots.empty()) entries_.erase(it);
  return true;
}

const SlotValues* BeliefState::find_domain(std::string_view domain) const {
  for (const auto& e : entries_)
    if (e.domain == domain) return &e.slots;
  return nullptr;
}

const std::string* BeliefState::find(std::string_view domain, std::string_view slot) const {
  const auto* slots = find_domain(domain);
  if (!slots) return nullptr;
  for (const auto& [s, v] : *slots)
    if (s == slot) return &v;
  return nullptr;
}

std::size_t BeliefState::size() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.slots.size();
  return n;
}

const DomainGoal* Goal::find(std::string_view domain) const {
  for (const auto& g : domains)
    if (g.domain == domain) return &g;
  return nullptr;
}

namespace {

void validate_free_text(std::string_view text, const std::string& where) {
  for (const auto& tok : split_whitespace(text))
    if (tok == kEndOfTurn) throw ValidationError(where + " contains the reserved token <eot>");
}

// A value must survive the linear belief format: it may not contain a token
// that reads as a slot of its domain or as a bracketed domain.
void validate_value(const Ontology& ontology, std::string_view domain, std::string_view slot,
                    std::string_view value) {
  const auto where = std::string(domain) + "-" + std::string(slot);
  const auto tokens = split_whitespace(value);
  if (tokens.empty()) throw ValidationError("empty value for " + where);
  for (const auto& tok : tokens) {
    if (ontology.has_slot(domain, tok))
      throw ValidationError("value '" + std::string(value) + "' of " + where +
                            " collides with slot name '" + tok + "'");
    if (is_bracketed(tok) || tok == kEndOfTurn)
      throw ValidationError("value '" + std::string(value) + "' of " + where +
                            " contains reserved token '" + tok + "'");
  }
}

}  // namespace

void validate(const Ontology& ontology, const BeliefState& belief) {
  for (const auto& e : belief.entries()) {
    if (!ontology.has_domain(e.domain)) throw ValidationError("unknown domain '" + e.domain + "'");
    if (e.slots.empty()) throw ValidationError("domain '" + e.domain + "' has no slots");
    for (const auto& [slot, value] : e.slots) {
      if (!ontology.has_slot(e.domain, slot))
        throw ValidationError("unknown slot '" + slot + "' in domain '" + e.domain + "'");
      validate_value(ontology, e.domain, slot, value);
    }
  }
}

void validate(const Ontology& ontology, const ActionSeq& action) {
  for (const auto& d : action.domains) {
    if (!ontology.has_domain(d.domain)) throw ValidationError("unknown domain '" + d.domain + "'");
    for (const auto& a : d.acts) {
      if (!ontology.has_act(a.act)) throw ValidationError("unknown act '" + a.act + "'");
      for (const auto& s : a.slots)
        if (!ontology.has_action_slot(d.domain, s))
          throw ValidationError("unknown action slot '" + s + "' in domain '" + d.domain + "'");
    }
  }
}

void validate(const Ontology& ontology, const Goal& goal) {
  for (const auto& g : goal.domains) {
    if (!ontology.has_domain(g.domain)) throw ValidationError("unknown goal domain '" + g.domain + "'");
    for (const auto& [slot, value] : g.informable) {
      if (!ontology.has_slot(g.domain, slot))
        throw ValidationError("unknown goal slot '" + slot + "' in domain '" + g.domain + "'");
      validate_value(ontology, g.domain, slot, value);
    }
    for (const auto& r : g.requested)
      if (!ontology.is_requestable(g.domain, r))
        throw ValidationError("goal requests non-requestable slot '" + r + "' in domain '" +
                              g.domain + "'");
  }
}

void validate(const Ontology& ontology, const Dialog& dialog) {
  if (dialog.id.empty()) throw ValidationError("dialog with empty id");
  if (dialog.turns.empty()) throw ValidationError("dialog '" + dialog.id + "' has no turns");
  validate(ontology, dialog.goal);
  for (std::size_t i = 0; i < dialog.turns.size(); ++i) {
    const auto& turn = dialog.turns[i];
    const auto where = "dialog '" + dialog.id + "' turn " + std::to_string(i);
    try {
      if (turn.index != i) throw ValidationError("turn index " + std::to_string(turn.index) + " out of sequence");
      if (normalize_space(turn.response_delex).empty()) throw ValidationError("empty delexicalized response");
      validate_free_text(turn.user, "user utterance");
      validate_free_text(turn.response_delex, "response");
      validate(ontology, turn.belief);
      validate(ontology, turn.action);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
}

std::vector<std::string> build_context(const Dialog& dialog, std::size_t t) {
  if (t >= dialog.turns.size())
    throw RangeError("turn " + std::to_string(t) + " out of range for dialog '" + dialog.id +
                     "' with " + std::to_string(dialog.turns.size()) + " turns");
  std::vector<std::string> out;
  auto append = [&out](std::string_view text) {
    for (auto& tok : split_whitespace(text)) out.push_back(std::move(tok));
  };
  for (std::size_t i = 0; i < t; ++i) {
    const auto& turn = dialog.turns[i];
    append(turn.user);
    append(serialize_belief(turn.belief));
    out.push_back("[db_" + std::string(to_string(turn.db_bucket)) + "]");
    append(serialize_action(turn.action));
    append(turn.response_delex);
    out.emplace_back(kEndOfTurn);
  }
  append(dialog.turns[t].user);
  return out;
}

std::vector<std::size_t> turn_end_positions(const std::vector<std::string>& context) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < context.size(); ++i)
    if (context[i] == kEndOfTurn) out.push_back(i);
  return out;
}

}  // namespace dialtree
