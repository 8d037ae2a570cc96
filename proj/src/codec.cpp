#include "dialtree/codec.hpp"

#include <algorithm>
#include <cctype>

#include "dialtree/error.hpp"
#include "dialtree/text.hpp"

namespace dialtree {

BeliefState parse_belief(std::string_view text, const Ontology& ontology) {
  const auto tokens = split_whitespace(text);
  BeliefState belief;
  std::string domain;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const auto& tok = tokens[i];
    if (is_bracketed(tok)) {
      const auto name = bracket_interior(tok);
      if (!ontology.has_domain(name)) throw ParseError("unknown domain token '" + tok + "'", i);
      if (belief.find_domain(name)) throw ParseError("duplicate domain '" + tok + "'", i);
      if (i + 1 == tokens.size() || is_bracketed(tokens[i + 1]))
        throw ParseError("domain '" + tok + "' has no slots", i);
      domain = std::string(name);
      ++i;
      continue;
    }
    if (domain.empty()) throw ParseError("slot '" + tok + "' before any domain", i);
    if (!ontology.has_slot(domain, tok))
      throw ParseError("unknown slot '" + tok + "' in domain '" + domain + "'", i);
    if (belief.find(domain, tok)) throw ParseError("duplicate slot '" + tok + "'", i);
    const std::size_t slot_pos = i++;
    std::vector<std::string> value;
    while (i < tokens.size() && !is_bracketed(tokens[i]) && !ontology.has_slot(domain, tokens[i]))
      value.push_back(tokens[i++]);
    if (value.empty()) throw ParseError("slot '" + tok + "' has an empty value", slot_pos);
    belief.set(domain, tok, join(value));
  }
  return belief;
}

std::string serialize_belief(const BeliefState& belief) {
  std::string out;
  for (const auto& e : belief.entries()) {
    if (!out.empty()) out += ' ';
    out += '[' + e.domain + ']';
    for (const auto& [slot, value] : e.slots) out += ' ' + slot + ' ' + value;
  }
  return out;
}

ActionSeq parse_action(std::string_view text, const Ontology& ontology) {
  const auto tokens = split_whitespace(text);
  ActionSeq action;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    if (is_bracketed(tok)) {
      const auto name = bracket_interior(tok);
      if (ontology.has_domain(name)) {
        action.domains.push_back({std::string(name), {}});
      } else if (ontology.has_act(name)) {
        if (action.domains.empty()) throw ParseError("act '" + tok + "' before any domain", i);
        action.domains.back().acts.push_back({std::string(name), {}});
      } else {
        throw ParseError("unknown act or domain token '" + tok + "'", i);
      }
      continue;
    }
    if (action.domains.empty() || action.domains.back().acts.empty())
      throw ParseError("slot '" + tok + "' before any act", i);
    auto& current = action.domains.back();
    if (!ontology.has_action_slot(current.domain, tok))
      throw ParseError("unknown slot '" + tok + "' in domain '" + current.domain + "'", i);
    current.acts.back().slots.push_back(tok);
  }
  return action;
}

std::string serialize_action(const ActionSeq& action) {
  std::vector<std::string> tokens;
  for (const auto& d : action.domains) {
    tokens.push_back('[' + d.domain + ']');
    for (const auto& a : d.acts) {
      tokens.push_back('[' + a.act + ']');
      tokens.insert(tokens.end(), a.slots.begin(), a.slots.end());
    }
  }
  return join(tokens);
}

namespace {
bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || u >= 0x80;
}
}  // namespace

std::string delexicalize(std::string_view response, const SlotValues& bindings) {
  struct Pattern {
    std::string lowered;
    std::string placeholder;
  };
  std::vector<Pattern> patterns;
  for (const auto& [slot, value] : bindings) {
    auto v = normalize_space(value);
    if (!v.empty()) patterns.push_back({to_lower(v), placeholder_for(slot)});
  }
  // Longest first so the first hit at a position is the longest match.
  std::stable_sort(patterns.begin(), patterns.end(), [](const Pattern& a, const Pattern& b) {
    return a.lowered.size() > b.lowered.size();
  });

  const std::string lowered = to_lower(response);
  std::string out;
  std::size_t i = 0;
  while (i < response.size()) {
    const bool at_boundary = i == 0 || !is_word_char(response[i - 1]);
    const Pattern* hit = nullptr;
    if (at_boundary) {
      for (const auto& p : patterns) {
        const auto end = i + p.lowered.size();
        if (end <= lowered.size() && lowered.compare(i, p.lowered.size(), p.lowered) == 0 &&
            (end == response.size() || !is_word_char(response[end]))) {
          hit = &p;
          break;
        }
      }
    }
    if (hit) {
      out += hit->placeholder;
      i += hit->lowered.size();
    } else {
      out += response[i++];
    }
  }
  return out;
}

}  // namespace dialtree
