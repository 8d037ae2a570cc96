#pragma once

#include <string>
#include <string_view>

#include "dialtree/dialog.hpp"
#include "dialtree/ontology.hpp"

namespace dialtree {

// Linear formats, whitespace-tokenized:
//   belief: "[domain] slot value... slot value... [domain] ..."
//   action: "[domain] [act] slot... [act] ... [domain] ..."
// A belief value runs until the next slot token of the current domain or the
// next bracketed token. Errors carry the offending token index.

BeliefState parse_belief(std::string_view text, const Ontology& ontology);
std::string serialize_belief(const BeliefState& belief);

ActionSeq parse_action(std::string_view text, const Ontology& ontology);
std::string serialize_action(const ActionSeq& action);

/// Replaces bound values with "[value_<slot>]". Matching is case-insensitive,
/// respects word boundaries, and prefers the longest binding at each position.
std::string delexicalize(std::string_view response, const SlotValues& bindings);

}  // namespace dialtree
