#include "dialtree/aux_labels.hpp"

#include <algorithm>
#include <cmath>

#include "dialtree/error.hpp"
#include "dialtree/text.hpp"

namespace dialtree {

namespace {
std::string class_name(std::string_view a, std::string_view b) {
  return std::string(a) + "-" + std::string(b);
}
}  // namespace

LabelSpace::LabelSpace(const Ontology& ontology) : keywords_(ontology.keyword_vocab()) {
  for (const auto& d : ontology.domains()) {
    for (const auto& s : d.slots) {
      slot_index_.emplace(class_name(d.name, s), slot_classes_.size());
      slot_classes_.push_back(class_name(d.name, s));
    }
    for (const auto& a : ontology.acts()) {
      act_index_.emplace(class_name(d.name, a), act_classes_.size());
      act_classes_.push_back(class_name(d.name, a));
    }
  }
}

std::size_t LabelSpace::slot_class(std::string_view domain, std::string_view slot) const {
  auto it = slot_index_.find(class_name(domain, slot));
  if (it == slot_index_.end()) throw LookupError("no slot class " + class_name(domain, slot));
  return it->second;
}

std::size_t LabelSpace::act_class(std::string_view domain, std::string_view act) const {
  auto it = act_index_.find(class_name(domain, act));
  if (it == act_index_.end()) throw LookupError("no act class " + class_name(domain, act));
  return it->second;
}

std::string_view to_string(SlotChange c) {
  switch (c) {
    case SlotChange::Keep: return "keep";
    case SlotChange::Change: return "change";
    case SlotChange::Delete: return "delete";
    case SlotChange::New: return "new";
  }
  return "keep";
}

MultiHot slot_type_labels(const LabelSpace& space, const BeliefState& belief) {
  MultiHot out(space.slot_classes().size(), 0);
  for (const auto& e : belief.entries())
    for (const auto& kv : e.slots) out[space.slot_class(e.domain, kv.first)] = 1;
  return out;
}

MultiHot mentioned_slot_labels(const LabelSpace& space, const BeliefState& prev,
                               const BeliefState& cur) {
  MultiHot out(space.slot_classes().size(), 0);
  for (const auto& e : cur.entries())
    for (const auto& [slot, value] : e.slots) {
      const auto* old = prev.find(e.domain, slot);
      if (!old || *old != value) out[space.slot_class(e.domain, slot)] = 1;
    }
  return out;
}

SlotChangeLabels slot_change_labels(const LabelSpace& space, const BeliefState& prev,
                                    const BeliefState& cur) {
  const auto n = space.slot_classes().size();
  SlotChangeLabels out{std::vector<SlotChange>(n, SlotChange::Keep), MultiHot(n, 0)};
  for (const auto& e : cur.entries())
    for (const auto& [slot, value] : e.slots) {
      const auto k = space.slot_class(e.domain, slot);
      const auto* old = prev.find(e.domain, slot);
      out.mask[k] = 1;
      out.categories[k] = !old ? SlotChange::New : (*old == value ? SlotChange::Keep : SlotChange::Change);
    }
  for (const auto& e : prev.entries())
    for (const auto& kv : e.slots) {
      if (cur.find(e.domain, kv.first)) continue;
      const auto k = space.slot_class(e.domain, kv.first);
      out.mask[k] = 1;
      out.categories[k] = SlotChange::Delete;
    }
  return out;
}

MultiHot action_type_labels(const LabelSpace& space, const ActionSeq& action) {
  MultiHot out(space.act_classes().size(), 0);
  for (const auto& d : action.domains)
    for (const auto& a : d.acts) out[space.act_class(d.domain, a.act)] = 1;
  return out;
}

KeywordLabels keyword_labels(const LabelSpace& space, std::string_view response_delex) {
  const auto& vocab = space.keywords();
  KeywordLabels out{MultiHot(vocab.size(), 0), {}};
  for (const auto& tok : split_whitespace(response_delex)) {
    if (!is_placeholder(tok)) continue;
    auto it = std::find(vocab.begin(), vocab.end(), tok);
    if (it != vocab.end()) {
      out.labels[static_cast<std::size_t>(it - vocab.begin())] = 1;
    } else if (std::find(out.unknown.begin(), out.unknown.end(), tok) == out.unknown.end()) {
      out.unknown.push_back(tok);
    }
  }
  return out;
}

AuxLabelSet turn_labels(const LabelSpace& space, const Dialog& dialog, std::size_t t) {
  if (t >= dialog.turns.size()) throw RangeError("turn " + std::to_string(t) + " out of range");
  static const BeliefState empty;
  const auto& cur = dialog.turns[t];
  const auto& prev = t == 0 ? empty : dialog.turns[t - 1].belief;
  return {slot_type_labels(space, cur.belief), slot_change_labels(space, prev, cur.belief),
          action_type_labels(space, cur.action), keyword_labels(space, cur.response_delex)};
}

namespace {

void require_finite(std::span<const double> scores) {
  for (double s : scores)
    if (!std::isfinite(s)) throw RangeError("non-finite score");
}

double logistic(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace

double bernoulli_multilabel_loss(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size())
    throw ShapeError("scores/labels length mismatch: " + std::to_string(scores.size()) + " vs " +
                     std::to_string(labels.size()));
  require_finite(scores);
  double loss = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double p = std::clamp(logistic(scores[i]), kProbabilityFloor, 1.0 - kProbabilityFloor);
    loss -= labels[i] ? std::log(p) : std::log(1.0 - p);
  }
  return loss;
}

std::vector<double> bernoulli_multilabel_grad(std::span<const double> scores,
                                              std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw ShapeError("scores/labels length mismatch");
  require_finite(scores);
  std::vector<double> grad(scores.size(), 0.0);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double p = logistic(scores[i]);
    // Zero inside the clamped region, where the loss is flat.
    if (p <= kProbabilityFloor || p >= 1.0 - kProbabilityFloor) continue;
    grad[i] = p - (labels[i] ? 1.0 : 0.0);
  }
  return grad;
}

namespace {

void check_change_shapes(std::span<const ChangeScores> scores, std::span<const SlotChange> categories,
                         std::span<const std::uint8_t> mask) {
  if (categories.size() != mask.size()) throw ShapeError("categories/mask length mismatch");
  if (scores.size() != mask.size())
    throw ShapeError("slot change scores cover " + std::to_string(scores.size()) + " of " +
                     std::to_string(mask.size()) + " classes");
  for (const auto& s : scores) require_finite(s);
}

ChangeScores log_softmax(const ChangeScores& s) {
  const double top = *std::max_element(s.begin(), s.end());
  double z = 0.0;
  for (double v : s) z += std::exp(v - top);
  const double log_z = top + std::log(z);
  ChangeScores out;
  for (std::size_t c = 0; c < 4; ++c) out[c] = s[c] - log_z;
  return out;
}

}  // namespace

double categorical_change_loss(std::span<const ChangeScores> scores,
                               std::span<const SlotChange> categories,
                               std::span<const std::uint8_t> mask) {
  check_change_shapes(scores, categories, mask);
  double loss = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    loss -= log_softmax(scores[i])[static_cast<std::size_t>(categories[i])];
  }
  return loss;
}

std::vector<ChangeScores> categorical_change_grad(std::span<const ChangeScores> scores,
                                                  std::span<const SlotChange> categories,
                                                  std::span<const std::uint8_t> mask) {
  check_change_shapes(scores, categories, mask);
  std::vector<ChangeScores> grad(scores.size(), ChangeScores{});
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    const auto lp = log_softmax(scores[i]);
    for (std::size_t c = 0; c < 4; ++c)
      grad[i][c] = std::exp(lp[c]) - (c == static_cast<std::size_t>(categories[i]) ? 1.0 : 0.0);
  }
  return grad;
}

}  // namespace dialtree
