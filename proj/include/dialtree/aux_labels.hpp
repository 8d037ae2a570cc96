#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dialtree/dialog.hpp"
#include "dialtree/ontology.hpp"

namespace dialtree {

using MultiHot = std::vector<std::uint8_t>;

/// Class inventories for the auxiliary heads, derived from the ontology.
/// Slot classes are "domain-slot", act classes "domain-act" for every
/// (domain, act) pair, keywords follow the ontology's keyword vocabulary.
class LabelSpace {
 public:
  explicit LabelSpace(const Ontology& ontology);

  const std::vector<std::string>& slot_classes() const { return slot_classes_; }
  const std::vector<std::string>& act_classes() const { return act_classes_; }
  const std::vector<std::string>& keywords() const { return keywords_; }

  std::size_t slot_class(std::string_view domain, std::string_view slot) const;
  std::size_t act_class(std::string_view domain, std::string_view act) const;

 private:
  std::vector<std::string> slot_classes_;
  std::vector<std::string> act_classes_;
  std::vector<std::string> keywords_;
  std::unordered_map<std::string, std::size_t> slot_index_;
  std::unordered_map<std::string, std::size_t> act_index_;
};

enum class SlotChange : std::uint8_t { Keep = 0, Change = 1, Delete = 2, New = 3 };
std::string_view to_string(SlotChange c);

struct SlotChangeLabels {
  std::vector<SlotChange> categories;  // meaningful only where mask is 1
  MultiHot mask;
};

struct KeywordLabels {
  MultiHot labels;
  std::vector<std::string> unknown;  // placeholders missing from the vocabulary
};

struct AuxLabelSet {
  MultiHot slot_type;
  SlotChangeLabels slot_change;
  MultiHot action_type;
  KeywordLabels keywords;
};

/// Slots holding a value in the (cumulative) belief.
MultiHot slot_type_labels(const LabelSpace& space, const BeliefState& belief);
/// Alternative target: only slots that are new or changed relative to `prev`.
MultiHot mentioned_slot_labels(const LabelSpace& space, const BeliefState& prev,
                               const BeliefState& cur);
SlotChangeLabels slot_change_labels(const LabelSpace& space, const BeliefState& prev,
                                    const BeliefState& cur);
MultiHot action_type_labels(const LabelSpace& space, const ActionSeq& action);
KeywordLabels keyword_labels(const LabelSpace& space, std::string_view response_delex);

/// Labels for turn `t`; turn 0 is compared against an empty belief.
AuxLabelSet turn_labels(const LabelSpace& space, const Dialog& dialog, std::size_t t);

inline constexpr double kProbabilityFloor = 1e-7;

/// Sum of binary cross-entropies of logistic(score) against 0/1 labels.
double bernoulli_multilabel_loss(std::span<const double> scores, std::span<const std::uint8_t> labels);
std::vector<double> bernoulli_multilabel_grad(std::span<const double> scores,
                                              std::span<const std::uint8_t> labels);

using ChangeScores = std::array<double, 4>;

/// Sum over masked classes of -log softmax(scores)[category].
double categorical_change_loss(std::span<const ChangeScores> scores,
                               std::span<const SlotChange> categories,
                               std::span<const std::uint8_t> mask);
std::vector<ChangeScores> categorical_change_grad(std::span<const ChangeScores> scores,
                                                  std::span<const SlotChange> categories,
                                                  std::span<const std::uint8_t> mask);

inline double total_aux_loss(double slot_type, double slot_change, double action, double keywords) {
  return slot_type + slot_change + action + keywords;
}

}  // namespace dialtree
