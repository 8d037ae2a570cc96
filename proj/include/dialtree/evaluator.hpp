#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dialtree/db.hpp"
#include "dialtree/dialog.hpp"

namespace dialtree {

struct PredictedTurn {
  BeliefState belief;
  std::string response;
  friend bool operator==(const PredictedTurn&, const PredictedTurn&) = default;
};

struct PredictedDialog {
  std::string id;
  std::vector<PredictedTurn> turns;
  friend bool operator==(const PredictedDialog&, const PredictedDialog&) = default;
};

/// Gold annotations repackaged as predictions.
PredictedDialog gold_prediction(const Dialog& dialog);

struct DomainOutcome {
  std::string domain;
  /// Empty for domains without informable constraints.
  std::optional<bool> inform;
  bool success = false;
  /// Turn whose response first offered an entity, if any.
  std::optional<std::size_t> offer_turn;
  std::optional<std::string> offered_entity;
};

struct DialogScore {
  std::string id;
  bool inform = false;
  bool success = false;
  std::vector<DomainOutcome> domains;
};

struct EvalReport {
  double inform = 0.0;
  double success = 0.0;
  double bleu = 0.0;
  double combined = 0.0;
  std::vector<DialogScore> dialogs;
};

inline constexpr std::string_view kOfferPlaceholder = "[value_name]";

/// Scores one dialog. For each goal domain with informable constraints, the
/// offer turn is the first turn whose predicted belief constrains that domain
/// and whose response contains "[value_name]"; the offered entity is the
/// first DB match of that turn's belief. Success further requires every
/// requested slot r to appear as "[value_r]" in some response.
DialogScore score_dialog(const Dialog& gold, const PredictedDialog& predicted, const EntityDb& db);

/// Corpus BLEU-4 over whitespace tokens, uniform weights, standard brevity
/// penalty, zero precisions floored at 1e-9. Scaled to [0, 100].
double corpus_bleu(std::span<const std::string> candidates, std::span<const std::string> references);

inline double combined_score(double inform, double success, double bleu) {
  return (inform + success) * 0.5 + bleu;
}

/// Predictions are matched to gold dialogs by id; turn counts must agree.
EvalReport evaluate(std::span<const Dialog> gold, std::span<const PredictedDialog> predicted,
                    const EntityDb& db);

std::string format_report_table(const EvalReport& report);

}  // namespace dialtree
