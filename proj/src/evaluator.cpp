#include "dialtree/evaluator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "dialtree/error.hpp"
#include "dialtree/text.hpp"

namespace dialtree {

PredictedDialog gold_prediction(const Dialog& dialog) {
  PredictedDialog out{dialog.id, {}};
  for (const auto& t : dialog.turns) out.turns.push_back({t.belief, t.response_delex});
  return out;
}

namespace {

bool contains_token(const std::string& text, std::string_view token) {
  const auto tokens = split_whitespace(text);
  return std::find(tokens.begin(), tokens.end(), token) != tokens.end();
}

bool satisfies(const Entity& e, const SlotValues& constraints) {
  for (const auto& [slot, value] : constraints) {
    const auto* v = e.find(slot);
    if (!v || to_lower(*v) != to_lower(value)) return false;
  }
  return true;
}

}  // namespace

DialogScore score_dialog(const Dialog& gold, const PredictedDialog& predicted, const EntityDb& db) {
  DialogScore score{gold.id, true, true, {}};
  for (const auto& goal : gold.goal.domains) {
    DomainOutcome outcome{goal.domain, std::nullopt, false, std::nullopt, std::nullopt};
    bool informed = true;
    if (!goal.informable.empty()) {
      informed = false;
      for (std::size_t t = 0; t < predicted.turns.size(); ++t) {
        const auto& turn = predicted.turns[t];
        if (!turn.belief.find_domain(goal.domain) || !contains_token(turn.response, kOfferPlaceholder))
          continue;
        outcome.offer_turn = t;
        const auto matches = query(db, turn.belief, goal.domain);
        if (!matches.empty()) {
          outcome.offered_entity = matches.front()->name;
          informed = satisfies(*matches.front(), goal.informable);
        }
        break;
      }
      outcome.inform = informed;
      score.inform = score.inform && informed;
    }
    bool answered = true;
    for (const auto& r : goal.requested) {
      const auto placeholder = placeholder_for(r);
      const bool found = std::any_of(predicted.turns.begin(), predicted.turns.end(),
                                     [&](const PredictedTurn& t) { return contains_token(t.response, placeholder); });
      if (!found) {
        answered = false;
        break;
      }
    }
    outcome.success = informed && answered;
    score.success = score.success && outcome.success;
    score.domains.push_back(std::move(outcome));
  }
  return score;
}

double corpus_bleu(std::span<const std::string> candidates, std::span<const std::string> references) {
  if (candidates.size() != references.size())
    throw ShapeError("BLEU needs aligned lists: " + std::to_string(candidates.size()) + " candidates vs " +
                     std::to_string(references.size()) + " references");
  if (candidates.empty()) throw ValidationError("BLEU is undefined on an empty corpus");

  constexpr std::size_t kOrder = 4;
  constexpr double kFloor = 1e-9;
  std::array<double, kOrder> matched{};
  std::array<double, kOrder> total{};
  double cand_len = 0.0;
  double ref_len = 0.0;

  for (std::size_t s = 0; s < candidates.size(); ++s) {
    const auto cand = split_whitespace(candidates[s]);
    const auto ref = split_whitespace(references[s]);
    cand_len += static_cast<double>(cand.size());
    ref_len += static_cast<double>(ref.size());
    for (std::size_t n = 1; n <= kOrder; ++n) {
      std::map<std::vector<std::string>, std::size_t> ref_counts;
      for (std::size_t i = 0; i + n <= ref.size(); ++i)
        ++ref_counts[std::vector<std::string>(ref.begin() + i, ref.begin() + i + n)];
      std::map<std::vector<std::string>, std::size_t> cand_counts;
      for (std::size_t i = 0; i + n <= cand.size(); ++i)
        ++cand_counts[std::vector<std::string>(cand.begin() + i, cand.begin() + i + n)];
      for (const auto& [gram, count] : cand_counts) {
        auto it = ref_counts.find(gram);
        const auto clip = it == ref_counts.end() ? 0 : std::min(count, it->second);
        matched[n - 1] += static_cast<double>(clip);
        total[n - 1] += static_cast<double>(count);
      }
    }
  }

  double log_sum = 0.0;
  for (std::size_t n = 0; n < kOrder; ++n) {
    double p = total[n] > 0.0 ? matched[n] / total[n] : 0.0;
    if (p <= 0.0) p = kFloor;
    log_sum += std::log(p) / static_cast<double>(kOrder);
  }
  double bp = 1.0;
  if (cand_len < ref_len) bp = cand_len > 0.0 ? std::exp(1.0 - ref_len / cand_len) : 0.0;
  return 100.0 * bp * std::exp(log_sum);
}

EvalReport evaluate(std::span<const Dialog> gold, std::span<const PredictedDialog> predicted,
                    const EntityDb& db) {
  if (gold.empty()) throw ValidationError("evaluation needs at least one dialog");
  std::unordered_map<std::string, const PredictedDialog*> by_id;
  for (const auto& p : predicted) by_id.emplace(p.id, &p);

  EvalReport report;
  std::vector<std::string> candidates;
  std::vector<std::string> references;
  std::size_t informed = 0;
  std::size_t succeeded = 0;
  for (const auto& g : gold) {
    auto it = by_id.find(g.id);
    if (it == by_id.end()) throw LookupError("no prediction for dialog '" + g.id + "'");
    const auto& p = *it->second;
    if (p.turns.size() != g.turns.size())
      throw ShapeError("dialog '" + g.id + "' has " + std::to_string(g.turns.size()) +
                       " gold turns but " + std::to_string(p.turns.size()) + " predicted turns");
    auto score = score_dialog(g, p, db);
    informed += score.inform;
    succeeded += score.success;
    report.dialogs.push_back(std::move(score));
    for (std::size_t t = 0; t < g.turns.size(); ++t) {
      candidates.push_back(p.turns[t].response);
      references.push_back(g.turns[t].response_delex);
    }
  }
  const double n = static_cast<double>(gold.size());
  report.inform = 100.0 * static_cast<double>(informed) / n;
  report.success = 100.0 * static_cast<double>(succeeded) / n;
  report.bleu = corpus_bleu(candidates, references);
  report.combined = combined_score(report.inform, report.success, report.bleu);
  return report;
}

std::string format_report_table(const EvalReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%-10s %8s\n%-10s %8.2f\n%-10s %8.2f\n%-10s %8.2f\n%-10s %8.2f\n%-10s %8zu\n",
                "metric", "value", "Inform", report.inform, "Success", report.success, "BLEU",
                report.bleu, "Combined", report.combined, "dialogs", report.dialogs.size());
  return buf;
}

}  // namespace dialtree
