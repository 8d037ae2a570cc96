#include "dialtree/scheduler.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "dialtree/error.hpp"
#include "dialtree/text.hpp"

namespace dialtree {

TimeUnit parse_time_unit(std::string_view name) {
  if (name == "epoch") return TimeUnit::Epoch;
  if (name == "step") return TimeUnit::Step;
  if (name == "fraction") return TimeUnit::Fraction;
  throw LookupError("unknown time unit '" + std::string(name) + "'");
}

std::string_view to_string(TimeUnit unit) {
  switch (unit) {
    case TimeUnit::Epoch: return "epoch";
    case TimeUnit::Step: return "step";
    case TimeUnit::Fraction: return "fraction";
  }
  return "epoch";
}

Schedule::Schedule(double mu, TimeUnit unit) : mu_(mu), unit_(unit) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw RangeError("schedule mu must be positive and finite");
}

double keep_probability(const Schedule& schedule, double t) {
  if (!(t >= 0.0)) throw RangeError("schedule time must be nonnegative");
  const double mu = schedule.mu();
  return mu / (mu + std::exp(t / mu));
}

SampleDecision decide_with_probability(const SimilarityMatrix& m, double p, std::size_t gt_index,
                                       SamplerRng& rng) {
  const std::size_t n = m.size();
  if (gt_index >= n)
    throw RangeError("ground-truth index " + std::to_string(gt_index) + " out of range for N=" +
                     std::to_string(n));
  const double keep_draw = rng.uniform();
  const double pick_draw = rng.uniform();

  SampleDecision d;
  d.gt_index = gt_index;
  d.out_index = gt_index;
  d.p = p;
  if (n < 2) {
    d.no_candidates = true;
    return d;
  }
  if (keep_draw < p) return d;

  const auto row = sampling_row(m, gt_index);
  double cumulative = 0.0;
  std::size_t chosen = n;
  std::size_t last_positive = n;
  for (std::size_t j = 0; j < n; ++j) {
    if (row[j] <= 0.0) continue;
    last_positive = j;
    cumulative += row[j];
    if (pick_draw < cumulative) {
      chosen = j;
      break;
    }
  }
  // Rounding can leave the cumulative sum a hair below 1.
  if (chosen == n) chosen = last_positive;

  d.out_index = chosen;
  d.replaced = true;
  d.optimize_action_loss = false;
  return d;
}

SampleDecision decide(const SimilarityMatrix& m, const Schedule& schedule, double t,
                      std::size_t gt_index, SamplerRng& rng) {
  return decide_with_probability(m, keep_probability(schedule, t), gt_index, rng);
}

LossGate gate_losses(const SampleDecision& decision) { return {!decision.replaced, true}; }

std::size_t run_sample_stream(std::istream& in, std::ostream& out, const SimilarityMatrix& m,
                              const Schedule& schedule, SamplerRng& rng) {
  using nlohmann::ordered_json;
  std::size_t errors = 0;
  auto fail = [&](const ordered_json& turn_id, const std::string& message) {
    ordered_json rec;
    rec["turn_id"] = turn_id;
    rec["error"] = message;
    out << rec.dump() << '\n';
    ++errors;
  };

  for (std::string line; std::getline(in, line);) {
    if (normalize_space(line).empty()) continue;
    ordered_json req;
    try {
      req = ordered_json::parse(line);
    } catch (const ordered_json::parse_error&) {
      fail(nullptr, "malformed request line");
      continue;
    }
    const ordered_json turn_id = req.is_object() && req.contains("turn_id") ? req["turn_id"] : ordered_json();
    if (!req.is_object() || !req.contains("action") || !req["action"].is_string() ||
        !req.contains("t") || !req["t"].is_number()) {
      fail(turn_id, "request needs string 'action' and numeric 't'");
      continue;
    }
    const auto action = normalize_space(req["action"].get<std::string>());
    const auto index = m.vocab().find(action);
    if (!index) {
      fail(turn_id, "unknown action '" + action + "'");
      continue;
    }
    const double t = req["t"].get<double>();
    if (!(t >= 0.0)) {
      fail(turn_id, "negative schedule time");
      continue;
    }
    const auto d = decide(m, schedule, t, *index, rng);
    ordered_json rec;
    rec["turn_id"] = turn_id;
    rec["action_out"] = m.vocab()[d.out_index];
    rec["replaced"] = d.replaced;
    rec["p"] = d.p;
    rec["optimize_action_loss"] = d.optimize_action_loss;
    out << rec.dump() << '\n';
  }
  out.flush();
  return errors;
}

}  // namespace dialtree
