#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string_view>

#include "dialtree/similarity_matrix.hpp"

namespace dialtree {

/// Unit in which schedule time t is expressed. The decay formula is the same
/// for every unit; the unit only fixes how callers count t.
enum class TimeUnit { Epoch, Step, Fraction };

TimeUnit parse_time_unit(std::string_view name);
std::string_view to_string(TimeUnit unit);

class Schedule {
 public:
  /// Throws RangeError unless mu > 0.
  explicit Schedule(double mu, TimeUnit unit = TimeUnit::Epoch);

  double mu() const { return mu_; }
  TimeUnit unit() const { return unit_; }

 private:
  double mu_;
  TimeUnit unit_;
};

/// p(t) = mu / (mu + exp(t / mu)); strictly decreasing, p(0) = mu / (mu + 1).
double keep_probability(const Schedule& schedule, double t);

/// Seeded uniform source. Every decision consumes exactly two draws.
class SamplerRng {
 public:
  explicit SamplerRng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct SampleDecision {
  std::size_t gt_index = 0;
  std::size_t out_index = 0;
  bool replaced = false;
  double p = 1.0;
  bool optimize_action_loss = true;
  /// Set when the vocabulary has a single entry and replacement is impossible.
  bool no_candidates = false;
};

/// Keeps the ground truth with probability `p`, otherwise draws a negative
/// from sampling_row by inverse CDF.
SampleDecision decide_with_probability(const SimilarityMatrix& m, double p, std::size_t gt_index,
                                       SamplerRng& rng);

SampleDecision decide(const SimilarityMatrix& m, const Schedule& schedule, double t,
                      std::size_t gt_index, SamplerRng& rng);

struct LossGate {
  bool action_loss_enabled;
  bool response_loss_enabled;
  friend bool operator==(const LossGate&, const LossGate&) = default;
};

/// The response loss always trains; the action loss trains only on kept
/// ground-truth actions.
LossGate gate_losses(const SampleDecision& decision);

/// Line protocol: each input line is a JSON object {turn_id, action, t}; each
/// output line is {turn_id, action_out, replaced, p, optimize_action_loss} or
/// {turn_id, error}. Returns the number of error records written.
std::size_t run_sample_stream(std::istream& in, std::ostream& out, const SimilarityMatrix& m,
                              const Schedule& schedule, SamplerRng& rng);

}  // namespace dialtree
