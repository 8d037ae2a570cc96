#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dialtree/db.hpp"
#include "dialtree/dialog.hpp"
#include "dialtree/ontology.hpp"
#include "dialtree/scheduler.hpp"
#include "dialtree/similarity_matrix.hpp"

namespace dialtree {

struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t domains = 3;             // at most 8
  std::size_t slots_per_domain = 4;    // informable slots besides "name", at most 8
  std::size_t entities_per_domain = 10;
  std::size_t values_per_slot = 3;
  std::size_t dialogs = 20;
  std::size_t min_turns = 3;
  std::size_t max_turns = 14;
  double change_rate = 0.2;  // chance a revealed slot is first given a wrong value
  double delete_rate = 0.2;  // chance a reveal turn adds a slot removed next turn
  /// Acts appended after "[inform] name ..." on an offer turn; "" adds none.
  std::vector<std::string> offer_templates = {"offerbook", "recommend", ""};

  /// Throws ValidationError on out-of-range counts.
  void validate() const;
};

struct SynthCorpus {
  Ontology ontology;
  EntityDb db;
  std::vector<Dialog> dialogs;
};

/// Deterministic in `cfg.seed`. Dialogs are goal-driven: constraints are
/// revealed turn by turn (with optional change/delete detours), then the
/// system offers the first matching entity and answers requested slots.
SynthCorpus generate_corpus(const SynthConfig& cfg);

struct SamplerReport {
  std::size_t draws = 0;
  std::size_t gt_index = 0;
  double expected_keep_rate = 0.0;
  double keep_rate = 0.0;
  double keep_stderr = 0.0;  // binomial standard error at the expected rate
  std::size_t replacements = 0;
  std::size_t gt_emitted_on_replace = 0;
  std::vector<double> replacement_frequencies;  // conditional on replacement
  std::vector<double> expected_frequencies;     // sampling_row(gt)
  double tv_distance = 0.0;
  double mean_similarity_sampled = 0.0;   // empirical, over replacements
  double mean_similarity_expected = 0.0;  // under sampling_row
  double mean_similarity_uniform = 0.0;   // under uniform negatives
};

/// Runs `draws` scheduled-sampling decisions for one ground-truth action and
/// compares the empirical behaviour with the specified distributions. Draws
/// are split into `threads` shards with seeds derived from `seed`.
SamplerReport validate_sampler(const SimilarityMatrix& m, const Schedule& schedule, std::size_t draws,
                               double t, std::size_t gt_index = 0, std::uint64_t seed = 1,
                               unsigned threads = 1);

/// Same as validate_sampler with a fixed keep probability.
SamplerReport validate_sampler_at(const SimilarityMatrix& m, double p, std::size_t draws,
                                  std::size_t gt_index = 0, std::uint64_t seed = 1,
                                  unsigned threads = 1);

}  // namespace dialtree
