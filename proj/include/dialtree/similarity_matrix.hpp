#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dialtree/dialog.hpp"
#include "dialtree/ontology.hpp"

namespace dialtree {

/// Canonical action strings in first-occurrence order.
class ActionVocab {
 public:
  ActionVocab() = default;
  /// Throws ValidationError on duplicates.
  explicit ActionVocab(std::vector<std::string> actions);

  /// Returns the index of `action`, inserting it if new.
  std::size_t add(const std::string& action);
  std::optional<std::size_t> find(const std::string& action) const;

  const std::string& operator[](std::size_t i) const { return actions_[i]; }
  std::size_t size() const { return actions_.size(); }
  bool empty() const { return actions_.empty(); }
  const std::vector<std::string>& actions() const { return actions_; }

  friend bool operator==(const ActionVocab& a, const ActionVocab& b) { return a.actions_ == b.actions_; }

 private:
  std::vector<std::string> actions_;
  std::unordered_map<std::string, std::size_t> index_;
};

ActionVocab collect_vocab(std::span<const Dialog> corpus);

/// Dense symmetric N x N similarity matrix with unit diagonal, stored as float.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(ActionVocab vocab, std::vector<float> values);

  const ActionVocab& vocab() const { return vocab_; }
  std::size_t size() const { return vocab_.size(); }
  float at(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
  std::span<const float> row(std::size_t i) const { return {values_.data() + i * size(), size()}; }
  const std::vector<float>& values() const { return values_; }

  friend bool operator==(const SimilarityMatrix&, const SimilarityMatrix&) = default;

 private:
  ActionVocab vocab_;
  std::vector<float> values_;
};

struct BuildStats {
  std::size_t distance_evaluations = 0;
};

/// Computes the upper triangle (N(N-1)/2 distances) over `threads` workers
/// and mirrors it. The result does not depend on the thread count.
SimilarityMatrix build_matrix(const ActionVocab& vocab, const Ontology& ontology,
                              unsigned threads = 1, BuildStats* stats = nullptr);

// Binary layout: "ATSM", u16 version = 1, u32 N, N*N binary32, all
// little-endian, row-major. The vocabulary lives in a separate text file.
void write_matrix_values(std::ostream& out, std::uint32_t n, std::span<const float> values);
std::vector<float> read_matrix_values(std::istream& in, std::uint32_t* n_out);

void save_matrix(const SimilarityMatrix& m, const std::filesystem::path& matrix_path,
                 const std::filesystem::path& vocab_path);
SimilarityMatrix load_matrix(const std::filesystem::path& matrix_path,
                             const std::filesystem::path& vocab_path);

/// Negative-sampling distribution for ground truth `i`: M[i][j] normalized
/// over j != i, zero at i, uniform when every off-diagonal entry is zero.
std::vector<double> sampling_row(const SimilarityMatrix& m, std::size_t i);

}  // namespace dialtree
