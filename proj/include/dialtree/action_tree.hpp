#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dialtree/dialog.hpp"

namespace dialtree {

inline constexpr std::string_view kRootLabel = "<root>";

/// Rooted, ordered, labeled tree. Action sequences map onto three levels
/// (domain, act, slot) under a virtual root, but the type itself accepts any
/// shape so distances can be checked on arbitrary trees.
class ActionTree {
 public:
  struct Node {
    std::string label;
    std::vector<Node> children;
  };

  explicit ActionTree(Node root);

  const Node& root() const { return root_; }
  /// Node count, virtual root included.
  std::size_t size() const { return labels_.size(); }

  // Postorder flattening used by the distance computation.
  std::span<const std::string> postorder_labels() const { return labels_; }
  /// Postorder index of the leftmost leaf under each node.
  std::span<const std::size_t> leftmost_leaves() const { return leftmost_; }
  /// Ascending postorder indices of the keyroots.
  std::span<const std::size_t> keyroots() const { return keyroots_; }

 private:
  Node root_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> leftmost_;
  std::vector<std::size_t> keyroots_;
};

struct EditCost {
  double insert = 1.0;
  double remove = 1.0;
  double relabel = 1.0;
};

ActionTree to_tree(const ActionSeq& action);

/// Ordered tree edit distance (Zhang-Shasha keyroot dynamic program).
double tree_edit_distance(const ActionTree& a, const ActionTree& b, const EditCost& cost = {});

/// (max(|a|,|b|) - d) / max(|a|,|b|), clamped below at 0.
double similarity(const ActionTree& a, const ActionTree& b);

}  // namespace dialtree
