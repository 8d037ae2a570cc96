#include "dialtree/action_tree.hpp"

#include <algorithm>
#include <functional>

namespace dialtree {

ActionTree::ActionTree(Node root) : root_(std::move(root)) {
  std::function<std::size_t(const Node&)> visit = [&](const Node& n) -> std::size_t {
    std::size_t leftmost = 0;
    bool first = true;
    for (const auto& c : n.children) {
      const auto l = visit(c);
      if (first) leftmost = l;
      first = false;
    }
    const auto index = labels_.size();
    labels_.push_back(n.label);
    leftmost_.push_back(first ? index : leftmost);
    return leftmost_.back();
  };
  visit(root_);

  // A keyroot is the highest node sharing its leftmost leaf.
  std::vector<bool> seen(labels_.size(), false);
  for (std::size_t i = labels_.size(); i-- > 0;) {
    if (!seen[leftmost_[i]]) {
      seen[leftmost_[i]] = true;
      keyroots_.push_back(i);
    }
  }
  std::sort(keyroots_.begin(), keyroots_.end());
}

ActionTree to_tree(const ActionSeq& action) {
  ActionTree::Node root{std::string(kRootLabel), {}};
  for (const auto& d : action.domains) {
    ActionTree::Node dn{d.domain, {}};
    for (const auto& a : d.acts) {
      ActionTree::Node an{a.act, {}};
      for (const auto& s : a.slots) an.children.push_back({s, {}});
      dn.children.push_back(std::move(an));
    }
    root.children.push_back(std::move(dn));
  }
  return ActionTree(std::move(root));
}

double tree_edit_distance(const ActionTree& a, const ActionTree& b, const EditCost& cost) {
  const auto la = a.postorder_labels();
  const auto lb = b.postorder_labels();
  const auto ka = a.leftmost_leaves();
  const auto kb = b.leftmost_leaves();
  const std::size_t n = la.size();
  const std::size_t m = lb.size();

  std::vector<double> tree(n * m, 0.0);
  std::vector<double> forest((n + 1) * (m + 1), 0.0);
  auto td = [&](std::size_t i, std::size_t j) -> double& { return tree[i * m + j]; };
  auto fd = [&](std::size_t i, std::size_t j) -> double& { return forest[i * (m + 1) + j]; };

  for (const auto i : a.keyroots()) {
    for (const auto j : b.keyroots()) {
      const auto il = ka[i];
      const auto jl = kb[j];
      // fd(x, y) covers forests la[il..il+x) and lb[jl..jl+y).
      fd(0, 0) = 0.0;
      for (std::size_t x = il; x <= i; ++x) fd(x - il + 1, 0) = fd(x - il, 0) + cost.remove;
      for (std::size_t y = jl; y <= j; ++y) fd(0, y - jl + 1) = fd(0, y - jl) + cost.insert;
      for (std::size_t x = il; x <= i; ++x) {
        const auto fx = x - il + 1;
        for (std::size_t y = jl; y <= j; ++y) {
          const auto fy = y - jl + 1;
          const double del = fd(fx - 1, fy) + cost.remove;
          const double ins = fd(fx, fy - 1) + cost.insert;
          if (ka[x] == il && kb[y] == jl) {
            const double rel = fd(fx - 1, fy - 1) + (la[x] == lb[y] ? 0.0 : cost.relabel);
            fd(fx, fy) = std::min({del, ins, rel});
            td(x, y) = fd(fx, fy);
          } else {
            const double sub = fd(ka[x] - il, kb[y] - jl) + td(x, y);
            fd(fx, fy) = std::min({del, ins, sub});
          }
        }
      }
    }
  }
  return td(n - 1, m - 1);
}

double similarity(const ActionTree& a, const ActionTree& b) {
  const double size = static_cast<double>(std::max(a.size(), b.size()));
  const double d = tree_edit_distance(a, b);
  return std::max(0.0, (size - d) / size);
}

}  // namespace dialtree
