#pragma once

#include <optional>
#include <vector>

#include "pptp/envelope.hpp"
#include "pptp/instance.hpp"

namespace pptp {

struct Solution {
  std::vector<NodeId> selected;  // maximal optimal customer set, sorted
  double expected_profit = 0.0;
  double expected_revenue = 0.0;
  double expected_cost = 0.0;
  std::optional<Description> envelope;  // root description, on request
};

// Description of the subtree rooted at subtree_root over [0, dist(root)]:
// the root's own leaf description folded with each child description,
// truncated and re-anchored to this root. Children fold in id order; an
// explicit worklist replaces recursion so path-shaped trees of any depth
// solve without exhausting the call stack.
Description solve_tree(const TreeInstance& instance, NodeId subtree_root);

// Exact optimum of the whole instance. selected is the maximal optimal
// set (union of all optimal selections); revenue and cost come from the
// oracle module, profit from the envelope, so the profit identity
// revenue - cost is a genuine cross-check rather than an accounting one.
Solution solve(const TreeInstance& instance, bool keep_envelope = false);

}  // namespace pptp
