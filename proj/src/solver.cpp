#include "pptp/solver.hpp"

#include <stdexcept>
#include <string>
#include <utility>

#include "pptp/merge.hpp"
#include "pptp/oracle.hpp"

namespace pptp {

Description solve_tree(const TreeInstance& instance, NodeId subtree_root) {
  if (subtree_root < 0 || subtree_root >= instance.size()) {
    throw std::invalid_argument("unknown node id " + std::to_string(subtree_root));
  }

  struct Frame {
    NodeId node;
    std::size_t next_child = 0;
    std::optional<Description> acc;
  };
  std::vector<Frame> stack;
  stack.push_back({subtree_root, 0, std::nullopt});
  std::optional<Description> completed;

  while (!stack.empty()) {
    Frame& frame = stack.back();
    const Node& node = instance.node(frame.node);
    if (!frame.acc) frame.acc.emplace(leaf_description(node));
    if (completed) {
      frame.acc.emplace(merge(*frame.acc, truncate_rebase(*completed, node.dist)));
      completed.reset();
    }
    const auto kids = instance.children(frame.node);
    if (frame.next_child < kids.size()) {
      const NodeId child = kids[frame.next_child++];
      stack.push_back({child, 0, std::nullopt});  // invalidates frame
      continue;
    }
    completed = std::move(frame.acc);
    stack.pop_back();
  }
  return std::move(*completed);
}

Solution solve(const TreeInstance& instance, bool keep_envelope) {
  Description desc = solve_tree(instance, TreeInstance::root_id);
  auto at_zero = desc.evaluate(0.0);

  Solution sol;
  sol.selected = std::move(at_zero.set);
  sol.expected_profit = at_zero.value;
  sol.expected_revenue = oracle::expected_revenue(instance, sol.selected);
  sol.expected_cost = oracle::expected_cost(instance, sol.selected, 0.0);
  if (keep_envelope) sol.envelope = std::move(desc);
  return sol;
}

}  // namespace pptp
