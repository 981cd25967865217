#include "pptp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "pptp/rng.hpp"

namespace pptp::oracle {
namespace {

std::vector<char> selection_flags(const TreeInstance& instance,
                                  std::span<const NodeId> selection) {
  std::vector<char> flags(static_cast<size_t>(instance.size()), 0);
  for (const NodeId id : selection) {
    if (id < 0 || id >= instance.size()) {
      throw std::invalid_argument("selection id " + std::to_string(id) + " out of range");
    }
    if (!instance.node(id).is_customer()) {
      throw std::invalid_argument("selection id " + std::to_string(id) +
                                  " is not a customer");
    }
    if (flags[static_cast<size_t>(id)]) {
      throw std::invalid_argument("selection repeats id " + std::to_string(id));
    }
    flags[static_cast<size_t>(id)] = 1;
  }
  return flags;
}

// q_none[v] = probability that no selected node in v's subtree requests.
std::vector<double> none_below(const TreeInstance& instance,
                               const std::vector<char>& flags) {
  std::vector<double> q_none(flags.size(), 1.0);
  for (size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) q_none[i] = 1.0 - instance.node(static_cast<NodeId>(i)).prob;
  }
  const auto order = instance.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Node& node = instance.node(*it);
    if (node.parent) {
      q_none[static_cast<size_t>(*node.parent)] *= q_none[static_cast<size_t>(*it)];
    }
  }
  return q_none;
}

NodeId lca(const TreeInstance& instance, NodeId a, NodeId b) {
  while (instance.depth(a) > instance.depth(b)) a = *instance.node(a).parent;
  while (instance.depth(b) > instance.depth(a)) b = *instance.node(b).parent;
  while (a != b) {
    a = *instance.node(a).parent;
    b = *instance.node(b).parent;
  }
  return a;
}

double max_bonus(const TreeInstance& instance, std::span<const NodeId> selection) {
  NodeId anchor = selection.front();
  for (const NodeId id : selection.subspan(1)) anchor = lca(instance, anchor, id);
  return instance.node(anchor).dist;
}

void check_bonus(const TreeInstance& instance, std::span<const NodeId> selection,
                 double bonus) {
  if (!(bonus >= 0.0)) throw std::out_of_range("bonus must be non-negative");
  if (selection.empty()) return;
  const double limit = max_bonus(instance, selection);
  if (bonus > limit + 1e-9 * std::max(1.0, limit)) {
    throw std::out_of_range("bonus " + std::to_string(bonus) +
                            " exceeds the common root-path cost " + std::to_string(limit));
  }
}

}  // namespace

double prob_any(const TreeInstance& instance, std::span<const NodeId> selection) {
  selection_flags(instance, selection);
  double none = 1.0;
  for (const NodeId id : selection) none *= 1.0 - instance.node(id).prob;
  return 1.0 - none;
}

double expected_revenue(const TreeInstance& instance, std::span<const NodeId> selection) {
  selection_flags(instance, selection);
  double total = 0.0;
  for (const NodeId id : selection) {
    const Node& node = instance.node(id);
    total += node.prize * node.prob;
  }
  return total;
}

double expected_cost(const TreeInstance& instance, std::span<const NodeId> selection,
                     double bonus) {
  const auto flags = selection_flags(instance, selection);
  check_bonus(instance, selection, bonus);
  const auto q_none = none_below(instance, flags);
  // An edge is traversed (once down, once up) iff somebody below requests.
  double cost = 0.0;
  for (const Node& node : instance.nodes()) {
    if (node.parent) cost += node.edge_cost * (1.0 - q_none[static_cast<size_t>(node.id)]);
  }
  const double p_any = 1.0 - q_none[TreeInstance::root_id];
  return cost - bonus * p_any;
}

double expected_profit(const TreeInstance& instance, std::span<const NodeId> selection,
                       double bonus) {
  return expected_revenue(instance, selection) -
         expected_cost(instance, selection, bonus);
}

double realized_cost(const TreeInstance& instance, std::span<const NodeId> selection,
                     const Outcome& outcome) {
  const auto committed = selection_flags(instance, selection);
  selection_flags(instance, outcome.requesting);
  std::vector<char> paid(static_cast<size_t>(instance.size()), 0);
  paid[TreeInstance::root_id] = 1;
  double cost = 0.0;
  for (const NodeId id : outcome.requesting) {
    if (!committed[static_cast<size_t>(id)]) continue;
    for (NodeId v = id; !paid[static_cast<size_t>(v)]; v = *instance.node(v).parent) {
      paid[static_cast<size_t>(v)] = 1;
      cost += instance.node(v).edge_cost;
    }
  }
  return cost;
}

BruteForceResult brute_force_solve(const TreeInstance& instance) {
  const auto customers = instance.customers();
  const size_t k = customers.size();
  if (k > 25) {
    throw ResourceGuardError("brute force supports at most 25 customers, instance has " +
                             std::to_string(k));
  }
  const size_t n = static_cast<size_t>(instance.size());
  const auto order = instance.preorder();
  std::vector<double> q_none(n);

  const auto mask_profit = [&](std::uint32_t mask) {
    std::fill(q_none.begin(), q_none.end(), 1.0);
    double revenue = 0.0;
    for (std::uint32_t bits = mask; bits != 0; bits &= bits - 1) {
      const Node& c = instance.node(customers[static_cast<size_t>(std::countr_zero(bits))]);
      revenue += c.prize * c.prob;
      q_none[static_cast<size_t>(c.id)] = 1.0 - c.prob;
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const Node& node = instance.node(*it);
      if (node.parent) q_none[static_cast<size_t>(*node.parent)] *= q_none[static_cast<size_t>(*it)];
    }
    double cost = 0.0;
    for (const Node& node : instance.nodes()) {
      if (node.parent) cost += node.edge_cost * (1.0 - q_none[static_cast<size_t>(node.id)]);
    }
    return revenue - cost;
  };

  const std::uint64_t total = std::uint64_t{1} << k;
  BruteForceResult result;
  result.best_profit = 0.0;  // the empty selection
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    result.best_profit =
        std::max(result.best_profit, mask_profit(static_cast<std::uint32_t>(mask)));
  }

  const double tol = 1e-9 * std::max(1.0, std::abs(result.best_profit));
  std::uint32_t union_mask = 0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if (mask_profit(static_cast<std::uint32_t>(mask)) >= result.best_profit - tol) {
      union_mask |= static_cast<std::uint32_t>(mask);
      auto& set = result.all_optima.emplace_back();
      for (std::uint32_t bits = static_cast<std::uint32_t>(mask); bits != 0; bits &= bits - 1) {
        set.push_back(customers[static_cast<size_t>(std::countr_zero(bits))]);
      }
    }
  }
  for (std::uint32_t bits = union_mask; bits != 0; bits &= bits - 1) {
    result.maximal_optimal_set.push_back(
        customers[static_cast<size_t>(std::countr_zero(bits))]);
  }
  return result;
}

SimulationStats simulate(const TreeInstance& instance, std::span<const NodeId> selection,
                         std::uint64_t samples, std::uint64_t seed) {
  selection_flags(instance, selection);
  if (samples == 0) throw std::invalid_argument("samples must be >= 1");

  std::vector<std::uint64_t> paid_epoch(static_cast<size_t>(instance.size()), 0);
  SimulationStats stats;
  stats.samples = samples;
  double mean = 0.0, m2 = 0.0, revenue_sum = 0.0, cost_sum = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const std::uint64_t epoch = s + 1;
    double revenue = 0.0, cost = 0.0;
    for (const NodeId id : selection) {
      const Node& c = instance.node(id);
      if (uniform_draw(seed, static_cast<std::uint64_t>(id), s) >= c.prob) continue;
      revenue += c.prize;
      for (NodeId v = id; v != TreeInstance::root_id && paid_epoch[static_cast<size_t>(v)] != epoch;
           v = *instance.node(v).parent) {
        paid_epoch[static_cast<size_t>(v)] = epoch;
        cost += instance.node(v).edge_cost;
      }
    }
    revenue_sum += revenue;
    cost_sum += cost;
    const double profit = revenue - cost;
    const double d1 = profit - mean;
    mean += d1 / static_cast<double>(s + 1);
    m2 += d1 * (profit - mean);
  }
  stats.mean_profit = mean;
  stats.mean_revenue = revenue_sum / static_cast<double>(samples);
  stats.mean_cost = cost_sum / static_cast<double>(samples);
  stats.std_error =
      samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) /
                              static_cast<double>(samples))
                  : 0.0;
  return stats;
}

}  // namespace pptp::oracle
