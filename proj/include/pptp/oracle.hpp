#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "pptp/instance.hpp"

// Ground-truth layer: expectations computed straight from the model
// definition (edge-use probabilities, outcome walks, subset enumeration,
// Monte Carlo), sharing no code with the envelope solver so the two can
// check each other.
namespace pptp::oracle {

// Thrown when a request would enumerate past the supported size.
class ResourceGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One realized day: the customers whose request draw came up.
struct Outcome {
  std::vector<NodeId> requesting;
};

// Probability that at least one node of the selection requests.
double prob_any(const TreeInstance& instance, std::span<const NodeId> selection);

double expected_revenue(const TreeInstance& instance, std::span<const NodeId> selection);

// Expected tour cost of serving the selection's requesters, with the first
// `bonus` units of common root-path cost waived. bonus may not exceed the
// root-path cost of the selection's deepest common ancestor.
double expected_cost(const TreeInstance& instance, std::span<const NodeId> selection,
                     double bonus = 0.0);

double expected_profit(const TreeInstance& instance, std::span<const NodeId> selection,
                       double bonus = 0.0);

// Cost of the minimal closed walk from the root serving the committed
// customers that request on one realized day, i.e. selection ∩ outcome.
double realized_cost(const TreeInstance& instance, std::span<const NodeId> selection,
                     const Outcome& outcome);

struct BruteForceResult {
  double best_profit = 0.0;
  std::vector<NodeId> maximal_optimal_set;       // union of all optima
  std::vector<std::vector<NodeId>> all_optima;   // every optimal selection, sorted
};

// Exhaustive search over customer subsets; guarded at 25 customers.
// Optima are collected within relative tolerance 1e-9 of the best profit.
BruteForceResult brute_force_solve(const TreeInstance& instance);

struct SimulationStats {
  double mean_profit = 0.0;
  double std_error = 0.0;  // of mean_profit
  double mean_revenue = 0.0;
  double mean_cost = 0.0;
  std::uint64_t samples = 0;
};

// Monte Carlo estimate of the selection's profit. Draws are counter-based
// (stream = customer id, counter = sample index), so a run sharded across
// workers reproduces the single-loop estimate bit for bit.
SimulationStats simulate(const TreeInstance& instance, std::span<const NodeId> selection,
                         std::uint64_t samples, std::uint64_t seed);

}  // namespace pptp::oracle
