#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pptp {

using NodeId = std::int32_t;

enum class NodeKind { junction, customer };

// How edge costs in an instance file are to be read. Internally every
// edge cost is stored round-trip (traverse down and back up).
enum class CostConvention { round_trip, one_way };

struct Node {
  NodeId id = 0;
  std::optional<NodeId> parent;  // nullopt iff root
  double edge_cost = 0.0;        // round-trip cost of the edge to the parent
  NodeKind kind = NodeKind::junction;
  double prize = 0.0;  // customers only
  double prob = 0.0;   // customers only, in (0, 1]
  double dist = 0.0;   // round-trip cost of the root path, derived

  bool is_customer() const { return kind == NodeKind::customer; }
};

// Carries every violation found in an instance, not just the first.
class InstanceError : public std::runtime_error {
 public:
  explicit InstanceError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Immutable rooted tree. Node ids are dense 0..size-1 with the root at 0;
// construction validates the shape and derives dist, depth, preorder and
// the customer list. Child lists and the customer list are in increasing
// id order, so sibling preorder position equals id order.
class TreeInstance {
 public:
  static constexpr NodeId root_id = 0;

  TreeInstance(std::string name, std::vector<Node> nodes);

  const std::string& name() const { return name_; }
  NodeId size() const { return static_cast<NodeId>(nodes_.size()); }
  const Node& node(NodeId id) const { return nodes_[static_cast<size_t>(id)]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::span<const NodeId> children(NodeId id) const;
  std::span<const NodeId> preorder() const { return preorder_; }
  std::span<const NodeId> customers() const { return customers_; }
  int depth(NodeId id) const { return depth_[static_cast<size_t>(id)]; }

 private:
  std::string name_;
  std::vector<Node> nodes_;  // indexed by id
  std::vector<std::vector<NodeId>> children_;
  std::vector<NodeId> preorder_;
  std::vector<NodeId> customers_;
  std::vector<int> depth_;
};

// Reads the JSON instance format. A cost_convention field in the file wins;
// default_convention applies only when the file omits it.
TreeInstance parse_instance(std::istream& in,
                            CostConvention default_convention = CostConvention::round_trip);
TreeInstance parse_instance(const std::string& text,
                            CostConvention default_convention = CostConvention::round_trip);

// Emits the JSON instance format, nodes in preorder, costs round-trip.
// parse_instance(serialize_instance(t)) reproduces t exactly.
std::string serialize_instance(const TreeInstance& instance);

struct GenParams {
  int max_children = 4;
  double edge_cost_min = 0.5;
  double edge_cost_max = 10.0;
  double prize_min = 0.5;
  double prize_max = 15.0;
  double prob_min = 0.05;
  double prob_max = 0.95;
  double junction_fraction = 0.2;  // non-root nodes only; the root is a junction
};

// Deterministic: same (node_count, seed, params) gives the same instance
// on every platform.
TreeInstance generate_instance(NodeId node_count, std::uint64_t seed,
                               const GenParams& params = {});

}  // namespace pptp
