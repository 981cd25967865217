#include "pptp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "pptp/rng.hpp"

namespace pptp {
namespace {

using nlohmann::ordered_json;

std::string join(const std::vector<std::string>& parts) {
  std::string out = "invalid instance:";
  for (const auto& p : parts) {
    out += "\n  - ";
    out += p;
  }
  return out;
}

std::string node_msg(NodeId id, const std::string& what) {
  return "node " + std::to_string(id) + ": " + what;
}

}  // namespace

InstanceError::InstanceError(std::vector<std::string> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

TreeInstance::TreeInstance(std::string name, std::vector<Node> nodes)
    : name_(std::move(name)) {
  std::vector<std::string> bad;
  const auto n = nodes.size();
  if (n == 0) bad.push_back("instance has no nodes");

  // Ids must be a permutation of 0..n-1; reindex by id.
  nodes_.resize(n);
  std::vector<char> seen(n, 0);
  for (auto& node : nodes) {
    if (node.id < 0 || static_cast<size_t>(node.id) >= n) {
      bad.push_back(node_msg(node.id, "id out of range"));
      continue;
    }
    if (seen[static_cast<size_t>(node.id)]) {
      bad.push_back("duplicate id " + std::to_string(node.id));
      continue;
    }
    seen[static_cast<size_t>(node.id)] = 1;
    nodes_[static_cast<size_t>(node.id)] = std::move(node);
  }
  if (!bad.empty()) throw InstanceError(std::move(bad));

  for (const auto& node : nodes_) {
    const NodeId id = node.id;
    if (id == root_id) {
      if (node.parent) bad.push_back("missing root: node 0 has a parent");
      if (node.edge_cost != 0.0) bad.push_back(node_msg(id, "root edge_cost must be 0"));
      if (node.kind != NodeKind::junction) bad.push_back(node_msg(id, "root must be a junction"));
    } else if (!node.parent) {
      bad.push_back(node_msg(id, "second root (only node 0 may lack a parent)"));
    } else if (*node.parent < 0 || static_cast<size_t>(*node.parent) >= n) {
      bad.push_back(node_msg(id, "parent id out of range"));
    }
    if (!(node.edge_cost >= 0.0) || !std::isfinite(node.edge_cost)) {
      bad.push_back(node_msg(id, "negative edge cost"));
    }
    if (node.is_customer()) {
      if (!(node.prize > 0.0) || !std::isfinite(node.prize)) {
        bad.push_back(node_msg(id, "prize must be a positive finite number"));
      }
      if (!(node.prob > 0.0 && node.prob <= 1.0)) {
        bad.push_back(node_msg(id, "prob outside (0,1]"));
      }
    }
  }
  if (!bad.empty()) throw InstanceError(std::move(bad));

  children_.resize(n);
  for (const auto& node : nodes_) {
    if (node.parent) children_[static_cast<size_t>(*node.parent)].push_back(node.id);
  }

  // Iterative DFS; children pushed in reverse so they pop in id order.
  depth_.assign(n, -1);
  preorder_.reserve(n);
  std::vector<NodeId> stack{root_id};
  depth_[root_id] = 0;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    preorder_.push_back(v);
    auto& nv = nodes_[static_cast<size_t>(v)];
    if (v != root_id) {
      const auto& pv = nodes_[static_cast<size_t>(*nv.parent)];
      nv.dist = pv.dist + nv.edge_cost;
      depth_[static_cast<size_t>(v)] = depth_[static_cast<size_t>(*nv.parent)] + 1;
    } else {
      nv.dist = 0.0;
    }
    const auto& kids = children_[static_cast<size_t>(v)];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  if (preorder_.size() != n) {
    for (const auto& node : nodes_) {
      if (depth_[static_cast<size_t>(node.id)] < 0) {
        bad.push_back(node_msg(node.id, "unreachable from the root (parent cycle)"));
      }
    }
    throw InstanceError(std::move(bad));
  }

  for (const auto& node : nodes_) {
    if (node.is_customer()) customers_.push_back(node.id);
  }
}

std::span<const NodeId> TreeInstance::children(NodeId id) const {
  return children_[static_cast<size_t>(id)];
}

namespace {

TreeInstance parse_json(const ordered_json& doc, CostConvention default_convention) {
  std::vector<std::string> bad;
  if (!doc.is_object()) throw InstanceError({"top level is not an object"});

  std::string name = "unnamed";
  if (doc.contains("name")) {
    if (doc["name"].is_string()) {
      name = doc["name"].get<std::string>();
    } else {
      bad.push_back("name is not a string");
    }
  }

  CostConvention convention = default_convention;
  if (doc.contains("cost_convention")) {
    const auto& cc = doc["cost_convention"];
    if (cc == "round_trip") {
      convention = CostConvention::round_trip;
    } else if (cc == "one_way") {
      convention = CostConvention::one_way;
    } else {
      bad.push_back("cost_convention must be \"round_trip\" or \"one_way\"");
    }
  }

  if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
    bad.push_back("missing nodes array");
    throw InstanceError(std::move(bad));
  }

  const double scale = convention == CostConvention::one_way ? 2.0 : 1.0;
  std::vector<Node> nodes;
  nodes.reserve(doc["nodes"].size());
  int idx = -1;
  for (const auto& jn : doc["nodes"]) {
    ++idx;
    const std::string where = "nodes[" + std::to_string(idx) + "]";
    if (!jn.is_object()) {
      bad.push_back(where + ": not an object");
      continue;
    }
    Node node;
    if (jn.contains("id") && jn["id"].is_number_integer()) {
      node.id = jn["id"].get<NodeId>();
    } else {
      bad.push_back(where + ": missing integer id");
      continue;
    }
    if (!jn.contains("parent") || jn["parent"].is_null()) {
      node.parent.reset();
    } else if (jn["parent"].is_number_integer()) {
      node.parent = jn["parent"].get<NodeId>();
    } else {
      bad.push_back(node_msg(node.id, "parent must be an integer or null"));
    }
    if (jn.contains("edge_cost") && jn["edge_cost"].is_number()) {
      node.edge_cost = jn["edge_cost"].get<double>() * scale;
    } else if (node.parent) {
      bad.push_back(node_msg(node.id, "missing numeric edge_cost"));
    }
    const auto kind = jn.contains("kind") ? jn["kind"] : ordered_json();
    if (kind == "customer") {
      node.kind = NodeKind::customer;
      if (jn.contains("prize") && jn["prize"].is_number()) {
        node.prize = jn["prize"].get<double>();
      } else {
        bad.push_back(node_msg(node.id, "customer without numeric prize"));
      }
      if (jn.contains("prob") && jn["prob"].is_number()) {
        node.prob = jn["prob"].get<double>();
      } else {
        bad.push_back(node_msg(node.id, "customer without numeric prob"));
      }
    } else if (kind == "junction") {
      node.kind = NodeKind::junction;
      if (jn.contains("prize") || jn.contains("prob")) {
        bad.push_back(node_msg(node.id, "junction with prize or prob"));
      }
    } else {
      bad.push_back(node_msg(node.id, "kind must be \"customer\" or \"junction\""));
    }
    nodes.push_back(std::move(node));
  }
  if (!bad.empty()) {
    // Field and topology checks still run on whatever did parse, so one
    // failed load reports every problem it can find.
    try {
      TreeInstance probe(name, nodes);
    } catch (const InstanceError& e) {
      bad.insert(bad.end(), e.violations().begin(), e.violations().end());
    }
    throw InstanceError(std::move(bad));
  }
  return TreeInstance(std::move(name), std::move(nodes));
}

}  // namespace

TreeInstance parse_instance(std::istream& in, CostConvention default_convention) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InstanceError({std::string("malformed syntax: ") + e.what()});
  }
  return parse_json(doc, default_convention);
}

TreeInstance parse_instance(const std::string& text, CostConvention default_convention) {
  std::istringstream in(text);
  return parse_instance(in, default_convention);
}

std::string serialize_instance(const TreeInstance& instance) {
  ordered_json doc;
  doc["name"] = instance.name();
  doc["cost_convention"] = "round_trip";
  auto& arr = doc["nodes"] = ordered_json::array();
  for (const NodeId id : instance.preorder()) {
    const Node& node = instance.node(id);
    ordered_json jn;
    jn["id"] = node.id;
    if (node.parent) {
      jn["parent"] = *node.parent;
    } else {
      jn["parent"] = nullptr;
    }
    jn["edge_cost"] = node.edge_cost;
    jn["kind"] = node.is_customer() ? "customer" : "junction";
    if (node.is_customer()) {
      jn["prize"] = node.prize;
      jn["prob"] = node.prob;
    }
    arr.push_back(std::move(jn));
  }
  return doc.dump(2) + "\n";
}

TreeInstance generate_instance(NodeId node_count, std::uint64_t seed,
                               const GenParams& params) {
  if (node_count < 1) throw std::invalid_argument("node_count must be >= 1");
  if (params.max_children < 1) throw std::invalid_argument("max_children must be >= 1");
  const auto in_range = [](double lo, double hi) { return lo <= hi && lo >= 0.0; };
  if (!in_range(params.edge_cost_min, params.edge_cost_max) ||
      !in_range(params.prize_min, params.prize_max) ||
      !(params.prob_min > 0.0 && params.prob_min <= params.prob_max &&
        params.prob_max <= 1.0) ||
      !(params.junction_fraction >= 0.0 && params.junction_fraction <= 1.0)) {
    throw std::invalid_argument("generator parameter ranges are inconsistent");
  }

  enum Stream : std::uint64_t { kParent = 1, kKind, kEdge, kPrize, kProb };
  const auto uniform = [&](std::uint64_t stream, std::uint64_t counter, double lo,
                           double hi) {
    return lo + (hi - lo) * uniform_draw(seed, stream, counter);
  };

  std::vector<Node> nodes(static_cast<size_t>(node_count));
  std::vector<NodeId> open{TreeInstance::root_id};  // parents with spare capacity
  std::vector<int> child_count(static_cast<size_t>(node_count), 0);
  nodes[0].id = 0;

  for (NodeId i = 1; i < node_count; ++i) {
    Node& node = nodes[static_cast<size_t>(i)];
    node.id = i;
    for (std::uint64_t attempt = 0;; ++attempt) {
      const auto bits =
          counter_draw(seed, kParent, static_cast<std::uint64_t>(i) << 24 | attempt);
      const auto pick = static_cast<size_t>(bits % open.size());
      const NodeId parent = open[pick];
      if (child_count[static_cast<size_t>(parent)] < params.max_children) {
        node.parent = parent;
        ++child_count[static_cast<size_t>(parent)];
        break;
      }
      open[pick] = open.back();  // saturated, drop and redraw
      open.pop_back();
    }
    open.push_back(i);
    node.edge_cost = uniform(kEdge, static_cast<std::uint64_t>(i),
                             params.edge_cost_min, params.edge_cost_max);
    const bool junction =
        uniform_draw(seed, kKind, static_cast<std::uint64_t>(i)) < params.junction_fraction;
    if (!junction) {
      node.kind = NodeKind::customer;
      node.prize = uniform(kPrize, static_cast<std::uint64_t>(i), params.prize_min,
                           params.prize_max);
      node.prob =
          uniform(kProb, static_cast<std::uint64_t>(i), params.prob_min, params.prob_max);
    }
  }

  std::ostringstream name;
  name << "gen-n" << node_count << "-s" << seed;
  return TreeInstance(name.str(), std::move(nodes));
}

}  // namespace pptp
