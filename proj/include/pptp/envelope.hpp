#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "pptp/instance.hpp"

namespace pptp {

// Scale factor for breakpoint comparisons: two bonus values within
// kBreakpointTol * max(1, d_ref) of each other count as the same point.
inline constexpr double kBreakpointTol = 1e-12;

// One linear piece of a group's profit envelope over the bonus axis.
//
// The piece's node set S is maximal optimal at x_min, the unique optimal
// set strictly inside (x_min, x_max), and minimal optimal at x_max. The
// minimal optimal set AT x_min is therefore the previous record's set.
// `slope` is the probability that at least one node of S requests; `q` is
// the expected profit of S anchored at the full bonus d_ref, so the piece's
// value at bonus x is q - (d_ref - x) * slope.
//
// `delta` lists only the nodes added on top of the previous record's set
// (sets along a description are nested); the first record carries its whole
// set. Order within delta is unspecified.
struct Record {
  std::vector<NodeId> delta;
  double x_min = 0.0;
  double x_max = 0.0;
  double slope = 0.0;
  double q = 0.0;
};

// Piecewise-linear upper envelope of the profit lines of a group's
// candidate node sets, over bonus in [0, d_ref]. Immutable after
// construction. Structural expectations (checkable via
// validate_description): records tile [0, d_ref] with strictly increasing
// breakpoints, slopes strictly increase, adjacent pieces agree at shared
// breakpoints, deltas are disjoint, and at most the final record may be a
// single point. d_ref = 0 collapses the whole description to one record.
class Description {
 public:
  Description(double d_ref, std::vector<Record> records);

  double d_ref() const { return d_ref_; }
  std::size_t size() const { return records_.size(); }
  const Record& record(std::size_t i) const { return records_[i]; }
  const std::vector<Record>& records() const { return records_; }

  // Index of the piece owning bonus x; at a shared breakpoint the right
  // piece wins, so the reported set is the maximal optimal one.
  std::size_t piece_index(double x) const;

  // Value of the envelope at x, without materializing the set.
  double value_at(double x) const;

  struct Evaluation {
    double value = 0.0;
    std::vector<NodeId> set;  // sorted
  };
  Evaluation evaluate(double x) const;

  // Union of deltas 0..i, sorted: the piece's full node set.
  std::vector<NodeId> cumulative_set(std::size_t i) const;

  // All nodes the description ranges over, sorted.
  std::vector<NodeId> covered_nodes() const;

 private:
  double d_ref_ = 0.0;
  std::vector<Record> records_;
};

// Envelope of a single node over [0, dist]: a junction contributes only the
// empty set's zero line; a customer's set {v} enters at bonus dist - prize
// (immediately if prize >= dist).
Description leaf_description(const Node& v);

// Restricts desc to [0, new_d_ref] and re-anchors every kept q to the new
// reference. Kept sets and slopes are unchanged; the cut piece may become a
// single point when new_d_ref lands exactly on its left breakpoint.
Description truncate_rebase(const Description& desc, double new_d_ref);

// Structural violations, empty when sound. The instance overload also
// checks membership (customers of this instance only, no repeats) and that
// every slope equals the request probability of its cumulative set.
std::vector<std::string> validate_description(const Description& desc);
std::vector<std::string> validate_description(const Description& desc,
                                              const TreeInstance& instance);

// One record per line: x_min, x_max, slope, q, comma-separated delta ids;
// preceded by a "d_ref=<value>" header.
void write_envelope_tsv(std::ostream& out, const Description& desc);

}  // namespace pptp
