#pragma once

#include <cstddef>

#include "pptp/envelope.hpp"

namespace pptp {

// Bonus seen by a group after a disjoint committed set with request
// probability committed_slope takes responsibility for its share of the
// common root path: d_ref - (d_ref - x) * (1 - committed_slope).
// Result lies in [x, d_ref].
double virtual_bonus(double x, double committed_slope, double d_ref);

struct ThresholdQuery {
  double entering_x_min = 0.0;   // left breakpoint of the entering record
  double committed_slope = 0.0;  // request probability of the other side's set
  double d_ref = 0.0;
};

// Least bonus x at which the entering record becomes active in its own
// description once the committed set inflates x to its virtual bonus:
// d_ref - (d_ref - entering_x_min) / (1 - committed_slope). May be
// negative (the entering set is active from bonus 0 on); committed_slope
// of 1 gives -infinity. Always <= entering_x_min.
double entry_threshold(const ThresholdQuery& query);

struct MergeStats {
  std::size_t pushes = 0;
  std::size_t pops = 0;  // never exceeds pushes
};

// Upper envelope of the union group of two disjoint groups over a shared
// [0, d_ref]. Walks both record chains in entry-threshold order and keeps a
// stack of surviving pieces, so the work is O(#records) amortized plus the
// size of the output sets.
Description merge(const Description& desc_b, const Description& desc_c,
                  MergeStats* stats = nullptr);

}  // namespace pptp
