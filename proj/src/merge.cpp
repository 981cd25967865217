#include "pptp/merge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pptp {
namespace {

constexpr double kSlopeTie = 1e-12;

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " outside [0, 1]");
  }
}

// Reusable id-overlap detector (epoch-stamped, no clearing between calls)
// so the disjointness precondition costs O(ids) per merge.
class OverlapStamp {
 public:
  bool stamp(NodeId id) {
    const auto idx = static_cast<size_t>(id);
    if (idx >= marks_.size()) marks_.resize(idx + 1, 0);
    if (marks_[idx] == epoch_) return true;
    marks_[idx] = epoch_;
    return false;
  }
  void next_epoch() { ++epoch_; }

 private:
  std::vector<std::uint64_t> marks_;
  std::uint64_t epoch_ = 1;
};

thread_local OverlapStamp overlap_stamp;

}  // namespace

double virtual_bonus(double x, double committed_slope, double d_ref) {
  check_unit(committed_slope, "committed_slope");
  const double eps = kBreakpointTol * std::max(1.0, d_ref);
  if (x < -eps || x > d_ref + eps) {
    throw std::invalid_argument("bonus outside [0, d_ref]");
  }
  return d_ref - (d_ref - x) * (1.0 - committed_slope);
}

double entry_threshold(const ThresholdQuery& query) {
  check_unit(query.committed_slope, "committed_slope");
  const double remain = 1.0 - query.committed_slope;
  if (remain <= 0.0) return -std::numeric_limits<double>::infinity();
  return query.d_ref - (query.d_ref - query.entering_x_min) / remain;
}

Description merge(const Description& desc_b, const Description& desc_c,
                  MergeStats* stats) {
  const double d = desc_b.d_ref();
  if (std::abs(desc_c.d_ref() - d) > kBreakpointTol * std::max(1.0, d)) {
    throw std::invalid_argument("merge inputs disagree on d_ref");
  }
  overlap_stamp.next_epoch();
  for (const Description* desc : {&desc_b, &desc_c}) {
    for (const Record& r : desc->records()) {
      for (const NodeId id : r.delta) {
        if (overlap_stamp.stamp(id)) {
          throw std::invalid_argument("merge inputs share node " + std::to_string(id));
        }
      }
    }
  }

  const double eps = kBreakpointTol * std::max(1.0, d);
  const auto& rb = desc_b.records();
  const auto& rc = desc_c.records();
  struct Coord {
    std::size_t i, j;
  };
  std::vector<Record> out;
  std::vector<Coord> coords;
  out.reserve(rb.size() + rc.size());
  coords.reserve(rb.size() + rc.size());

  const auto joint = [&](std::size_t i, std::size_t j) {
    // Disjoint union: request probabilities compose, anchored profits add.
    const double slope = 1.0 - (1.0 - rb[i].slope) * (1.0 - rc[j].slope);
    return Record{{}, 0.0, d, slope, rb[i].q + rc[j].q};
  };

  std::size_t i = 0, j = 0, pushes = 1, pops = 0;
  out.push_back(joint(0, 0));
  coords.push_back({0, 0});

  while (i + 1 < rb.size() || j + 1 < rc.size()) {
    // Advance the side whose next record starts mattering first, measured
    // at the true bonus via the other side's committed slope.
    bool advance_b;
    if (i + 1 == rb.size()) {
      advance_b = false;
    } else if (j + 1 == rc.size()) {
      advance_b = true;
    } else {
      const double tb = entry_threshold({rb[i + 1].x_min, rc[j].slope, d});
      const double tc = entry_threshold({rc[j + 1].x_min, rb[i].slope, d});
      advance_b = tb <= tc;
    }
    if (advance_b) {
      ++i;
    } else {
      ++j;
    }

    Record cand = joint(i, j);
    // The candidate's set strictly contains every stacked set, so one
    // crossing against the top decides its entry point; pieces it covers
    // entirely are popped. q never decreases along the chain, hence the
    // crossing never lands beyond d_ref.
    while (true) {
      if (out.empty()) {
        cand.x_min = 0.0;
        break;
      }
      Record& top = out.back();
      double x;
      if (cand.slope - top.slope <= kSlopeTie) {
        x = -std::numeric_limits<double>::infinity();  // parallel, candidate covers
      } else {
        x = std::min(d, d - (cand.q - top.q) / (cand.slope - top.slope));
      }
      if (x <= top.x_min + eps) {
        out.pop_back();
        coords.pop_back();
        ++pops;
        continue;
      }
      top.x_max = x;
      cand.x_min = x;
      break;
    }
    out.push_back(std::move(cand));
    coords.push_back({i, j});
    ++pushes;
  }

  // Deltas were deferred so pops stay O(1): each surviving record receives
  // the input deltas its coordinates advanced past.
  std::size_t pi = 0, pj = 0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto& delta = out[k].delta;
    const std::size_t until_i = coords[k].i, until_j = coords[k].j;
    for (std::size_t ii = k == 0 ? 0 : pi + 1; ii <= until_i; ++ii) {
      delta.insert(delta.end(), rb[ii].delta.begin(), rb[ii].delta.end());
    }
    for (std::size_t jj = k == 0 ? 0 : pj + 1; jj <= until_j; ++jj) {
      delta.insert(delta.end(), rc[jj].delta.begin(), rc[jj].delta.end());
    }
    pi = until_i;
    pj = until_j;
  }

  if (stats) {
    stats->pushes = pushes;
    stats->pops = pops;
  }
  return Description(d, std::move(out));
}

}  // namespace pptp
