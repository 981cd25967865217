#include "pptp/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace pptp {
namespace {

double breakpoint_eps(double d_ref) { return kBreakpointTol * std::max(1.0, d_ref); }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

Description::Description(double d_ref, std::vector<Record> records)
    : d_ref_(d_ref), records_(std::move(records)) {
  if (!(d_ref_ >= 0.0)) throw std::invalid_argument("d_ref must be non-negative");
  if (records_.empty()) throw std::invalid_argument("description needs at least one record");
}

std::size_t Description::piece_index(double x) const {
  const double eps = breakpoint_eps(d_ref_);
  if (x < -eps || x > d_ref_ + eps) {
    throw std::out_of_range("bonus " + fmt(x) + " outside [0, " + fmt(d_ref_) + "]");
  }
  x = std::clamp(x, 0.0, d_ref_);
  // Rightmost record whose x_min is <= x; x_min values strictly increase.
  std::size_t lo = 0, hi = records_.size();
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (records_[mid].x_min <= x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double Description::value_at(double x) const {
  const Record& r = records_[piece_index(x)];
  return r.q - (d_ref_ - std::clamp(x, 0.0, d_ref_)) * r.slope;
}

Description::Evaluation Description::evaluate(double x) const {
  const std::size_t i = piece_index(x);
  const Record& r = records_[i];
  return {r.q - (d_ref_ - std::clamp(x, 0.0, d_ref_)) * r.slope, cumulative_set(i)};
}

std::vector<NodeId> Description::cumulative_set(std::size_t i) const {
  if (i >= records_.size()) throw std::out_of_range("record index out of range");
  std::vector<NodeId> set;
  for (std::size_t j = 0; j <= i; ++j) {
    set.insert(set.end(), records_[j].delta.begin(), records_[j].delta.end());
  }
  std::sort(set.begin(), set.end());
  return set;
}

std::vector<NodeId> Description::covered_nodes() const {
  return cumulative_set(records_.size() - 1);
}

Description leaf_description(const Node& v) {
  const double d = v.dist;
  if (!v.is_customer()) {
    return Description(d, {Record{{}, 0.0, d, 0.0, 0.0}});
  }
  const double value = v.prize * v.prob;
  if (v.prize >= d) {
    return Description(d, {Record{{v.id}, 0.0, d, v.prob, value}});
  }
  return Description(d, {Record{{}, 0.0, d - v.prize, 0.0, 0.0},
                         Record{{v.id}, d - v.prize, d, v.prob, value}});
}

Description truncate_rebase(const Description& desc, double new_d_ref) {
  const double eps = breakpoint_eps(desc.d_ref());
  if (new_d_ref < -eps || new_d_ref > desc.d_ref() + eps) {
    throw std::invalid_argument("new_d_ref " + fmt(new_d_ref) + " outside [0, " +
                                fmt(desc.d_ref()) + "]");
  }
  new_d_ref = std::clamp(new_d_ref, 0.0, desc.d_ref());
  const std::size_t cut = desc.piece_index(new_d_ref);
  const double shift = desc.d_ref() - new_d_ref;
  std::vector<Record> kept(desc.records().begin(),
                           desc.records().begin() + static_cast<std::ptrdiff_t>(cut) + 1);
  for (Record& r : kept) r.q -= shift * r.slope;
  kept.back().x_max = new_d_ref;
  return Description(new_d_ref, std::move(kept));
}

std::vector<std::string> validate_description(const Description& desc) {
  std::vector<std::string> bad;
  const double d = desc.d_ref();
  const double eps = breakpoint_eps(d);
  const auto& recs = desc.records();

  if (std::abs(recs.front().x_min) > eps) bad.push_back("first record does not start at 0");
  if (std::abs(recs.back().x_max - d) > eps) bad.push_back("last record does not end at d_ref");

  for (std::size_t i = 0; i < recs.size(); ++i) {
    const Record& r = recs[i];
    const std::string at = "record " + std::to_string(i) + ": ";
    const bool last = i + 1 == recs.size();
    if (r.x_max < r.x_min - eps || (!last && !(r.x_max > r.x_min + eps))) {
      bad.push_back(at + "empty range (only the final record may be a single point)");
    }
    if (!(r.slope >= -eps && r.slope <= 1.0 + eps)) {
      bad.push_back(at + "slope outside [0, 1]");
    }
    if (i > 0) {
      const Record& prev = recs[i - 1];
      if (std::abs(r.x_min - prev.x_max) > eps) {
        bad.push_back(at + "range does not continue the previous record");
      }
      if (!(r.slope > prev.slope)) bad.push_back(at + "slope does not increase");
      if (r.delta.empty()) bad.push_back(at + "no added nodes");
      // Shared-breakpoint agreement: both pieces price the boundary equally.
      const double left = prev.q - (d - r.x_min) * prev.slope;
      const double right = r.q - (d - r.x_min) * r.slope;
      const double scale = std::max({1.0, std::abs(left), std::abs(right)});
      if (std::abs(left - right) > 1e-9 * scale) {
        bad.push_back(at + "value jumps at the left breakpoint");
      }
    }
  }

  const auto all = desc.covered_nodes();
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    bad.push_back("a node appears in more than one delta");
  }
  if (desc.size() > all.size() + 1) {
    bad.push_back("more records than covered nodes + 1");
  }

  // The empty set's zero line is always a candidate, so the envelope never
  // dips below it.
  const Record& first = recs.front();
  const double at0 = first.q - d * first.slope;
  if (at0 < -1e-9 * std::max(1.0, std::abs(first.q))) {
    bad.push_back("envelope negative at bonus 0");
  }
  return bad;
}

std::vector<std::string> validate_description(const Description& desc,
                                              const TreeInstance& instance) {
  std::vector<std::string> bad = validate_description(desc);
  std::vector<char> seen(static_cast<size_t>(instance.size()), 0);
  double none = 1.0;
  for (std::size_t i = 0; i < desc.size(); ++i) {
    const Record& r = desc.record(i);
    const std::string at = "record " + std::to_string(i) + ": ";
    for (const NodeId id : r.delta) {
      if (id < 0 || id >= instance.size()) {
        bad.push_back(at + "node " + std::to_string(id) + " out of range");
        continue;
      }
      if (!instance.node(id).is_customer()) {
        bad.push_back(at + "node " + std::to_string(id) + " is not a customer");
        continue;
      }
      if (seen[static_cast<size_t>(id)]) continue;  // already reported as duplicate
      seen[static_cast<size_t>(id)] = 1;
      none *= 1.0 - instance.node(id).prob;
    }
    if (std::abs(r.slope - (1.0 - none)) > 1e-12) {
      bad.push_back(at + "slope differs from the set's request probability");
    }
  }
  return bad;
}

void write_envelope_tsv(std::ostream& out, const Description& desc) {
  out << "d_ref=" << fmt(desc.d_ref()) << "\n";
  for (const Record& r : desc.records()) {
    out << fmt(r.x_min) << '\t' << fmt(r.x_max) << '\t' << fmt(r.slope) << '\t'
        << fmt(r.q) << '\t';
    std::vector<NodeId> ids = r.delta;
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) out << ',';
      out << ids[i];
    }
    out << "\n";
  }
}

}  // namespace pptp
