#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "pptp/envelope.hpp"
#include "test_support.hpp"

using namespace pptp;

namespace {

Node customer(double prize, double prob, double dist, NodeId id = 7) {
  Node n = test::customer_node(id, 0, 0.0, prize, prob);
  n.dist = dist;
  return n;
}

bool record_equals(const Record& r, std::vector<NodeId> delta, double x_min, double x_max,
                   double slope, double q) {
  std::vector<NodeId> ids = r.delta;
  std::sort(ids.begin(), ids.end());
  return ids == delta && r.x_min == x_min && r.x_max == x_max && r.slope == slope &&
         r.q == q;
}

}  // namespace

TEST_CASE("leaf description: the three base shapes") {
  Node j = test::junction_node(3, 0, 0.0);
  j.dist = 5.0;
  const Description junction = leaf_description(j);
  REQUIRE(junction.size() == 1);
  CHECK(record_equals(junction.record(0), {}, 0.0, 5.0, 0.0, 0.0));
  CHECK(junction.d_ref() == 5.0);

  // prize below dist: the customer pays off only past bonus dist - prize.
  const Description late = leaf_description(customer(2.0, 0.5, 4.0));
  REQUIRE(late.size() == 2);
  CHECK(record_equals(late.record(0), {}, 0.0, 2.0, 0.0, 0.0));
  CHECK(record_equals(late.record(1), {7}, 2.0, 4.0, 0.5, 1.0));

  // prize at least dist: worth committing for every bonus.
  const Description always = leaf_description(customer(6.0, 0.5, 4.0));
  REQUIRE(always.size() == 1);
  CHECK(record_equals(always.record(0), {7}, 0.0, 4.0, 0.5, 3.0));

  // dist 0 collapses the domain to a single point.
  const Description at_root = leaf_description(customer(6.0, 0.5, 0.0));
  REQUIRE(at_root.size() == 1);
  CHECK(record_equals(at_root.record(0), {7}, 0.0, 0.0, 0.5, 3.0));

  CHECK(validate_description(late).empty());
  CHECK(validate_description(always).empty());
  CHECK(validate_description(at_root).empty());
}

TEST_CASE("evaluate: values, sets, and the maximal-set rule at breakpoints") {
  const Description desc = leaf_description(customer(2.0, 0.5, 4.0));

  auto low = desc.evaluate(1.0);
  CHECK(low.value == 0.0);
  CHECK(low.set.empty());

  auto high = desc.evaluate(3.0);
  CHECK(high.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(high.set == std::vector<NodeId>{7});

  // Exactly on the breakpoint both pieces agree in value; the right piece
  // owns it, so the reported set is the maximal optimal one.
  auto corner = desc.evaluate(2.0);
  CHECK(corner.value == 0.0);
  CHECK(corner.set == std::vector<NodeId>{7});

  CHECK(desc.evaluate(4.0).value == 1.0);
  CHECK(desc.value_at(0.0) == 0.0);
  CHECK_THROWS_AS(desc.evaluate(4.5), std::out_of_range);
  CHECK_THROWS_AS(desc.evaluate(-0.5), std::out_of_range);

  const Description single = leaf_description(customer(6.0, 0.5, 4.0));
  CHECK(single.evaluate(0.0).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(single.evaluate(4.0).value == 3.0);
}

TEST_CASE("truncate_rebase keeps sets, re-anchors values") {
  const Description desc = leaf_description(customer(2.0, 0.5, 4.0));

  const Description to3 = truncate_rebase(desc, 3.0);
  CHECK(to3.d_ref() == 3.0);
  REQUIRE(to3.size() == 2);
  CHECK(record_equals(to3.record(0), {}, 0.0, 2.0, 0.0, 0.0));
  CHECK(record_equals(to3.record(1), {7}, 2.0, 3.0, 0.5, 0.5));

  const Description to1 = truncate_rebase(desc, 1.0);
  REQUIRE(to1.size() == 1);
  CHECK(record_equals(to1.record(0), {}, 0.0, 1.0, 0.0, 0.0));

  // Cutting exactly at the breakpoint leaves the just-entered set as a
  // single-point final range.
  const Description to2 = truncate_rebase(desc, 2.0);
  REQUIRE(to2.size() == 2);
  CHECK(record_equals(to2.record(1), {7}, 2.0, 2.0, 0.5, 0.0));
  CHECK(validate_description(to2).empty());

  const Description to0 = truncate_rebase(desc, 0.0);
  REQUIRE(to0.size() == 1);
  CHECK(to0.d_ref() == 0.0);
  CHECK(record_equals(to0.record(0), {}, 0.0, 0.0, 0.0, 0.0));

  const Description same = truncate_rebase(desc, 4.0);
  REQUIRE(same.size() == 2);
  CHECK(record_equals(same.record(1), {7}, 2.0, 4.0, 0.5, 1.0));

  CHECK_THROWS_AS(truncate_rebase(desc, 4.5), std::invalid_argument);
  CHECK_THROWS_AS(truncate_rebase(desc, -1.0), std::invalid_argument);

  // Truncation commutes with evaluation on the kept domain.
  for (const double cut : {0.7, 2.0, 3.3}) {
    const Description t = truncate_rebase(desc, cut);
    for (const double x : {0.0, 0.3, 0.69, cut * 0.99, cut}) {
      CHECK(test::close_rel(t.value_at(x), desc.value_at(x), 1e-12));
    }
  }
}

TEST_CASE("cumulative sets and covered nodes accumulate deltas in order") {
  const Description desc(10.0, {Record{{4, 2}, 0.0, 3.0, 0.2, 1.0},
                                Record{{9}, 3.0, 7.0, 0.5, 2.0},
                                Record{{1, 3}, 7.0, 10.0, 0.8, 3.5}});
  CHECK(desc.cumulative_set(0) == std::vector<NodeId>{2, 4});
  CHECK(desc.cumulative_set(1) == std::vector<NodeId>{2, 4, 9});
  CHECK(desc.cumulative_set(2) == std::vector<NodeId>{1, 2, 3, 4, 9});
  CHECK(desc.covered_nodes() == std::vector<NodeId>{1, 2, 3, 4, 9});
  CHECK_THROWS_AS(desc.cumulative_set(3), std::out_of_range);
}

TEST_CASE("validate_description flags each structural break") {
  const auto has = [](const std::vector<std::string>& v, const char* needle) {
    for (const auto& s : v) {
      if (s.find(needle) != std::string::npos) return true;
    }
    return false;
  };

  // A sound two-piece description as the baseline.
  const Description good(4.0, {Record{{}, 0.0, 2.0, 0.0, 0.0},
                               Record{{7}, 2.0, 4.0, 0.5, 1.0}});
  CHECK(validate_description(good).empty());

  const Description gap(4.0, {Record{{}, 0.0, 2.0, 0.0, 0.0},
                              Record{{7}, 2.5, 4.0, 0.5, 1.0}});
  CHECK(has(validate_description(gap), "does not continue"));

  const Description wrong_start(4.0, {Record{{7}, 1.0, 4.0, 0.5, 1.0}});
  CHECK(has(validate_description(wrong_start), "start at 0"));

  const Description short_end(4.0, {Record{{7}, 0.0, 3.0, 0.5, 1.0}});
  CHECK(has(validate_description(short_end), "end at d_ref"));

  const Description flat_slope(4.0, {Record{{}, 0.0, 2.0, 0.5, 0.0},
                                     Record{{7}, 2.0, 4.0, 0.5, 1.0}});
  CHECK(has(validate_description(flat_slope), "slope does not increase"));

  const Description jump(4.0, {Record{{}, 0.0, 2.0, 0.0, 0.0},
                               Record{{7}, 2.0, 4.0, 0.5, 2.0}});
  CHECK(has(validate_description(jump), "value jumps"));

  const Description dup(4.0, {Record{{7}, 0.0, 2.0, 0.3, 0.5},
                              Record{{7}, 2.0, 4.0, 0.6, 1.1}});
  CHECK(has(validate_description(dup), "more than one delta"));

  const Description empty_mid(4.0, {Record{{}, 0.0, 2.0, 0.0, 0.0},
                                    Record{{7}, 2.0, 2.0, 0.5, 0.0},
                                    Record{{8}, 2.0, 4.0, 0.8, 1.2}});
  CHECK(has(validate_description(empty_mid), "single point"));

  const Description negative(4.0, {Record{{7}, 0.0, 4.0, 0.5, -1.0}});
  CHECK(has(validate_description(negative), "negative at bonus 0"));

  const Description bare_delta(4.0, {Record{{}, 0.0, 2.0, 0.0, 0.0},
                                     Record{{}, 2.0, 4.0, 0.5, 1.0}});
  CHECK(has(validate_description(bare_delta), "no added nodes"));

  CHECK_THROWS_AS(Description(4.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(Description(-1.0, {Record{{}, 0.0, 0.0, 0.0, 0.0}}),
                  std::invalid_argument);
}

TEST_CASE("instance-aware validation recomputes slopes from the sets") {
  const TreeInstance inst = test::star_instance({{4, 6, 0.5}, {6, 5, 0.25}});

  const Description good(4.0, {Record{{}, 0.0, 1.0, 0.0, 0.0},
                               Record{{1}, 1.0, 3.0, 0.5, 1.5},
                               Record{{2}, 3.0, 4.0, 0.625, 1.625}});
  CHECK(validate_description(good, inst).empty());

  const Description bad_slope(4.0, {Record{{1}, 0.0, 4.0, 0.4, 0.0}});
  CHECK_FALSE(validate_description(bad_slope, inst).empty());

  const Description junction_member(4.0, {Record{{0}, 0.0, 4.0, 0.5, 1.0}});
  CHECK_FALSE(validate_description(junction_member, inst).empty());

  const Description stranger(4.0, {Record{{11}, 0.0, 4.0, 0.5, 1.0}});
  CHECK_FALSE(validate_description(stranger, inst).empty());
}

TEST_CASE("leaf envelopes match the subset reference pointwise") {
  const TreeInstance inst = test::star_instance({{4, 2, 0.5}});
  const auto lines = test::subset_lines(inst, 1);
  const Description desc = leaf_description(inst.node(1));
  for (int g = 0; g <= 100; ++g) {
    const double x = 4.0 * g / 100;
    CHECK(test::close_rel(desc.value_at(x), test::subset_max(lines, x), 1e-12));
  }
}

TEST_CASE("TSV export is stable") {
  const Description desc = leaf_description(customer(2.0, 0.5, 4.0, 3));
  std::ostringstream out;
  write_envelope_tsv(out, desc);
  CHECK(out.str() ==
        "d_ref=4\n"
        "0\t2\t0\t0\t\n"
        "2\t4\t0.5\t1\t3\n");
}
