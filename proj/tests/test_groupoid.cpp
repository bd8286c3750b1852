#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kmslab/errors.hpp"
#include "kmslab/groupoid.hpp"
#include "suite.hpp"

#include <random>
#include <set>

using namespace kmslab;
using namespace kmslab::testsuite;

namespace {

// pair groupoid on {x, y}: unit arrows x, y plus g: x -> y and its inverse
RawGroupoid pair_groupoid_raw() {
  RawGroupoid raw;
  raw.units = {"x", "y"};
  raw.arrows = {{"x", "x", "x", "x"},
                {"y", "y", "y", "y"},
                {"g", "x", "y", "h"},
                {"h", "y", "x", "g"}};
  // unit and inverse composites are implied; nothing else is composable
  return raw;
}

} // namespace

TEST_CASE("pair groupoid validates with trivial isotropy") {
  FiniteGroupoid g = validate_groupoid(pair_groupoid_raw());
  CHECK(g.unit_count() == 2);
  CHECK(g.arrow_count() == 4);
  for (int u = 0; u < 2; ++u) CHECK(isotropy_group(g, u).order() == 1);
  CHECK(orbits(g).size() == 1);
}

TEST_CASE("a group is a one-unit groupoid") {
  RawGroupoid raw;
  raw.units = {"e"};
  raw.arrows = {{"e", "e", "e", "e"}, {"s", "e", "e", "s"}};
  raw.compose = {{"s", "s", "e"}};
  FiniteGroupoid g = validate_groupoid(raw);
  CHECK(g.arrow_count() == 2);
  FiniteGroup iso = isotropy_group(g, 0);
  CHECK(iso.order() == 2);
  CHECK(iso.inverse[iso.element_index("s")] == iso.element_index("s"));
}

TEST_CASE("missing composite is rejected") {
  RawGroupoid raw;
  raw.units = {"x"};
  raw.arrows = {{"x", "x", "x", "x"}, {"a", "x", "x", "b"}, {"b", "x", "x", "a"}};
  // (a, a) is composable but its composite is never given
  CHECK_THROWS_AS(validate_groupoid(raw), MissingComposite);
}

TEST_CASE("conflicting composites are rejected") {
  RawGroupoid raw;
  raw.units = {"x"};
  raw.arrows = {{"x", "x", "x", "x"}, {"a", "x", "x", "a"}};
  raw.compose = {{"a", "a", "a"}}; // conflicts with the inverse law a*a = x
  CHECK_THROWS_AS(validate_groupoid(raw), MalformedGroupoid);
}

TEST_CASE("transformation groupoid of the swap action") {
  FiniteGroup z2 = cyclic_group(2);
  FiniteGroupoid g = transformation_groupoid({"1", "2"}, z2, {0, 1, 1, 0});
  CHECK(g.arrow_count() == 4);
  CHECK(orbits(g).size() == 1);
  for (int u = 0; u < 2; ++u) CHECK(isotropy_group(g, u).order() == 1);
}

TEST_CASE("transformation groupoid of the trivial action") {
  FiniteGroup z2 = cyclic_group(2);
  FiniteGroupoid g = transformation_groupoid({"pt"}, z2, {0, 0});
  CHECK(g.arrow_count() == 2);
  CHECK(isotropy_group(g, 0).order() == 2);
}

TEST_CASE("S3 acting naturally: stabilizers have order 2") {
  FiniteGroup s3 = symmetric3();
  std::vector<std::vector<int>> perms = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                         {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<int> action(18);
  for (int gi = 0; gi < 6; ++gi)
    for (int x = 0; x < 3; ++x) action[gi * 3 + x] = perms[gi][x];
  FiniteGroupoid g = transformation_groupoid({"1", "2", "3"}, s3, action);
  CHECK(g.arrow_count() == 18);
  CHECK(orbits(g).size() == 1);
  // brute-force stabilizer of point 0 from the action table
  int stab = 0;
  for (int gi = 0; gi < 6; ++gi)
    if (action[gi * 3 + 0] == 0) ++stab;
  CHECK(stab == 2);
  CHECK(isotropy_group(g, 0).order() == 2);
}

TEST_CASE("invalid action is rejected") {
  FiniteGroup z2 = cyclic_group(2);
  // "swap" that is not compatible with the group law: g1 acts as a 2-cycle
  // on 3 points in a way that breaks g1*g1 = e
  CHECK_THROWS_AS(transformation_groupoid({"1", "2", "3"}, z2, {0, 1, 2, 1, 2, 0}), NotAnAction);
}

TEST_CASE("orbits examples") {
  FiniteGroup z2 = cyclic_group(2);
  SUBCASE("pair groupoid has one orbit") {
    FiniteGroupoid g = validate_groupoid(pair_groupoid_raw());
    CHECK(orbits(g) == std::vector<std::vector<int>>{{0, 1}});
  }
  SUBCASE("disjoint one-unit groups have singleton orbits") {
    RawGroupoid raw;
    raw.units = {"u", "v"};
    raw.arrows = {{"u", "u", "u", "u"}, {"v", "v", "v", "v"}};
    FiniteGroupoid g = validate_groupoid(raw);
    CHECK(orbits(g).size() == 2);
  }
  SUBCASE("swap plus fixed point") {
    FiniteGroupoid g = transformation_groupoid({"1", "2", "3"}, z2, {0, 1, 2, 1, 0, 2});
    auto blocks = orbits(g);
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0] == std::vector<int>{0, 1});
    CHECK(blocks[1] == std::vector<int>{2});
  }
}

TEST_CASE("cocycle validation") {
  SUBCASE("pair groupoid potential cocycle") {
    FiniteGroupoid g = validate_groupoid(pair_groupoid_raw());
    std::map<std::string, std::int64_t> values{{"x", 0}, {"y", 0}, {"g", 1}, {"h", -1}};
    Cocycle c = validate_cocycle(g, values);
    CHECK(c(g.arrow_index("g")) == 1);
  }
  SUBCASE("torsion obstruction on Z/2") {
    RawGroupoid raw;
    raw.units = {"e"};
    raw.arrows = {{"e", "e", "e", "e"}, {"s", "e", "e", "s"}};
    raw.compose = {{"s", "s", "e"}};
    FiniteGroupoid g = validate_groupoid(raw);
    std::map<std::string, std::int64_t> values{{"e", 0}, {"s", 1}};
    CHECK_THROWS_AS(validate_cocycle(g, values), NotACocycle);
  }
  SUBCASE("swap transformation groupoid carries c(s,1)=1, c(s,2)=-1") {
    FiniteGroup z2 = cyclic_group(2);
    FiniteGroupoid g = transformation_groupoid({"1", "2"}, z2, {0, 1, 1, 0});
    std::map<std::string, std::int64_t> values{
        {"1", 0}, {"2", 0}, {"(g1,1)", 1}, {"(g1,2)", -1}};
    Cocycle c = validate_cocycle(g, values);
    CHECK(c(g.arrow_index("(g1,2)")) == -1);
  }
}

TEST_CASE("cocycles vanish on isotropy and admit potentials across the suite") {
  auto suite = make_suite(20260809);
  for (const auto &inst : suite) {
    for (const auto &c : inst.cocycles) {
      for (int a = 0; a < inst.groupoid.arrow_count(); ++a)
        if (inst.groupoid.is_isotropy(a)) CHECK(c(a) == 0);
      auto p = cocycle_potential(inst.groupoid, c);
      for (int a = 0; a < inst.groupoid.arrow_count(); ++a)
        CHECK(p[inst.groupoid.tgt[a]] - p[inst.groupoid.src[a]] == c(a));
      // potential vanishes at the least unit of each orbit
      for (const auto &block : orbits(inst.groupoid)) CHECK(p[block.front()] == 0);
    }
  }
}

TEST_CASE("orbit partition matches source-range reachability") {
  auto suite = make_suite(7);
  for (const auto &inst : suite) {
    auto blocks = orbits(inst.groupoid);
    std::set<int> seen;
    for (const auto &block : blocks)
      for (int u : block) CHECK(seen.insert(u).second);
    CHECK(static_cast<int>(seen.size()) == inst.groupoid.unit_count());
    for (int a = 0; a < inst.groupoid.arrow_count(); ++a) {
      int bs = -1, bt = -1;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (std::binary_search(blocks[i].begin(), blocks[i].end(), inst.groupoid.src[a]))
          bs = static_cast<int>(i);
        if (std::binary_search(blocks[i].begin(), blocks[i].end(), inst.groupoid.tgt[a]))
          bt = static_cast<int>(i);
      }
      CHECK(bs == bt);
    }
  }
}

TEST_CASE("isotropy groups satisfy the group axioms") {
  auto suite = make_suite(3);
  for (const auto &inst : suite)
    for (int u = 0; u < inst.groupoid.unit_count(); ++u) {
      FiniteGroup iso = isotropy_group(inst.groupoid, u); // validate_group throws on violation
      CHECK(iso.order() >= 1);
    }
}

TEST_CASE("unknown unit raises") {
  FiniteGroupoid g = validate_groupoid(pair_groupoid_raw());
  CHECK_THROWS_AS(isotropy_group(g, 5), UnknownUnit);
}
