#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kmslab/errors.hpp"
#include "kmslab/group_traces.hpp"
#include "suite.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace kmslab;
using namespace kmslab::testsuite;

TEST_CASE("conjugacy classes") {
  SUBCASE("Z/2 has singleton classes") {
    auto cls = conjugacy_classes(cyclic_group(2));
    CHECK(cls.classes.size() == 2);
  }
  SUBCASE("abelian groups have all singletons") {
    auto cls = conjugacy_classes(klein_group());
    CHECK(cls.classes.size() == 4);
    for (const auto &c : cls.classes) CHECK(c.size() == 1);
  }
  SUBCASE("S3 has classes of sizes 1, 3, 2") {
    auto cls = conjugacy_classes(symmetric3());
    std::vector<std::size_t> sizes;
    for (const auto &c : cls.classes) sizes.push_back(c.size());
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{1, 2, 3});
  }
}

TEST_CASE("character tables of small groups") {
  SUBCASE("Z/2: rows (1,1) and (1,-1)") {
    CharacterTable t = character_table(cyclic_group(2));
    REQUIRE(t.exact);
    REQUIRE(t.rows.size() == 2);
    bool found_trivial = false, found_sign = false;
    for (const auto &row : t.rows) {
      if (row[0] == Cyclotomic(1) && row[1] == Cyclotomic(1)) found_trivial = true;
      if (row[0] == Cyclotomic(1) && row[1] == Cyclotomic(-1)) found_sign = true;
    }
    CHECK(found_trivial);
    CHECK(found_sign);
  }
  SUBCASE("Z/4: chi_k(m) = i^{km}") {
    CharacterTable t = character_table(cyclic_group(4));
    REQUIRE(t.exact);
    REQUIRE(t.rows.size() == 4);
    // columns are indexed by classes {g0},{g1},{g2},{g3} in element order
    auto cls = conjugacy_classes(cyclic_group(4));
    Cyclotomic i4 = Cyclotomic::i();
    // each power of i must appear as the value of exactly one character at g1
    for (long k = 0; k < 4; ++k) {
      Cyclotomic expect(1);
      for (long rep = 0; rep < k; ++rep) expect *= i4;
      int hits = 0;
      for (const auto &row : t.rows)
        if (row[cls.class_of[1]] == expect) ++hits;
      CHECK(hits == 1);
    }
  }
  SUBCASE("S3: rows (1,1,1), (1,-1,1), (2,0,-1)") {
    FiniteGroup s3 = symmetric3();
    CharacterTable t = character_table(s3);
    REQUIRE(t.exact);
    REQUIRE(t.rows.size() == 3);
    auto cls = conjugacy_classes(s3);
    // identify the class of transpositions (size 3) and of 3-cycles (size 2)
    int c_e = cls.identity_class, c_t = -1, c_r = -1;
    for (std::size_t i = 0; i < cls.classes.size(); ++i) {
      if (cls.classes[i].size() == 3) c_t = static_cast<int>(i);
      if (cls.classes[i].size() == 2) c_r = static_cast<int>(i);
    }
    std::set<std::vector<std::string>> rows;
    for (const auto &row : t.rows)
      rows.insert({row[c_e].to_string(), row[c_t].to_string(), row[c_r].to_string()});
    CHECK(rows.count({"1", "1", "1"}) == 1);
    CHECK(rows.count({"1", "-1", "1"}) == 1);
    CHECK(rows.count({"2", "0", "-1"}) == 1);
  }
}

TEST_CASE("orthogonality and dimension law for the named groups") {
  // character_table re-verifies both orthogonality relations exactly on
  // every exact table and throws otherwise; D4 and Q8 exercise the
  // nonabelian snap path
  std::vector<FiniteGroup> groups = {cyclic_group(2), cyclic_group(3),     cyclic_group(4),
                                     klein_group(),   symmetric3(),        dihedral4(),
                                     quaternion8()};
  for (const auto &g : groups) {
    CharacterTable t = character_table(g);
    CHECK(t.exact);
    long dim_sum = 0;
    for (long d : t.dimensions) dim_sum += d * d;
    CHECK(dim_sum == g.order());
  }
}

TEST_CASE("extreme tracial states") {
  SUBCASE("Z/2 has the two characters") {
    FiniteGroup g = cyclic_group(2);
    auto ext = tracial_extreme_points(g, character_table(g));
    CHECK(ext.size() == 2);
  }
  SUBCASE("trivial group has a single point") {
    FiniteGroup g = trivial_group();
    auto ext = tracial_extreme_points(g, character_table(g));
    CHECK(ext.size() == 1);
    CHECK(ext[0].phi.values[0] == Cyclotomic(1));
  }
  SUBCASE("S3 normalizes the 2-dimensional character to (1, 0, -1/2)") {
    FiniteGroup g = symmetric3();
    CharacterTable t = character_table(g);
    auto ext = tracial_extreme_points(g, t);
    REQUIRE(ext.size() == 3);
    auto cls = conjugacy_classes(g);
    int c_r = -1;
    for (std::size_t i = 0; i < cls.classes.size(); ++i)
      if (cls.classes[i].size() == 2) c_r = static_cast<int>(i);
    bool found = false;
    for (const auto &state : ext)
      if (state.phi.values[c_r] == Cyclotomic(Rational(-1, 2))) found = true;
    CHECK(found);
  }
  SUBCASE("abelian groups have |G| extreme traces") {
    for (int n : {2, 3, 4, 5, 6}) {
      FiniteGroup g = cyclic_group(n);
      CHECK(tracial_extreme_points(g, character_table(g)).size() == static_cast<std::size_t>(n));
    }
  }
}

TEST_CASE("is_tracial_state examples") {
  FiniteGroup g = cyclic_group(2);
  auto cls = conjugacy_classes(g);
  SUBCASE("canonical trace") {
    ClassFunction phi;
    phi.values.assign(2, Cyclotomic(0));
    phi.values[cls.identity_class] = Cyclotomic(1);
    CHECK(is_tracial_state(g, phi).tracial);
  }
  SUBCASE("phi(s) = 2 fails positivity") {
    ClassFunction phi;
    phi.values.assign(2, Cyclotomic(2));
    phi.values[cls.identity_class] = Cyclotomic(1);
    auto check = is_tracial_state(g, phi);
    CHECK_FALSE(check.tracial);
    CHECK_FALSE(check.witness.empty());
  }
  SUBCASE("uniform mixture of normalized characters is the canonical trace on S3") {
    FiniteGroup s3 = symmetric3();
    CharacterTable t = character_table(s3);
    auto scls = conjugacy_classes(s3);
    ClassFunction mix;
    mix.values.assign(scls.classes.size(), Cyclotomic(0));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      Cyclotomic coeff(Rational(t.dimensions[i] * t.dimensions[i], s3.order()));
      for (std::size_t c = 0; c < mix.values.size(); ++c)
        mix.values[c] += coeff * t.rows[i][c] / Cyclotomic(Rational(t.dimensions[i]));
    }
    for (std::size_t c = 0; c < mix.values.size(); ++c) {
      Cyclotomic expect(c == static_cast<std::size_t>(scls.identity_class) ? 1 : 0);
      CHECK(mix.values[c] == expect);
    }
    CHECK(is_tracial_state(s3, mix).tracial);
  }
}

TEST_CASE("canonical trace decomposition is d_i^2/|G| exactly") {
  for (const auto &g : {cyclic_group(2), cyclic_group(3), cyclic_group(4), klein_group(),
                        cyclic_group(5), cyclic_group(6), symmetric3(), dihedral4(), quaternion8(),
                        cyclic_group(12)}) {
    CharacterTable t = character_table(g);
    auto cls = conjugacy_classes(g);
    ClassFunction canon;
    canon.values.assign(cls.classes.size(), Cyclotomic(0));
    canon.values[cls.identity_class] = Cyclotomic(1);
    auto lambda = trace_barycentric(g, t, canon);
    for (std::size_t i = 0; i < lambda.size(); ++i)
      CHECK(lambda[i] == Cyclotomic(Rational(t.dimensions[i] * t.dimensions[i], g.order())));
  }
}

TEST_CASE("random tracial states decompose uniquely in the extreme basis") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> num(0, 4);
  for (const auto &g : {cyclic_group(3), klein_group(), symmetric3(), dihedral4()}) {
    CharacterTable t = character_table(g);
    auto ext = tracial_extreme_points(g, t);
    for (int rep = 0; rep < 5; ++rep) {
      // random rational convex combination
      std::vector<Rational> coeff(ext.size());
      Rational total(0);
      for (auto &x : coeff) {
        x = Rational(num(rng) + 1);
        total += x;
      }
      for (auto &x : coeff) x /= total;
      ClassFunction phi;
      phi.values.assign(t.classes.classes.size(), Cyclotomic(0));
      for (std::size_t i = 0; i < ext.size(); ++i)
        for (std::size_t c = 0; c < phi.values.size(); ++c)
          phi.values[c] += Cyclotomic(coeff[i]) * ext[i].phi.values[c];
      CHECK(is_tracial_state(g, phi).tracial);
      auto lambda = trace_barycentric(g, t, phi);
      Cyclotomic sum(0);
      for (std::size_t i = 0; i < lambda.size(); ++i) {
        CHECK(lambda[i] == Cyclotomic(coeff[i]));
        sum += lambda[i];
      }
      CHECK(sum == Cyclotomic(1));
    }
  }
}

TEST_CASE("traciality is preserved under group automorphisms") {
  // x -> x^3 generates Aut(Z/4); conjugation by a transposition on S3
  SUBCASE("Z/4 inversion-like automorphism") {
    FiniteGroup g = cyclic_group(4);
    auto cls = conjugacy_classes(g);
    auto ext = tracial_extreme_points(g, character_table(g));
    for (const auto &state : ext) {
      ClassFunction pulled;
      pulled.values.assign(4, Cyclotomic(0));
      for (int x = 0; x < 4; ++x) {
        int image = (3 * x) % 4;
        pulled.values[cls.class_of[x]] = state.phi.values[cls.class_of[image]];
      }
      CHECK(is_tracial_state(g, pulled).tracial);
    }
  }
  SUBCASE("S3 inner automorphism") {
    FiniteGroup g = symmetric3();
    auto cls = conjugacy_classes(g);
    int h = 1; // some transposition
    auto ext = tracial_extreme_points(g, character_table(g));
    for (const auto &state : ext) {
      ClassFunction pulled;
      pulled.values.assign(cls.classes.size(), Cyclotomic(0));
      for (int x = 0; x < g.order(); ++x) {
        int image = g.op(g.op(h, x), g.inverse[h]);
        pulled.values[cls.class_of[x]] = state.phi.values[cls.class_of[image]];
      }
      CHECK(is_tracial_state(g, pulled).tracial);
      // inner automorphisms fix class functions outright
      for (std::size_t c = 0; c < pulled.values.size(); ++c)
        CHECK(pulled.values[c] == state.phi.values[c]);
    }
  }
}

TEST_CASE("abelian invariant factors are canonical") {
  CHECK(abelian_decomposition(cyclic_group(6)).factors == std::vector<long>{6});
  CHECK(abelian_decomposition(klein_group()).factors == std::vector<long>{2, 2});
  CHECK(abelian_decomposition(trivial_group()).factors.empty());
  CHECK_THROWS_AS(abelian_decomposition(symmetric3()), NonAbelian);
}
