#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kmslab/algebra.hpp"
#include "kmslab/errors.hpp"
#include "suite.hpp"

#include <cmath>
#include <random>

using namespace kmslab;
using namespace kmslab::testsuite;

namespace {

FiniteGroupoid pair_groupoid() {
  RawGroupoid raw;
  raw.units = {"x", "y"};
  raw.arrows = {{"x", "x", "x", "x"},
                {"y", "y", "y", "y"},
                {"g", "x", "y", "h"},
                {"h", "y", "x", "g"}};
  return validate_groupoid(raw);
}

FiniteGroupoid one_unit_z2() {
  RawGroupoid raw;
  raw.units = {"e"};
  raw.arrows = {{"e", "e", "e", "e"}, {"s", "e", "e", "s"}};
  raw.compose = {{"s", "s", "e"}};
  return validate_groupoid(raw);
}

ExactElement random_element(const FiniteGroupoid &g, std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> num(-3, 3);
  ExactElement f;
  f.groupoid = &g;
  for (int a = 0; a < g.arrow_count(); ++a) {
    Cyclotomic v = Cyclotomic::from_complex_rational(Rational(num(rng)), Rational(num(rng), 2));
    if (!v.is_zero()) f.coeffs[a] = v;
  }
  return f;
}

} // namespace

TEST_CASE("convolution on basis elements") {
  FiniteGroupoid g = pair_groupoid();
  int ag = g.arrow_index("g"), ah = g.arrow_index("h");
  int ux = g.arrow_index("x"), uy = g.arrow_index("y");

  SUBCASE("composable pair gives the composite delta") {
    auto f = convolve(ExactElement::delta(g, ag), ExactElement::delta(g, ah));
    CHECK(f == ExactElement::delta(g, uy)); // g: x->y, so g h = unit at y
  }
  SUBCASE("non-composable pair gives zero") {
    auto f = convolve(ExactElement::delta(g, ag), ExactElement::delta(g, ag));
    CHECK(f.coeffs.empty());
  }
  SUBCASE("(d_g + d_h)^2 = d_x + d_y") {
    ExactElement s = ExactElement::delta(g, ag) + ExactElement::delta(g, ah);
    ExactElement sq = convolve(s, s);
    ExactElement expect = ExactElement::delta(g, ux) + ExactElement::delta(g, uy);
    CHECK(sq == expect);
  }
}

TEST_CASE("star examples") {
  FiniteGroupoid g = pair_groupoid();
  int ag = g.arrow_index("g"), ah = g.arrow_index("h");
  int ux = g.arrow_index("x");

  CHECK(star(ExactElement::delta(g, ag)) == ExactElement::delta(g, ah));
  // star(i d_x) = -i d_x on a unit
  auto f = star(ExactElement::delta(g, ux, Cyclotomic::i()));
  CHECK(f == ExactElement::delta(g, ux, -Cyclotomic::i()));
  // star((1+i) d_g + 2 d_h) = (1-i) d_h^{-1} + 2 d_g^{-1}
  auto h = star(ExactElement::delta(g, ag, Cyclotomic::from_complex_rational(1, 1)) +
                ExactElement::delta(g, ah, Cyclotomic(2)));
  CHECK(h == ExactElement::delta(g, ah, Cyclotomic::from_complex_rational(1, -1)) +
                 ExactElement::delta(g, ag, Cyclotomic(2)));
}

TEST_CASE("gibbs twist examples") {
  FiniteGroupoid g = pair_groupoid();
  Cocycle c = validate_cocycle(g, std::map<std::string, std::int64_t>{
                                      {"x", 0}, {"y", 0}, {"g", 1}, {"h", -1}});
  int ag = g.arrow_index("g"), ah = g.arrow_index("h");

  SUBCASE("single delta at q = 1/2") {
    auto f = gibbs_twist(ExactElement::delta(g, ag), c, TemperatureParameter(Rational(1, 2)));
    CHECK(f == ExactElement::delta(g, ag, Cyclotomic(Rational(1, 2))));
  }
  SUBCASE("zero cocycle is the identity") {
    Cocycle zero = validate_cocycle(g, std::vector<std::int64_t>(4, 0));
    std::mt19937_64 rng(5);
    ExactElement f = random_element(g, rng);
    CHECK(gibbs_twist(f, zero, TemperatureParameter(Rational(1, 3))) == f);
  }
  SUBCASE("factor per arrow with c doubled") {
    Cocycle c2 = validate_cocycle(g, std::map<std::string, std::int64_t>{
                                         {"x", 0}, {"y", 0}, {"g", 2}, {"h", -2}});
    auto f = gibbs_twist(ExactElement::delta(g, ag) + ExactElement::delta(g, ah), c2,
                         TemperatureParameter(Rational(1, 3)));
    CHECK(f == ExactElement::delta(g, ag, Cyclotomic(Rational(1, 9))) +
                   ExactElement::delta(g, ah, Cyclotomic(Rational(9))));
  }
}

TEST_CASE("time action in float mode") {
  FiniteGroupoid g = pair_groupoid();
  Cocycle c = validate_cocycle(g, std::map<std::string, std::int64_t>{
                                      {"x", 0}, {"y", 0}, {"g", 1}, {"h", -1}});
  int ag = g.arrow_index("g");
  const double pi = 3.14159265358979323846;

  FloatElement f = FloatElement::delta(g, ag, CF64(1.0, 0.0));
  SUBCASE("t = 0 is the identity") {
    auto ft = time_action(f, c, 0.0);
    CHECK(ft.at(ag) == CF64(1.0, 0.0));
  }
  SUBCASE("c = 1, t = pi flips the sign") {
    auto ft = time_action(f, c, pi);
    CHECK(std::abs(ft.at(ag) - CF64(-1.0, 0.0)) < 1e-12);
  }
  SUBCASE("c = 2, t = pi/2 flips the sign") {
    Cocycle c2 = validate_cocycle(g, std::map<std::string, std::int64_t>{
                                         {"x", 0}, {"y", 0}, {"g", 2}, {"h", -2}});
    auto ft = time_action(f, c2, pi / 2);
    CHECK(std::abs(ft.at(ag) - CF64(-1.0, 0.0)) < 1e-12);
  }
  SUBCASE("group law sigma_t sigma_s = sigma_{t+s}") {
    auto a = time_action(time_action(f, c, 0.7), c, 0.9);
    auto b = time_action(f, c, 1.6);
    CHECK(std::abs(a.at(ag) - b.at(ag)) < 1e-12);
  }
}

TEST_CASE("conditional expectation restricts to units") {
  FiniteGroupoid g = pair_groupoid();
  int ag = g.arrow_index("g"), ux = g.arrow_index("x");
  CHECK(conditional_expectation(ExactElement::delta(g, ux)) == ExactElement::delta(g, ux));
  CHECK(conditional_expectation(ExactElement::delta(g, ag)).coeffs.empty());
  auto f = conditional_expectation(ExactElement::delta(g, ux, Cyclotomic(3)) +
                                   ExactElement::delta(g, ag, Cyclotomic::from_complex_rational(1, 1)));
  CHECK(f == ExactElement::delta(g, ux, Cyclotomic(3)));
}

TEST_CASE("moment matrix examples") {
  SUBCASE("Z/2 with w(e)=1, w(s)=1 is all ones") {
    FiniteGroupoid g = one_unit_z2();
    ExactFunctional w = ExactFunctional::zero(g);
    w.weights[g.arrow_index("e")] = Cyclotomic(1);
    w.weights[g.arrow_index("s")] = Cyclotomic(1);
    CycMatrix m = moment_matrix(w);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(m.at(i, j) == Cyclotomic(1));
  }
  SUBCASE("Z/2 with w(s)=-1") {
    FiniteGroupoid g = one_unit_z2();
    ExactFunctional w = ExactFunctional::zero(g);
    w.weights[g.arrow_index("e")] = Cyclotomic(1);
    w.weights[g.arrow_index("s")] = Cyclotomic(-1);
    CycMatrix m = moment_matrix(w);
    int ie = g.arrow_index("e"), is = g.arrow_index("s");
    CHECK(m.at(ie, ie) == Cyclotomic(1));
    CHECK(m.at(ie, is) == Cyclotomic(-1));
    CHECK(m.at(is, ie) == Cyclotomic(-1));
    CHECK(m.at(is, is) == Cyclotomic(1));
  }
  SUBCASE("pair groupoid unit measure gives diagonal range blocks") {
    FiniteGroupoid g = pair_groupoid();
    ExactFunctional w = ExactFunctional::zero(g);
    w.weights[g.arrow_index("x")] = Cyclotomic(Rational(1, 2));
    w.weights[g.arrow_index("y")] = Cyclotomic(Rational(1, 2));
    CycMatrix m = moment_matrix(w);
    // every entry with r(a) = r(b): diagonal gets 1/2, off-diagonal 0
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        if (g.tgt[a] != g.tgt[b]) {
          CHECK(m.at(a, b).is_zero());
        } else if (a == b) {
          CHECK(m.at(a, b) == Cyclotomic(Rational(1, 2)));
        } else {
          CHECK(m.at(a, b).is_zero());
        }
      }
  }
}

TEST_CASE("positivity examples") {
  FiniteGroupoid g = one_unit_z2();
  SUBCASE("canonical trace is positive") {
    ExactFunctional w = ExactFunctional::zero(g);
    w.weights[g.arrow_index("e")] = Cyclotomic(1);
    CHECK(is_positive(w).positive);
  }
  SUBCASE("w(s) = 2 is not positive, exactly and in float") {
    ExactFunctional w = ExactFunctional::zero(g);
    w.weights[g.arrow_index("e")] = Cyclotomic(1);
    w.weights[g.arrow_index("s")] = Cyclotomic(2);
    PositivityResult exact = is_positive(w);
    CHECK_FALSE(exact.positive);
    FloatFunctional wf = FloatFunctional::zero(g);
    for (int a = 0; a < 2; ++a) wf.weights[a] = w.weights[a].to_complex();
    PositivityResult fl = is_positive(wf);
    CHECK_FALSE(fl.positive);
    CHECK(fl.min_eigenvalue == doctest::Approx(-1.0)); // eigenvalues -1 and 3
  }
  SUBCASE("Gibbs functional on the pair groupoid is positive") {
    FiniteGroupoid pg = pair_groupoid();
    ExactFunctional w = ExactFunctional::zero(pg);
    w.weights[pg.arrow_index("x")] = Cyclotomic(Rational(2, 3));
    w.weights[pg.arrow_index("y")] = Cyclotomic(Rational(1, 3));
    CHECK(is_positive(w).positive);
  }
  SUBCASE("non-hermitian weights are rejected") {
    ExactFunctional w = ExactFunctional::zero(g);
    w.weights[g.arrow_index("e")] = Cyclotomic(1);
    w.weights[g.arrow_index("s")] = Cyclotomic::i();
    CHECK_THROWS_AS(is_positive(w), NotHermitian);
  }
}

TEST_CASE("algebra laws on random elements across the suite") {
  auto suite = make_suite(11);
  std::mt19937_64 rng(99);
  int tested = 0;
  for (const auto &inst : suite) {
    if (inst.groupoid.arrow_count() > 12) continue; // keep the cubic loops small
    const FiniteGroupoid &g = inst.groupoid;
    ExactElement f1 = random_element(g, rng), f2 = random_element(g, rng),
                 f3 = random_element(g, rng);
    CHECK(convolve(convolve(f1, f2), f3) == convolve(f1, convolve(f2, f3)));
    CHECK(star(star(f1)) == f1);
    CHECK(star(convolve(f1, f2)) == convolve(star(f2), star(f1)));
    const Cocycle &c = inst.cocycles.back();
    TemperatureParameter q(Rational(2, 3));
    CHECK(gibbs_twist(convolve(f1, f2), c, q) ==
          convolve(gibbs_twist(f1, c, q), gibbs_twist(f2, c, q)));
    TemperatureParameter q_inv(Rational(3, 2));
    CHECK(gibbs_twist(gibbs_twist(f1, c, q), c, q_inv) == f1);
    CHECK(conditional_expectation(gibbs_twist(f1, c, q)) == conditional_expectation(f1));
    ++tested;
  }
  CHECK(tested >= 8);
}

TEST_CASE("exact and float positivity agree on random hermitian functionals") {
  auto suite = make_suite(21);
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> num(-2, 2);
  int agreements = 0;
  for (const auto &inst : suite) {
    if (inst.groupoid.arrow_count() > 10) continue;
    const FiniteGroupoid &g = inst.groupoid;
    for (int rep = 0; rep < 6; ++rep) {
      ExactFunctional w = ExactFunctional::zero(g);
      for (int a = 0; a < g.arrow_count(); ++a) {
        if (!w.weights[a].is_zero()) continue; // already set via the inverse
        Cyclotomic v = Cyclotomic::from_complex_rational(Rational(num(rng), 2),
                                                         g.inv[a] == a ? Rational(0)
                                                                       : Rational(num(rng), 3));
        w.weights[a] = v;
        w.weights[g.inv[a]] = v.conj();
      }
      REQUIRE(w.is_hermitian());
      PositivityResult exact = is_positive(w);
      FloatFunctional wf = FloatFunctional::zero(g);
      for (int a = 0; a < g.arrow_count(); ++a) wf.weights[a] = w.weights[a].to_complex();
      PositivityResult fl = is_positive(wf);
      // the float test may accept a tiny negative eigenvalue, never the reverse
      if (exact.positive) CHECK(fl.positive);
      if (!fl.positive) CHECK_FALSE(exact.positive);
      if (exact.positive == fl.positive) ++agreements;
    }
  }
  CHECK(agreements >= 30);
}

TEST_CASE("functional flags and pairing") {
  FiniteGroupoid g = pair_groupoid();
  ExactFunctional w = ExactFunctional::zero(g);
  w.weights[g.arrow_index("x")] = Cyclotomic(Rational(2, 3));
  w.weights[g.arrow_index("y")] = Cyclotomic(Rational(1, 3));
  CHECK(w.is_hermitian());
  CHECK(w.is_normalized());
  ExactElement f = ExactElement::delta(g, g.arrow_index("x"), Cyclotomic(3));
  CHECK(w(f) == Cyclotomic(2));

  FiniteGroupoid other = one_unit_z2();
  ExactElement foreign = ExactElement::delta(other, 0);
  CHECK_THROWS_AS(w(foreign), GroupoidMismatch);
  CHECK_THROWS_AS(convolve(f, foreign), GroupoidMismatch);
}
