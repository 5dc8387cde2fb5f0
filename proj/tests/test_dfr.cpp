#include <cmath>
#include <vector>

#include "doctest.h"
#include "qcfa/dfr.hpp"
#include "qcfa/groups.hpp"

using namespace qcfa;

namespace {
Word a_pow(int q) {
  return word_from_ints(std::vector<int>(static_cast<size_t>(std::abs(q)),
                                         q >= 0 ? 1 : -1));
}
}  // namespace

TEST_CASE("rational rotations are exact for small denominators") {
  CHECK(exp_2pi_i(Rational(0)).same_as(Scalar::one()));
  CHECK(exp_2pi_i(Rational(1, 2)).same_as(Scalar::from_int(-1)));
  CHECK(exp_2pi_i(Rational(1, 4)).same_as(Scalar::gauss(0, 1)));
  CHECK(exp_2pi_i(Rational(3, 4)).same_as(Scalar::gauss(0, -1)));
  Scalar eighth = exp_2pi_i(Rational(1, 8));
  CHECK(eighth.is_exact());
  CHECK((eighth * eighth).same_as(Scalar::gauss(0, 1)));
  // reduction mod 1
  CHECK(exp_2pi_i(Rational(9, 4)).same_as(exp_2pi_i(Rational(1, 4))));
  CHECK(exp_2pi_i(Rational(-1, 4)).same_as(exp_2pi_i(Rational(3, 4))));
  // generic denominators fall back to high precision floats
  Scalar seventh = exp_2pi_i(Rational(1, 7));
  CHECK_FALSE(seventh.is_exact());
  Scalar prod = Scalar::one();
  for (int i = 0; i < 7; ++i) prod = prod * seventh;
  CHECK(prod.same_as(Scalar::one()));
}

TEST_CASE("gap of the algebraic rotation at the generator") {
  Dfr f = dfr_z_algebraic();
  CHECK(f.k == 1);
  CHECK(f.d == 2);
  CHECK(f.diagonal);
  // chi(a) = (8+4i)/5 has magnitude 4/sqrt(5)
  double gap = dfr_gap(f, a_pow(1)).convert_to<double>();
  CHECK(doctest::Approx(gap).epsilon(1e-14) == 2.0 - 4.0 / std::sqrt(5.0));
  CHECK(doctest::Approx(gap).epsilon(1e-14) == 0.21114561800016833);
  CHECK(dfr_gap(f, Word{}) == BigFloat(0));
  // powers of an irrational rotation never become scalar, so gaps stay positive
  for (int q : {2, 3, 10, 50}) CHECK(dfr_gap(f, a_pow(q)) > 0);
}

TEST_CASE("finite cyclic families have a uniform constant gap") {
  for (long m = 2; m <= 12; ++m) {
    Dfr f = dfr_zm(m);
    double bound = constant_gap_for_modulus(m);
    CHECK(bound > 0.0);
    for (long h = 1; h < m; ++h) {
      double g = dfr_gap(f, a_pow(static_cast<int>(h))).convert_to<double>();
      CHECK(g >= bound);
    }
    CHECK(dfr_gap(f, a_pow(static_cast<int>(m))).convert_to<double>() ==
          doctest::Approx(0.0).epsilon(1e-30));
    CHECK(f.tau.kind == TauKind::Constant);
    CHECK(f.tau.eval(3) == doctest::Approx(bound));
  }
}

TEST_CASE("free group gaps match the certified length minima") {
  Dfr f = dfr_f2();
  auto gap = [&f](const std::vector<int>& w) {
    return dfr_gap(f, word_from_ints(w)).convert_to<double>();
  };
  CHECK(doctest::Approx(gap({1})).epsilon(1e-14) == 0.21114561800016833);
  CHECK(doctest::Approx(gap({1, 2, -1, -2})).epsilon(1e-14) == 0.16);
  CHECK(doctest::Approx(gap({1, 1, 1, 1, 1, 1})).epsilon(1e-14) == 0.128);
  CHECK(f.tau.kind == TauKind::ExpLower);
}

TEST_CASE("tau models evaluate their declared shapes") {
  TauModel c = TauModel::constant(0.3);
  CHECK(c.eval(1) == doctest::Approx(0.3));
  CHECK(c.eval(100) == doctest::Approx(0.3));

  TauModel p = TauModel::poly_constants(0.5, 2.0);
  CHECK(p.eval(10) == doctest::Approx(0.005));
  CHECK(p.has_constants);

  TauModel e = TauModel::exp_constants(3.0, 0.5);
  CHECK(e.eval(2) == doctest::Approx(0.5 / 9.0));
  CHECK_FALSE(TauModel::poly_declared().has_constants);
  CHECK(TauModel::poly_declared_exponent(1.5).fixed_exponent);

  TauModel u = TauModel::unbounded();
  CHECK(u.kind == TauKind::Unbounded);
}

TEST_CASE("non-algebraic rotations carry the declared polynomial tau") {
  Dfr f = dfr_z_nonalgebraic(0.25);
  // several rotation coordinates back the declared polynomial decay
  CHECK(f.k >= 1);
  CHECK(f.tau.kind == TauKind::PolyLower);
  CHECK(dfr_gap(f, a_pow(1)) > 0);
  CHECK_THROWS_AS(dfr_z_nonalgebraic(-0.1), std::invalid_argument);
}

TEST_CASE("abelian families separate every ball element") {
  Dfr f = dfr_abelian_algebraic(2, {});
  Ball ball = f.group.enumerate_ball(4);
  for (const BallEntry& e : ball.entries) {
    if (e.length == 0) continue;
    CHECK(dfr_gap(f, e.word) > 0);
  }
  Dfr mixed = dfr_abelian_algebraic(1, {4});
  CHECK(mixed.group.generator_count() == 2);
  // rank zero with no torsion degenerates to the trivial family
  CHECK(dfr_abelian_algebraic(0, {}).group.family == GroupFamily::Trivial);
  CHECK_THROWS_AS(dfr_abelian_algebraic(-1, {}), std::invalid_argument);
}

TEST_CASE("tan rotations are faithful on the rank two lattice ball") {
  Dfr f = dfr_tan_zr(2);
  Ball ball = f.group.enumerate_ball(6);
  CHECK(ball.entries.size() == 85);
  for (const BallEntry& e : ball.entries) {
    if (e.length == 0) continue;
    CHECK(dfr_gap(f, e.word) > BigFloat(0));
  }
}

TEST_CASE("direct products of frees recognize componentwise identity") {
  Dfr f = dfr_direct_product_of_frees({2, 2});
  CHECK(f.group.generator_count() == 4);
  // (a b a^-1 b^-1, e) is nontrivial, generators of different factors commute
  CHECK(dfr_gap(f, word_from_ints({1, 2, -1, -2})) > 0);
  CHECK(f.group.is_identity(word_from_ints({1, 3, -1, -3})));
}

TEST_CASE("shalen families accept both angle choices") {
  Dfr s = dfr_shalen_z_free_zr(2);
  CHECK(s.tau.kind == TauKind::Unbounded);
  CHECK(s.group.labels == std::vector<std::string>{"y", "x1", "x2"});
  CHECK(dfr_gap(s, word_from_ints({1})) > 0);
  Dfr r = dfr_shalen_z_free_zr(2, ShalenAlpha::rational(Rational(1, 3)));
  CHECK(dfr_gap(r, word_from_ints({2})) > 0);
}

TEST_CASE("products route images to the right generator slots") {
  // the abelian normal form puts free generators first, so the torsion
  // image of the left factor must land after the free part of the right
  Dfr a = dfr_zm(3);
  Dfr b = dfr_z_algebraic();
  Dfr prod = dfr_product(a, b);
  CHECK(prod.group.generator_count() == 2);
  CHECK(prod.k == a.k + b.k);
  CHECK(prod.group.is_identity(word_from_ints({2, 2, 2})));
  CHECK_FALSE(prod.group.is_identity(word_from_ints({1, 1, 1})));
  CHECK(dfr_gap(prod, word_from_ints({1})) > 0);
  CHECK(dfr_gap(prod, word_from_ints({2})) > 0);
  CHECK(dfr_gap(prod, word_from_ints({2, 2, 2})).convert_to<double>() ==
        doctest::Approx(0.0));
}

TEST_CASE("products take the pointwise minimum of constant tau models") {
  Dfr a = dfr_zm(2);
  Dfr b = dfr_zm(6);
  Dfr prod = dfr_product(a, b);
  CHECK(prod.tau.kind == TauKind::Constant);
  for (int n : {1, 4, 16})
    CHECK(prod.tau.eval(n) ==
          doctest::Approx(std::min(a.tau.eval(n), b.tau.eval(n))));
  // torsion orders that do not chain have no abelian normal form here
  CHECK_THROWS_AS(dfr_product(dfr_zm(3), dfr_zm(4)), std::invalid_argument);
}

TEST_CASE("overgroup families induce through the coset table") {
  Dfr base = dfr_z_algebraic();
  Dfr over = dfr_overgroup(base, index_two_z_table());
  CHECK(over.d == 2 * base.d);
  CHECK(over.group.family == GroupFamily::VirtualOvergroup);
  // the odd generator is detected by the induced rep
  CHECK(dfr_gap(over, word_from_ints({1})) > 0);
  CHECK(dfr_gap(over, Word{}) == BigFloat(0));
}
