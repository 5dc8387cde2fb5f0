#include <vector>

#include "doctest.h"
#include "qcfa/common.hpp"
#include "qcfa/dfr.hpp"
#include "qcfa/reps.hpp"

using namespace qcfa;

namespace {

Word rand_word(int len, int gens, SplitMix64& rng) {
  Word w;
  for (int i = 0; i < len; ++i)
    w.push_back({static_cast<int>(rng.next() % gens),
                 rng.next() % 2 ? 1 : -1});
  return w;
}

}  // namespace

TEST_CASE("representation evaluation is a homomorphism") {
  UnitaryRep rep = f2_base_rep();
  validate_rep(rep);
  SplitMix64 rng(31);
  for (int i = 0; i < 20; ++i) {
    Word u = rand_word(static_cast<int>(rng.next() % 6), 2, rng);
    Word v = rand_word(static_cast<int>(rng.next() % 6), 2, rng);
    CHECK((eval_rep(rep, u) * eval_rep(rep, v)).same_as(
        eval_rep(rep, concat(u, v))));
  }
  CHECK(eval_rep(rep, Word{}).same_as(UnitaryMatrix::identity(2)));
  Word a = word_from_ints({1});
  CHECK((eval_rep(rep, a) * eval_rep(rep, inverse_word(a)))
            .same_as(UnitaryMatrix::identity(2)));
}

TEST_CASE("characters of the free group generators") {
  UnitaryRep rep = f2_base_rep();
  // both generators have trace 4/sqrt(5)
  Word a = word_from_ints({1}), b = word_from_ints({2});
  CHECK(character_magnitude_sq(rep, a)
            .same_as(Scalar::from_rational(Rational(16, 5))));
  CHECK(character_magnitude_sq(rep, b)
            .same_as(Scalar::from_rational(Rational(16, 5))));
  // the commutator witnesses non-commutativity with a rational trace norm
  Word comm = word_from_ints({1, 2, -1, -2});
  CHECK(character_magnitude_sq(rep, comm)
            .same_as(Scalar::from_rational(Rational(2116, 625))));
  // a^6 has real rational character (3+4i)^3 / 125 plus conjugate
  Word a6 = word_from_ints({1, 1, 1, 1, 1, 1});
  CHECK(character(rep, a6)
            .same_as(Scalar::from_rational(Rational(-234, 125))));
  CHECK(doctest::Approx(character_magnitude(rep, a).convert_to<double>())
            .epsilon(1e-14) == 1.7888543819998317);
}

TEST_CASE("characters of the degree two rotation of z") {
  // a -> diag((3+4i)/5, 1); chi(a^2) = z^2 + 1 with z^2 = (-7+24i)/25
  UnitaryRep rep = dfr_z_algebraic().reps.at(0);
  Word a2 = word_from_ints({1, 1});
  Scalar chi = character(rep, a2);
  CHECK(chi.same_as(Scalar::gauss(Rational(18, 25), Rational(24, 25))));
  CHECK(character_magnitude_sq(rep, a2)
            .same_as(Scalar::from_rational(Rational(36, 25))));
}

TEST_CASE("quasikernel membership is scalarity of the image") {
  UnitaryRep zrep = dfr_z_algebraic().reps.at(0);
  CHECK(quasikernel_test(zrep, Word{}));
  // diag(z, 1) is never scalar for q != 0 because z has infinite order
  for (int q : {1, 2, 5, -3})
    CHECK_FALSE(quasikernel_test(zrep, word_from_ints(std::vector<int>(
                    static_cast<size_t>(std::abs(q)), q > 0 ? 1 : -1))));

  UnitaryRep frep = f2_base_rep();
  CHECK(quasikernel_test(frep, word_from_ints({1, -1})));
  CHECK_FALSE(quasikernel_test(frep, word_from_ints({1, 2, -1, -2})));
}

TEST_CASE("finite cyclic representations kill exactly the relators") {
  Dfr f = dfr_zm(5);
  for (const UnitaryRep& rep : f.reps) {
    validate_rep(rep);
    Word a5 = word_from_ints({1, 1, 1, 1, 1});
    CHECK(quasikernel_test(rep, a5));
  }
  // some rep must separate each nonzero residue
  for (int h = 1; h < 5; ++h) {
    bool separated = false;
    for (const UnitaryRep& rep : f.reps)
      if (!quasikernel_test(rep,
                            word_from_ints(std::vector<int>(h, 1))))
        separated = true;
    CHECK(separated);
  }
}

TEST_CASE("direct sums and padding preserve unitarity") {
  UnitaryRep a = dfr_z_algebraic().reps.at(0);
  UnitaryRep sum = direct_sum_reps(a, a);
  validate_rep(sum);
  CHECK(sum.dim == 4);
  CHECK(character(sum, word_from_ints({1}))
            .same_as(character(a, word_from_ints({1})) +
                     character(a, word_from_ints({1}))));
  UnitaryRep padded = pad_rep(a, 5);
  validate_rep(padded);
  CHECK(padded.dim == 5);
  // padding adds trivial directions, shifting the character by d2 - d
  CHECK(character(padded, word_from_ints({1}))
            .same_as(character(a, word_from_ints({1})) + Scalar::from_int(3)));
}

TEST_CASE("restriction composes the embedding with the parent rep") {
  UnitaryRep base = f2_base_rep();
  UnitaryRep r3 = restrict_rep(base, GroupPresentation::free_group(3),
                               fr_embedding_words(3));
  validate_rep(r3);
  CHECK(r3.dim == base.dim);
  // generator j of F_3 maps to a^j b a^-j
  Word g2 = word_from_ints({2});
  Word img = parse_word("a,a,b,-a,-a", base.group.labels);
  CHECK(eval_rep(r3, g2).same_as(eval_rep(base, img)));
}

TEST_CASE("induction doubles the dimension and averages over cosets") {
  UnitaryRep pi = dfr_z_algebraic().reps.at(0);
  CosetTable table = index_two_z_table();
  UnitaryRep ind = induce_rep(pi, table);
  validate_rep(ind);
  CHECK(ind.dim == 2 * pi.dim);
  // odd powers of a permute the two cosets, so their character vanishes
  CHECK(character(ind, word_from_ints({1})).same_as(Scalar::zero()));
  CHECK(character(ind, word_from_ints({1, 1, 1})).same_as(Scalar::zero()));
  // even powers fix both cosets and pick up the base character twice
  Scalar direct = character(pi, word_from_ints({1}));
  CHECK(character(ind, word_from_ints({1, 1}))
            .same_as(direct + direct));
  // characters agree on conjugate ball elements up to word rewriting
  GroupPresentation over = ind.group;
  for (const BallEntry& e : over.enumerate_ball(4).entries)
    CHECK((eval_rep(ind, e.word) * eval_rep(ind, inverse_word(e.word)))
              .same_as(UnitaryMatrix::identity(ind.dim)));
}
