#include <set>
#include <string>

#include "doctest.h"
#include "qcfa/groups.hpp"

using namespace qcfa;

TEST_CASE("identity recognition in the basic presentations") {
  GroupPresentation f2 = GroupPresentation::free_group(2);
  CHECK(f2.is_identity(Word{}));
  CHECK(f2.is_identity(parse_word("a,-a", f2.labels)));
  CHECK_FALSE(f2.is_identity(parse_word("a,b,-a,-b", f2.labels)));

  GroupPresentation z5 = GroupPresentation::cyclic(5);
  Word a5 = word_from_ints({1, 1, 1, 1, 1});
  CHECK(z5.is_identity(a5));
  CHECK_FALSE(z5.is_identity(word_from_ints({1, 1})));

  GroupPresentation z2 = GroupPresentation::free_abelian(2);
  CHECK(z2.is_identity(word_from_ints({1, 2, -1, -2})));
  CHECK_FALSE(z2.is_identity(word_from_ints({1, 2, -1})));
}

TEST_CASE("relators evaluate to the identity") {
  for (const GroupPresentation& g :
       {GroupPresentation::cyclic(6), GroupPresentation::free_abelian(3),
        GroupPresentation::abelian_mixed(1, {4}),
        GroupPresentation::free_product_z_zr(2)}) {
    for (const Word& rel : g.relators()) CHECK(g.is_identity(rel));
  }
}

TEST_CASE("canonical keys separate group elements") {
  GroupPresentation z2 = GroupPresentation::free_abelian(2);
  CHECK(z2.canonical_key(word_from_ints({1, 2})) ==
        z2.canonical_key(word_from_ints({2, 1})));
  CHECK(z2.canonical_key(word_from_ints({1})) !=
        z2.canonical_key(word_from_ints({2})));
  GroupPresentation f2 = GroupPresentation::free_group(2);
  CHECK(f2.canonical_key(word_from_ints({1, 2})) !=
        f2.canonical_key(word_from_ints({2, 1})));
  CHECK(f2.canonical_key(word_from_ints({1, -2, 2})) ==
        f2.canonical_key(word_from_ints({1})));
}

TEST_CASE("free group balls have the expected sizes") {
  GroupPresentation f2 = GroupPresentation::free_group(2);
  CHECK(f2.enumerate_ball(2).entries.size() == 17);
  CHECK(f2.enumerate_ball(3).entries.size() == 53);
  CHECK(f2.enumerate_ball(6).entries.size() == 1457);
  // 1 + sum over n of 4 * 3^(n-1)
  Ball b8 = f2.enumerate_ball(8);
  CHECK(b8.entries.size() == 13121);
  CHECK(b8.entries[0].word.empty());
}

TEST_CASE("balls nest and carry consistent bfs data") {
  GroupPresentation f2 = GroupPresentation::free_group(2);
  Ball small = f2.enumerate_ball(2);
  Ball big = f2.enumerate_ball(3);
  std::set<std::string> keys;
  for (const BallEntry& e : big.entries) {
    CHECK(static_cast<int>(e.word.size()) == e.length);
    keys.insert(f2.canonical_key(e.word));
    if (e.length > 0) {
      REQUIRE(e.parent >= 0);
      Word parent = big.entries[e.parent].word;
      parent.push_back(e.edge);
      CHECK(f2.canonical_key(parent) == f2.canonical_key(e.word));
    }
  }
  // all distinct, and every element of the smaller ball appears
  CHECK(keys.size() == big.entries.size());
  for (const BallEntry& e : small.entries)
    CHECK(keys.count(f2.canonical_key(e.word)) == 1);
}

TEST_CASE("abelian ball sizes match the lattice count") {
  GroupPresentation z2 = GroupPresentation::free_abelian(2);
  // |B(n)| in Z^2 with the word metric |x| + |y| is 2n^2 + 2n + 1
  CHECK(z2.enumerate_ball(6).entries.size() == 85);
  CHECK(z2.enumerate_ball(1).entries.size() == 5);
}

TEST_CASE("free product of z and z r uses the documented labels") {
  GroupPresentation g = GroupPresentation::free_product_z_zr(2);
  REQUIRE(g.labels.size() == 3);
  CHECK(g.labels[0] == "y");
  CHECK(g.labels[1] == "x1");
  CHECK(g.labels[2] == "x2");
  // x generators commute with each other but not with y
  CHECK(g.is_identity(parse_word("x1,x2,-x1,-x2", g.labels)));
  CHECK_FALSE(g.is_identity(parse_word("y,x1,-y,-x1", g.labels)));
}

TEST_CASE("built in coset tables validate and classify words") {
  GroupPresentation z = GroupPresentation::free_abelian(1);

  CosetTable t2 = index_two_z_table();
  // virtual_overgroup runs the consistency checks on construction
  CHECK_NOTHROW(GroupPresentation::virtual_overgroup(z, t2));
  CHECK(t2.cosets == 2);
  CHECK(t2.labels == std::vector<std::string>{"a"});
  CHECK(t2.coset_of(word_from_ints({1})) == 1);
  CHECK(t2.coset_of(word_from_ints({1, 1})) == 0);
  CHECK(t2.coset_of(Word{}) == 0);

  CosetTable td = dihedral_over_z_table();
  CHECK_NOTHROW(GroupPresentation::virtual_overgroup(z, td));
  CHECK(td.cosets == 2);
  CHECK(td.labels == std::vector<std::string>{"t", "s"});

  GroupPresentation f2 = GroupPresentation::free_group(2);
  CosetTable t1 = identity_coset_table(f2);
  CHECK_NOTHROW(GroupPresentation::virtual_overgroup(f2, t1));
  CHECK(t1.cosets == 1);
}

TEST_CASE("flat symbol indexing round trips") {
  CosetTable td = dihedral_over_z_table();
  for (int f = 0; f < td.symbol_count(); ++f) {
    GeneratorSymbol s = td.unflat_symbol(f);
    CHECK(td.flat_symbol(s) == f);
  }
}

TEST_CASE("overgroup presentations defer to the base group") {
  GroupPresentation base = GroupPresentation::free_abelian(1);
  GroupPresentation over =
      GroupPresentation::virtual_overgroup(base, index_two_z_table());
  // even powers of a land in the base subgroup, odd ones do not
  CHECK(over.is_identity(Word{}));
  CHECK_FALSE(over.is_identity(word_from_ints({1})));
  CHECK_FALSE(over.is_identity(word_from_ints({1, 1})));
  CHECK(over.is_identity(word_from_ints({1, -1})));
}
