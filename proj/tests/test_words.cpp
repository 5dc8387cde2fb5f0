#include <string>
#include <vector>

#include "doctest.h"
#include "qcfa/words.hpp"

using namespace qcfa;

namespace {
const std::vector<std::string> kAb = {"a", "b"};
}

TEST_CASE("word text round trips through parse and print") {
  for (const std::string& text :
       {std::string("a"), std::string("a,-a,b"), std::string("-b,-b,a"),
        std::string("")}) {
    Word w = parse_word(text, kAb);
    CHECK(print_word(w, kAb) == text);
    CHECK(parse_word(print_word(w, kAb), kAb) == w);
  }
  Word w = parse_word("a,-b", kAb);
  REQUIRE(w.size() == 2);
  CHECK(w[0].index == 0);
  CHECK(w[0].sign == 1);
  CHECK(w[1].index == 1);
  CHECK(w[1].sign == -1);
}

TEST_CASE("parsing rejects unknown labels") {
  CHECK_THROWS_AS(parse_word("c", kAb), std::invalid_argument);
  CHECK_THROWS_AS(parse_word("a,,b", kAb), std::invalid_argument);
  CHECK_THROWS_AS(parse_word("--a", kAb), std::invalid_argument);
}

TEST_CASE("signed integer encoding round trips") {
  Word w = parse_word("a,-b,b,-a", kAb);
  std::vector<int> ints = word_to_ints(w);
  CHECK(ints == std::vector<int>{1, -2, 2, -1});
  CHECK(word_from_ints(ints) == w);
  CHECK(word_to_ints(word_from_ints({3, -3, 1})) ==
        std::vector<int>{3, -3, 1});
}

TEST_CASE("free reduction cancels adjacent inverse pairs") {
  CHECK(free_reduce(parse_word("a,-a", kAb)).empty());
  CHECK(free_reduce(parse_word("a,b,-b,-a", kAb)).empty());
  // cancellation can cascade from the middle outward
  Word nested = parse_word("a,b,a,-a,-b,b", kAb);
  CHECK(print_word(free_reduce(nested), kAb) == "a,b");
  // already reduced words are untouched
  Word comm = parse_word("a,b,-a,-b", kAb);
  CHECK(free_reduce(comm) == comm);
}

TEST_CASE("inverse and concatenation behave as group operations") {
  Word u = parse_word("a,b", kAb);
  Word v = parse_word("-b,a", kAb);
  CHECK(print_word(inverse_word(u), kAb) == "-b,-a");
  CHECK(free_reduce(concat(u, inverse_word(u))).empty());
  CHECK(print_word(concat(u, v), kAb) == "a,b,-b,a");
  CHECK(print_word(free_reduce(concat(u, v)), kAb) == "a,a");
  CHECK(inverse_word(Word{}).empty());
}
