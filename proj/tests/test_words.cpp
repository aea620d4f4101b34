#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fgd/words.hpp"

using namespace fgd;

namespace {

ReducedWord w(const std::string& s, int rank = 3) { return parse_word(s, rank); }

// Brute-force oracle: minimal-|s| decomposition u = s c s^{-1} with c
// cyclically reduced, searching over all prefixes of u as conjugators.
CyclicDecomposition cyclic_reduce_oracle(const ReducedWord& u) {
  for (std::size_t n = 0; n <= u.size() / 2; ++n) {
    std::vector<Letter> pre(u.letters().begin(), u.letters().begin() + n);
    ReducedWord s(u.rank(), pre);
    ReducedWord c = multiply(multiply(invert(s), u), s);
    if (c.empty() || !c.front().is_inverse_of(c.back()))
      return CyclicDecomposition{s, c};
  }
  REQUIRE(false);
  return CyclicDecomposition{u, u};
}

std::mt19937_64 rng(20240817);

ReducedWord random_word(int rank, std::size_t len) {
  std::vector<Letter> out;
  std::uniform_int_distribution<int> gen(0, rank - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  while (out.size() < len) {
    Letter l(gen(rng), coin(rng) ? +1 : -1);
    if (!out.empty() && out.back().is_inverse_of(l)) continue;
    out.push_back(l);
  }
  return ReducedWord(rank, std::move(out));
}

}  // namespace

TEST_CASE("free reduction") {
  CHECK(w("aA").empty());
  CHECK(w("aBbcCA").empty());
  CHECK(to_string(w("abc")) == "abc");
  // idempotent
  ReducedWord r = w("abCBa");
  CHECK(reduce(r.letters(), r.rank()) == r);
  CHECK_THROWS_AS(parse_word("d", 3), std::invalid_argument);
}

TEST_CASE("multiplication and inversion") {
  CHECK(to_string(multiply(w("ab"), w("Ba"))) == "aa");
  CHECK(multiply(w("a"), w("A")).empty());
  CHECK(to_string(multiply(w("cb"), w("a"))) == "cba");
  CHECK(to_string(invert(w("ab"))) == "BA");
  CHECK(invert(w("1")).empty());
  CHECK(to_string(invert(w("cb"))) == "BC");
  // group laws on random words
  for (int t = 0; t < 50; ++t) {
    ReducedWord u = random_word(3, 8), v = random_word(3, 8),
                x = random_word(3, 8);
    CHECK(multiply(multiply(u, v), x) == multiply(u, multiply(v, x)));
    CHECK(multiply(u, invert(u)).empty());
    CHECK(invert(invert(u)) == u);
    CHECK(multiply(u, v).size() <= u.size() + v.size());
  }
}

TEST_CASE("cyclic reduction") {
  auto d = cyclic_reduce(w("abA"));
  CHECK(to_string(d.conjugator) == "a");
  CHECK(to_string(d.core) == "b");
  auto e = cyclic_reduce(w("ab"));
  CHECK(e.conjugator.empty());
  CHECK(to_string(e.core) == "ab");
  // against the brute-force conjugation oracle
  for (int t = 0; t < 100; ++t) {
    ReducedWord u = random_word(3, 10);
    auto got = cyclic_reduce(u);
    auto want = cyclic_reduce_oracle(u);
    CHECK(got.conjugator == want.conjugator);
    CHECK(got.core == want.core);
    CHECK(multiply(multiply(got.conjugator, got.core),
                   invert(got.conjugator)) == u);
  }
}

TEST_CASE("gromov product") {
  CHECK(gromov_product(w("abc", 4), w("abd", 4)) == 2);
  CHECK(gromov_product(w("a"), w("b")) == 0);
  EventuallyPeriodicWord ainf = parse_ep("(a)^inf", 3);
  CHECK(gromov_product(ainf, w("aab")) == 2);
  CHECK(gromov_product(ainf, ainf) == kGromovInfinity);
  // symmetry; self-product of a finite word is its length
  for (int t = 0; t < 50; ++t) {
    ReducedWord u = random_word(3, 9), v = random_word(3, 9);
    CHECK(gromov_product(u, v) == gromov_product(v, u));
    CHECK(gromov_product(u, u) == u.size());
  }
}

TEST_CASE("divergence transitivity on witness families") {
  // <X_n|Y_n> -> inf and <Y_n|Z_n> -> inf force <X_n|Z_n> -> inf.
  for (std::size_t n = 1; n < 40; ++n) {
    ReducedWord common = random_word(3, n);
    ReducedWord x = multiply(common, random_word(3, 3));
    ReducedWord y = multiply(common, random_word(3, 3));
    ReducedWord z = multiply(common, random_word(3, 3));
    std::size_t xy = gromov_product(x, y), yz = gromov_product(y, z);
    std::size_t xz = gromov_product(x, z);
    CHECK(xz + 3 >= std::min(xy, yz));  // hyperbolicity slack
  }
}

TEST_CASE("ep normalization") {
  auto e1 = ep_normalize(w("1"), w("ab"));
  CHECK(e1.prefix.empty());
  CHECK(to_string(e1.period) == "ab");
  auto e2 = ep_normalize(w("a"), w("Ab"));
  CHECK(e2.prefix.empty());
  CHECK(to_string(e2.period) == "bA");
  auto e3 = ep_normalize(w("ab"), w("ab"));
  CHECK(e3.prefix.empty());
  CHECK(to_string(e3.period) == "ab");
  // idempotent, and the declared prefix stream matches
  for (int t = 0; t < 100; ++t) {
    ReducedWord u = random_word(3, 5);
    ReducedWord c = random_word(3, 4);
    if (c.empty()) continue;
    auto x = ep_normalize(u, c);
    auto again = ep_normalize(x.prefix, x.period);
    CHECK(x == again);
    // the normalized point spells the same infinite word as naive u.c^n
    ReducedWord naive = u;
    for (int i = 0; i < 30; ++i) naive = multiply(naive, c);
    std::size_t depth = std::min<std::size_t>(naive.size(), 40);
    CHECK(gromov_product(ep_prefix(x, depth), naive) == depth);
  }
}

TEST_CASE("ep prefix and equality") {
  CHECK(to_string(ep_prefix(parse_ep("(ab)^inf", 3), 3)) == "aba");
  CHECK(to_string(ep_prefix(parse_ep("b(A)^inf", 3), 4)) == "bAAA");
  CHECK(ep_prefix(parse_ep("(ab)^inf", 3), 0).empty());
  CHECK(ep_equal(parse_ep("(ab)^inf", 3), parse_ep("ab(ab)^inf", 3)));
  CHECK(!ep_equal(parse_ep("(ab)^inf", 3), parse_ep("(ba)^inf", 3)));
  CHECK(ep_equal(parse_ep("(aa)^inf", 3), parse_ep("(a)^inf", 3)));
}

TEST_CASE("powers of g stabilize to g^inf") {
  for (int t = 0; t < 50; ++t) {
    ReducedWord g = random_word(3, 5);
    if (g.empty()) continue;
    auto ginf = ep_from_element(g);
    ReducedWord gn = power_word(g, 12);
    auto dec = cyclic_reduce(g);
    // g^n = s c^n s^{-1} agrees with g^inf up to |s| + n|c|
    std::size_t depth = std::min(4 * g.size(),
                                 dec.conjugator.size() + 12 * dec.core.size());
    CHECK(gromov_product(ep_prefix(ginf, depth), gn) == depth);
  }
}

TEST_CASE("conjugacy key is a class function") {
  for (int t = 0; t < 50; ++t) {
    ReducedWord g = random_word(3, 7);
    ReducedWord h = random_word(3, 4);
    CHECK(conjugacy_key(g) ==
          conjugacy_key(multiply(multiply(h, g), invert(h))));
  }
}

TEST_CASE("text round trips") {
  CHECK(to_string(w("1")) == "1");
  CHECK(to_string(parse_word("abA", 2)) == "abA");
  CHECK(to_string(parse_ep("b(A)^inf", 2)) == "b(A)^inf");
  CHECK(to_string(parse_ep("a(Ab)^inf", 2)) == "(bA)^inf");
}
