#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fgd/dynamics.hpp"

using namespace fgd;

namespace {

Automorphism from_text(const std::string& text) {
  auto r = verify_and_invert(parse_endomorphism(text));
  REQUIRE(r.ok());
  return *r.automorphism;
}

Automorphism intro() {
  return from_text("rank 3\na -> cb\nb -> a\nc -> ba\n");
}
Automorphism sec11() { return from_text("rank 2\na -> a\nb -> aba\n"); }
Automorphism fib() { return from_text("rank 2\na -> ab\nb -> a\n"); }
Automorphism hilion() {
  return from_text("rank 4\na -> a\nb -> ba\nc -> caa\nd -> dca\n");
}

std::mt19937_64 rng(7151);

}  // namespace

TEST_CASE("orbit golden values") {
  OrbitTrace t = orbit(intro(), parse_word("a", 3), 6);
  std::vector<std::string> want = {"a",        "cb",      "baa",
                                   "acbcb",    "cbbaabaa", "baaacbcbacbcb"};
  REQUIRE(t.terms.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(to_string(t.terms[i]) == want[i]);

  OrbitTrace u = orbit(intro(), parse_word("A", 3), 4);
  std::vector<std::string> wantA = {"A", "BC", "AAB", "BCBCA"};
  for (int i = 0; i < 4; ++i) CHECK(to_string(u.terms[i]) == wantA[i]);

  OrbitTrace c = orbit(Automorphism::identity(2), parse_word("ab", 2), 5);
  for (const auto& w : c.terms) CHECK(to_string(w) == "ab");
}

TEST_CASE("omega limit of the intro automorphism") {
  OmegaLimit la = omega_limit(intro(), parse_word("a", 3));
  REQUIRE(la.certified());
  CHECK(la.period == 3);
  CHECK(la.cert_depth == 64);
  CHECK(verify_cycle(intro(), la, 64));

  OmegaLimit lA = omega_limit(intro(), parse_word("A", 3));
  REQUIRE(lA.certified());
  CHECK(lA.period == 2);
  CHECK(verify_cycle(intro(), lA, 64));
}

TEST_CASE("omega limit in the boundary of an invariant factor") {
  OmegaLimit l = omega_limit(sec11(), parse_word("b", 2));
  REQUIRE(l.certified());
  CHECK(l.period == 1);
  // promoted to the EP word a^inf
  auto* ep = std::get_if<EventuallyPeriodicWord>(&l.points[0]);
  REQUIRE(ep != nullptr);
  CHECK(ep_equal(*ep, parse_ep("(a)^inf", 2)));
}

TEST_CASE("periodic word orbits are flagged, not certified") {
  OmegaLimit l = omega_limit(sec11(), parse_word("a", 2));
  CHECK(l.status == OmegaStatus::kPeriodicWord);
  CHECK(l.period == 1);
  REQUIRE(l.finite_cycle.size() == 1);
  CHECK(to_string(l.finite_cycle[0]) == "a");
}

TEST_CASE("boundary omega limits") {
  Automorphism beta = from_text("rank 2\na -> A\nb -> AB\n");
  OmegaLimit l = omega_limit_boundary(beta, parse_ep("(a)^inf", 2));
  REQUIRE(l.certified());
  CHECK(l.period == 2);
  bool has_plus = false, has_minus = false;
  for (const auto& p : l.points) {
    if (point_agrees(p, LimitPoint(parse_ep("(a)^inf", 2)), 64)) has_plus = true;
    if (point_agrees(p, LimitPoint(parse_ep("(A)^inf", 2)), 64)) has_minus = true;
  }
  CHECK(has_plus);
  CHECK(has_minus);
}

TEST_CASE("Hilion parabolic orbit") {
  Automorphism g = hilion();
  ReducedWord seed = parse_word("baD", 4);
  LimitBudget b;
  b.n_max = 200;
  OmegaLimit fwd = omega_limit(g, seed, b);
  REQUIRE(fwd.certified());
  CHECK(fwd.period == 1);
  CHECK(point_agrees(fwd.points[0], LimitPoint(parse_ep("b(A)^inf", 4)), 33));

  OmegaLimit bwd = omega_limit(g.inverted(), seed, b);
  REQUIRE(bwd.certified());
  CHECK(bwd.period == 1);
  CHECK(point_agrees(bwd.points[0], LimitPoint(parse_ep("b(A)^inf", 4)), 33));
}

TEST_CASE("w_p sequence") {
  Automorphism a = intro();
  ReducedWord w = parse_word("a", 3);
  auto ws = w_sequence(a, w, 4);
  CHECK(ws[0] == w);
  CHECK(to_string(ws[1]) == "cba");

  // alpha(w) = w gives w_p = w^p
  Automorphism s11 = sec11();
  ReducedWord fixed = parse_word("aa", 2);
  auto ws2 = w_sequence(s11, fixed, 5);
  for (int p = 1; p <= 5; ++p) CHECK(ws2[p - 1] == power_word(fixed, p));

  // recursion against the definition alpha^{p-1}(w)...alpha(w)w
  for (int t = 0; t < 20; ++t) {
    Automorphism r = random_automorphism(3, 5, rng);
    ReducedWord v = random_reduced_word(3, 4, rng);
    auto seq = w_sequence(r, v, 6);
    for (int p = 1; p <= 6; ++p) {
      ReducedWord direct(3);
      for (int i = p - 1; i >= 0; --i)
        direct = multiply(direct, apply(power(r, i), v));
      CHECK(seq[p - 1] == direct);
    }
  }
}

TEST_CASE("w_p identities") {
  for (int t = 0; t < 40; ++t) {
    Automorphism r = random_automorphism(3, 5, rng);
    ReducedWord v = random_reduced_word(3, 3, rng);
    auto seq = w_sequence(r, v, 8);
    // cocycle identity w_{p+q} = alpha^q(w_p) . w_q
    for (int p = 1; p <= 4; ++p)
      for (int q = 1; p + q <= 8; ++q)
        CHECK(seq[p + q - 1] ==
              multiply(apply(power(r, q), seq[p - 1]), seq[q - 1]));
    // w_p trivial forces a periodic point of period dividing p
    for (int p = 1; p <= 8; ++p)
      if (seq[p - 1].empty()) CHECK(apply(power(r, p), v) == v);
  }
}

TEST_CASE("w sequence limits") {
  Automorphism s11 = sec11();
  ReducedWord fixed = parse_word("a", 2);
  OmegaLimit l = w_sequence_limit(s11, fixed);
  REQUIRE(l.certified());
  CHECK(l.period == 1);
  CHECK(point_agrees(l.points[0], LimitPoint(parse_ep("(a)^inf", 2)), 64));

  OmegaLimit le = w_sequence_limit(s11, parse_word("1", 2));
  CHECK(le.status == OmegaStatus::kPeriodicWord);

  OmegaLimit li = w_sequence_limit(intro(), parse_word("a", 3));
  CHECK(li.certified());
  CHECK((li.period == 1 || li.period == 2 || li.period == 3 || li.period == 6));
}

TEST_CASE("fixed and periodic words") {
  auto fw = fixed_words(sec11(), 3);
  std::set<std::string> got;
  for (const auto& w : fw) got.insert(to_string(w));
  CHECK(got == std::set<std::string>{"1", "a", "A", "aa", "AA", "aaa", "AAA"});

  auto all = fixed_words(Automorphism::identity(2), 2);
  CHECK(all.size() == 1 + 4 + 12);  // all reduced words of length <= 2

  auto none = fixed_words(intro(), 4);
  REQUIRE(none.size() == 1);
  CHECK(none[0].empty());
}

TEST_CASE("fixed point classification") {
  FixedPointClass c =
      classify_fixed_point(sec11(), LimitPoint(parse_ep("(a)^inf", 2)));
  CHECK(c.kind == FixedPointKind::kHalfHalf);

  // fibonacci attracting ray
  OmegaLimit l = omega_limit(fib(), parse_word("a", 2));
  REQUIRE(l.certified());
  REQUIRE(l.period == 1);
  FixedPointClass att = classify_fixed_point(fib(), l.points[0]);
  CHECK(att.kind == FixedPointKind::kAttracting);
  // ... and the same point is repelling for the inverse
  FixedPointClass rep = classify_fixed_point(fib().inverted(), l.points[0]);
  CHECK(rep.kind == FixedPointKind::kRepelling);
}

TEST_CASE("gamma graph") {
  // half-half example: all seeds flow from a^{-inf} side to a^{inf} side
  std::vector<ReducedWord> seeds = {parse_word("ab", 2), parse_word("ba", 2),
                                    parse_word("bab", 2)};
  GammaGraph g = gamma_graph(sec11(), seeds);
  CHECK(g.unresolved_seeds.empty());
  CHECK(g.attracting.size() == 1);
  CHECK(g.repelling.size() == 1);
  CHECK(g.edges.size() == 3);
  CHECK(point_agrees(g.attracting[0], LimitPoint(parse_ep("(a)^inf", 2)), 64));
  CHECK(point_agrees(g.repelling[0], LimitPoint(parse_ep("(A)^inf", 2)), 64));

  // fibonacci: backward limits form a 2-cycle, so pass to the square
  std::vector<ReducedWord> fseeds = {parse_word("a", 2), parse_word("b", 2),
                                     parse_word("Ba", 2)};
  GammaGraph f = gamma_graph(power(fib(), 2), fseeds);
  CHECK(f.unresolved_seeds.empty());
  CHECK(f.attracting.size() == 1);
  CHECK(f.repelling.size() <= 2);
  // the attracting ray is quasi-periodic, not eventually periodic
  CHECK(std::holds_alternative<PrefixPoint>(f.attracting[0]));

  std::string dot = gamma_to_dot(g);
  CHECK(dot.find("digraph gamma") != std::string::npos);
  CHECK(dot.find("->") != std::string::npos);
}

TEST_CASE("periods census") {
  PeriodCensus id = periods_census(Automorphism::identity(2), 2, {}, 10);
  CHECK(id.periods == std::set<int>{1});

  // permutation automorphism of F_5 with cycles (a b)(c d e)
  Automorphism sigma = from_text("rank 5\na -> b\nb -> a\nc -> d\nd -> e\ne -> c\n");
  std::vector<EventuallyPeriodicWord> seeds = {
      parse_ep("(a)^inf", 5), parse_ep("(c)^inf", 5), parse_ep("(ac)^inf", 5)};
  PeriodCensus c = periods_census(sigma, 2, seeds, 60);
  CHECK(c.periods == std::set<int>{1, 2, 3, 6});
  CHECK(c.uncertified_seeds.empty());

  Automorphism beta = from_text("rank 2\na -> A\nb -> AB\n");
  PeriodCensus cb = periods_census(beta, 1, {parse_ep("(a)^inf", 2)}, 10);
  CHECK(cb.periods.count(2) == 1);
}

TEST_CASE("attraction rate") {
  AttractionRate fr = attraction_rate(fib(), parse_word("a", 2));
  CHECK(fr.kind == GrowthKind::kExponential);
  CHECK(fr.lambda == doctest::Approx(1.6180339887).epsilon(0.01));

  AttractionRate pr = attraction_rate(sec11(), parse_word("b", 2));
  CHECK(pr.kind == GrowthKind::kNonExponential);

  AttractionRate ir = attraction_rate(Automorphism::identity(2),
                                      parse_word("ab", 2));
  CHECK(ir.kind == GrowthKind::kNonExponential);
}

TEST_CASE("positive index search") {
  // swap automorphism: its square is the identity, giving many fixed points
  Automorphism swap = from_text("rank 2\na -> b\nb -> a\n");
  LimitBudget lb;
  lb.n_max = 120;
  PositiveIndexResult r = positive_index_search(swap, 2, 1, 40, lb);
  CHECK(r.found);
  CHECK(r.fixed_points_found >= 4);
  // basis-permuting alpha needs q divisible by the rank
  CHECK(r.q % 2 == 0);

  PositiveIndexResult s = positive_index_search(sec11(), 1, 2, 30, lb);
  CHECK(s.fixed_points_found >= 2);
}

TEST_CASE("limit set of a power is contained in the limit set") {
  Automorphism a = intro();
  ReducedWord g = parse_word("a", 3);
  OmegaLimit l1 = omega_limit(a, g);
  OmegaLimit l3 = omega_limit(power(a, 3), g);
  REQUIRE(l1.certified());
  REQUIRE(l3.certified());
  CHECK(l3.period == 1);
  bool contained = false;
  for (const auto& p : l1.points)
    if (point_agrees(p, l3.points[0], 64)) contained = true;
  CHECK(contained);
}

TEST_CASE("interior and boundary limits agree on g vs g^inf") {
  Automorphism a = sec11();
  ReducedWord g = parse_word("ba", 2);
  OmegaLimit li = omega_limit(a, g);
  OmegaLimit lb = omega_limit_boundary(a, ep_from_element(g));
  REQUIRE(li.certified());
  REQUIRE(lb.certified());
  CHECK(li.period == lb.period);
  bool match = false;
  for (const auto& p : lb.points)
    if (point_agrees(p, li.points[0], 64)) match = true;
  CHECK(match);
}

TEST_CASE("omega limit points are cyclically permuted") {
  for (int t = 0; t < 10; ++t) {
    Automorphism a = random_automorphism(3, 6, rng);
    ReducedWord g = random_reduced_word(3, 3, rng);
    OmegaLimit l = omega_limit(a, g);
    if (l.certified()) CHECK(verify_cycle(a, l, 64));
  }
}
