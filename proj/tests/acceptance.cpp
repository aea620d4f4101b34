// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Each criterion carries its own time budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fgd/dynamics.hpp"
#include "fgd/trees.hpp"

using namespace fgd;

namespace {

Automorphism from_text(const std::string& text) {
  auto r = verify_and_invert(parse_endomorphism(text));
  if (!r.ok()) throw std::runtime_error("fixture is not an automorphism");
  return *r.automorphism;
}

Automorphism intro() { return from_text("rank 3\na -> cb\nb -> a\nc -> ba\n"); }
Automorphism s11() { return from_text("rank 2\na -> a\nb -> aba\n"); }
Automorphism beta() { return from_text("rank 2\na -> A\nb -> AB\n"); }
Automorphism fib() { return from_text("rank 2\na -> ab\nb -> a\n"); }
Automorphism hilion() {
  return from_text("rank 4\na -> a\nb -> ba\nc -> caa\nd -> dca\n");
}

bool point_is_ep(const LimitPoint& p, const EventuallyPeriodicWord& x) {
  const auto* ep = std::get_if<EventuallyPeriodicWord>(&p);
  return ep && ep_equal(*ep, x);
}

// 1. intro golden orbit and certified periods
bool criterion1() {
  Automorphism a = intro();
  OrbitTrace tr = orbit(a, parse_word("a", 3), 6);
  const char* expected[] = {"a",        "cb",       "baa",
                            "acbcb",    "cbbaabaa", "baaacbcbacbcb"};
  if (tr.terms.size() != 6) return false;
  for (int i = 0; i < 6; ++i)
    if (to_string(tr.terms[i]) != expected[i]) return false;
  OmegaLimit oa = omega_limit(a, parse_word("a", 3));
  OmegaLimit oA = omega_limit(a, parse_word("A", 3));
  return oa.certified() && oa.period == 3 && oa.cert_depth >= 64 &&
         oA.certified() && oA.period == 2 && oA.cert_depth >= 64;
}

// 2. a -> a, b -> aba: fix-words, half-half center, two-sided basins
bool criterion2() {
  Automorphism a = s11();
  std::vector<ReducedWord> fixed = fixed_words(a, 3);
  std::set<std::string> got;
  for (const ReducedWord& w : fixed) got.insert(to_string(w));
  if (got != std::set<std::string>{"1", "a", "A", "aa", "AA", "aaa", "AAA"})
    return false;
  EventuallyPeriodicWord a_inf = ep_from_element(parse_word("a", 2));
  EventuallyPeriodicWord a_neg = ep_from_element(parse_word("A", 2));
  FixedPointClass cls = classify_fixed_point(a, LimitPoint(a_inf));
  if (cls.kind != FixedPointKind::kHalfHalf) return false;
  for (const char* s : {"b", "ab", "aab", "Ab"}) {
    OmegaLimit o = omega_limit(a, parse_word(s, 2));
    if (!o.certified() || o.points.size() != 1 ||
        !point_is_ep(o.points[0], a_inf))
      return false;
  }
  for (const char* s : {"B", "aB", "AB", "aaB"}) {
    OmegaLimit o = omega_limit(a, parse_word(s, 2));
    if (!o.certified() || o.points.size() != 1 ||
        !point_is_ep(o.points[0], a_neg))
      return false;
  }
  return true;
}

// 3. beta squares to the section-11 map; {a^inf, a^-inf} is a 2-orbit
bool criterion3() {
  Automorphism b = beta();
  Endomorphism sq = power(b, 2).forward();
  if (sq != s11().forward()) return false;
  OmegaLimit o = omega_limit_boundary(b, ep_from_element(parse_word("a", 2)));
  if (!o.certified() || o.period != 2 || o.points.size() != 2) return false;
  EventuallyPeriodicWord a_inf = ep_from_element(parse_word("a", 2));
  EventuallyPeriodicWord a_neg = ep_from_element(parse_word("A", 2));
  bool have_pos = point_is_ep(o.points[0], a_inf) || point_is_ep(o.points[1], a_inf);
  bool have_neg = point_is_ep(o.points[0], a_neg) || point_is_ep(o.points[1], a_neg);
  return have_pos && have_neg && verify_cycle(b, o, 64);
}

// 4. double limit: baD tends to b.a^-inf both forward and backward
bool criterion4() {
  Automorphism g = hilion();
  EventuallyPeriodicWord target =
      ep_normalize(parse_word("b", 4), parse_word("A", 4));
  for (const Automorphism& m : {g, g.inverted()}) {
    OmegaLimit o = omega_limit(m, parse_word("baD", 4));
    if (!o.certified() || o.period != 1 || o.cert_depth < 32 ||
        !point_is_ep(o.points[0], target))
      return false;
  }
  return true;
}

// 5. census of the (12)(345) permutation: periods exactly {1,2,3,6}
bool criterion5() {
  Automorphism p =
      from_text("rank 5\na -> b\nb -> a\nc -> d\nd -> e\ne -> c\n");
  std::vector<EventuallyPeriodicWord> seeds = {
      ep_from_element(parse_word("a", 5)), ep_from_element(parse_word("c", 5)),
      ep_from_element(parse_word("ac", 5))};
  PeriodCensus census = periods_census(p, 2, seeds, 60);
  return census.periods == std::set<int>{1, 2, 3, 6} &&
         census.uncertified_seeds.empty();
}

// 6. PF enclosure against interval bisection on x^2 - x - 1
bool criterion6() {
  TransitionMatrix m(2, 2);
  m << 1, 1, 1, 0;
  PFData pf = pf_data(m, 1e-10);
  auto poly = [](double x) { return x * x - x - 1; };
  double lo = 1, hi = 2;
  for (int i = 0; i < 80; ++i) {
    double mid = (lo + hi) / 2;
    (poly(mid) < 0 ? lo : hi) = mid;
  }
  double root = (lo + hi) / 2;  // accurate to ~2^-80
  return pf.lambda_hi - pf.lambda_lo <= 1e-9 && pf.lambda_lo <= root &&
         root <= pf.lambda_hi;
}

// 7. length scaling on 20 random hyperbolic classes
bool criterion7() {
  Automorphism alpha = fib();
  TrainTrackResult r = try_make_train_track(rose_from_automorphism(alpha));
  if (!r.resolved()) return false;
  PFData pf = pf_data(transition_matrix(*r.map), 1e-12);
  std::mt19937_64 rng(7);
  int tested = 0;
  for (int guard = 0; tested < 20 && guard < 200; ++guard) {
    ReducedWord g = random_reduced_word(2, 2 + guard % 5, rng);
    LengthReport lg = translation_length(*r.map, pf, g);
    if (!lg.converged || lg.value < 1e-3) continue;  // hyperbolic classes only
    LengthReport lag = translation_length(*r.map, pf, apply(alpha, g));
    if (!lag.converged) return false;
    if (std::abs(lag.value - pf.lambda * lg.value) >
        1e-6 * std::max(1.0, lg.value))
      return false;
    ++tested;
  }
  return tested == 20;
}

// 8. twisted-product identities on 200 random pairs
bool criterion8() {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    Automorphism alpha = random_automorphism(3, 6, rng);
    ReducedWord w = random_reduced_word(3, 1 + trial % 4, rng);
    std::vector<ReducedWord> seq = w_sequence(alpha, w, 12);
    for (int p = 1; p < 12; ++p)
      if (seq[p] != multiply(apply(alpha, seq[p - 1]), w)) return false;
    for (int p = 1; p <= 12; ++p)
      if (seq[p - 1].empty() && apply(power(alpha, p), w) != w) return false;
  }
  return true;
}

// 9. inversion round-trip on 100 random automorphisms of F_4
bool criterion9() {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    Automorphism built = random_automorphism(4, 1 + trial % 15, rng);
    InversionResult r = verify_and_invert(built.forward());
    if (!r.ok()) return false;
    Endomorphism fwd_inv = compose(r.automorphism->forward(),
                                   r.automorphism->inverse());
    Endomorphism inv_fwd = compose(r.automorphism->inverse(),
                                   r.automorphism->forward());
    if (fwd_inv != Endomorphism::identity(4) ||
        inv_fwd != Endomorphism::identity(4))
      return false;
  }
  return true;
}

// 10. asymptotic-periodicity sweep: certification rate and cyclicity
bool criterion10() {
  std::mt19937_64 rng(10);
  int certified = 0, total = 0;
  for (int i = 0; i < 50; ++i) {
    Automorphism alpha = random_automorphism(3, 1 + i % 8, rng);
    std::vector<OmegaLimit> limits;
    for (int s = 0; s < 6; ++s) {
      ReducedWord g = random_reduced_word(3, 1 + s % 4, rng);
      limits.push_back(omega_limit(alpha, g));
    }
    for (int s = 0; s < 4; ++s) {
      ReducedWord g = random_reduced_word(3, 1 + s % 2, rng);
      if (g.empty()) g = parse_word("a", 3);
      limits.push_back(omega_limit_boundary(alpha, ep_from_element(g)));
    }
    for (const OmegaLimit& o : limits) {
      ++total;
      if (o.status == OmegaStatus::kNoConvergenceDetected) continue;
      if (o.period > 60) continue;
      if (o.certified() && !verify_cycle(alpha, o, 64)) return false;
      ++certified;
    }
  }
  return total == 500 && certified * 100 >= total * 95;
}

// 11. product of trees: elliptic sets agree, epsilon bounded away from 0
bool criterion11() {
  std::mt19937_64 rng(11);
  std::vector<ReducedWord> sample = {parse_word("a", 2)};
  for (int i = 0; i < 29; ++i)
    sample.push_back(random_reduced_word(2, 2 + i % 5, rng));
  ProductTreesReport rep = product_trees_check(fib(), sample);
  return rep.prerequisites_ok && rep.rows.size() == 30 &&
         rep.one_sided_elliptic == 0 && rep.epsilon > 0;
}

// 12. exact illegal-turn inequality, exhaustive over short paths
bool criterion12() {
  GraphMap f = rose_from_automorphism(fib());
  PFData pf = pf_data(transition_matrix(f), 1e-12);
  TurnStructure ts = gates(f);
  double c1 = pf.edge_lengths.minCoeff();
  std::vector<EdgePath> frontier = {{}};
  for (int len = 1; len <= 8; ++len) {
    std::vector<EdgePath> next;
    for (const EdgePath& p : frontier)
      for (int e = 0; e < f.graph.num_directions(); ++e) {
        if (!p.empty() && e == edge_reverse(p.back())) continue;
        EdgePath q = p;
        q.push_back(e);
        double pf_len = 0;
        for (int d : q) pf_len += pf.edge_lengths(edge_pair(d));
        if (c1 * ilt_count(ts, q) > pf_len + 1e-12) return false;
        next.push_back(std::move(q));
      }
    frontier = std::move(next);
  }
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*run)();
    double budget_s;
  };
  const Criterion criteria[] = {
      {"intro golden orbit and certified periods", criterion1, 1.0},
      {"fix-words, half-half center, two-sided basins", criterion2, 1.0},
      {"square of the involution-like map; period-2 boundary orbit",
       criterion3, 1.0},
      {"double limit b.a^-inf forward and backward", criterion4, 5.0},
      {"permutation census {1,2,3,6}", criterion5, 10.0},
      {"PF enclosure vs bisection oracle", criterion6, 0.1},
      {"length scaling on 20 random hyperbolic classes", criterion7, 10.0},
      {"twisted-product identities, 200 random pairs", criterion8, 10.0},
      {"inversion round-trip, 100 random automorphisms", criterion9, 10.0},
      {"asymptotic-periodicity sweep, 500 orbits", criterion10, 300.0},
      {"product-of-trees sample check", criterion11, 60.0},
      {"exact illegal-turn inequality, exhaustive", criterion12, 30.0},
  };
  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string error;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    bool in_budget = elapsed <= c.budget_s;
    if (ok && in_budget) {
      std::printf("pass  %2d  %s (%.2fs)\n", index, c.name, elapsed);
    } else {
      ++failures;
      std::printf("FAIL  %2d  %s (%.2fs%s%s)\n", index, c.name, elapsed,
                  in_budget ? "" : ", over budget",
                  error.empty() ? "" : (", " + error).c_str());
    }
  }
  std::printf("%d/12 criteria passed\n", 12 - failures);
  return failures;
}
