#include "fgd/dynamics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace fgd {

namespace {

constexpr std::size_t kInfiniteLength = std::numeric_limits<std::size_t>::max();

ReducedWord truncate(const ReducedWord& w, std::size_t n) {
  if (w.size() <= n) return w;
  return ReducedWord(w.rank(),
                     std::vector<Letter>(w.letters().begin(),
                                         w.letters().begin() + n));
}

std::size_t prefix_hash(const ReducedWord& w, std::size_t depth) {
  std::size_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < depth && i < w.size(); ++i) {
    std::size_t v =
        static_cast<std::size_t>(w[i].index * 2 + (w[i].sign > 0 ? 0 : 1));
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

bool prefixes_equal(const ReducedWord& a, const ReducedWord& b,
                    std::size_t depth) {
  if (a.size() < depth || b.size() < depth) return false;
  for (std::size_t i = 0; i < depth; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

// One term of a word sequence, kept as a bounded prefix plus metadata.
struct TermRecord {
  ReducedWord prefix;
  std::size_t full_length;
  std::size_t cert_hash;  // hash of the first cert_depth letters
};

class LimitDetector {
 public:
  explicit LimitDetector(const LimitBudget& b) : b_(b) {}

  void feed(const ReducedWord& term, std::size_t full_length) {
    TermRecord rec{truncate(term, b_.prefix_store), full_length,
                   full_length >= b_.cert_depth
                       ? prefix_hash(term, b_.cert_depth)
                       : 0};
    hist_.push_back(std::move(rec));
  }

  // Smallest q <= q_max whose subsequence prefixes agree across
  // required_window consecutive samples in every residue class.
  std::optional<OmegaLimit> try_certify(int required_window) const {
    const int n = static_cast<int>(hist_.size());
    for (int q = 1; q <= b_.q_max; ++q) {
      if (n < q * required_window) break;
      if (certifies(q, required_window)) return build(q, required_window);
    }
    return std::nullopt;
  }

  const std::vector<TermRecord>& history() const { return hist_; }

 private:
  bool class_window(int q, int residue, int want, int* got,
                    int* deepest) const {
    const int n = static_cast<int>(hist_.size());
    int i = n - 1;
    while (i >= 0 && i % q != residue) --i;
    int count = 0;
    std::size_t ref = 0;
    *deepest = i;
    for (; i >= 0 && count < want; i -= q) {
      const TermRecord& r = hist_[i];
      if (r.full_length < b_.cert_depth) break;
      if (count == 0)
        ref = r.cert_hash;
      else if (r.cert_hash != ref)
        break;
      ++count;
    }
    *got = count;
    return count >= want;
  }

  bool certifies(int q, int want) const {
    for (int j = 0; j < q; ++j) {
      int got = 0, deepest = -1;
      if (!class_window(q, j, want, &got, &deepest)) return false;
    }
    // guard against hash collisions with a letter-exact pass
    for (int j = 0; j < q; ++j) {
      const int n = static_cast<int>(hist_.size());
      int i = n - 1;
      while (i >= 0 && i % q != j) --i;
      const ReducedWord& ref = hist_[i].prefix;
      for (int c = 1, k = i - q; c < want && k >= 0; ++c, k -= q)
        if (!prefixes_equal(ref, hist_[k].prefix, b_.cert_depth)) return false;
    }
    return true;
  }

  OmegaLimit build(int q, int want) const {
    OmegaLimit out;
    out.status = OmegaStatus::kCertified;
    out.period = q;
    out.cert_depth = b_.cert_depth;
    out.window_used = want;
    out.terms_used = hist_.size();
    out.start_index = hist_.size() >= static_cast<std::size_t>(q * want)
                          ? hist_.size() - q * want
                          : 0;
    for (int j = 0; j < q; ++j) {
      int got = 0, deepest = -1;
      class_window(q, j, want, &got, &deepest);
      const TermRecord& r = hist_[deepest];
      out.points.push_back(
          PrefixPoint{r.prefix, std::min(b_.cert_depth, r.prefix.size())});
    }
    return out;
  }

  LimitBudget b_;
  std::vector<TermRecord> hist_;
};

// Recognize an eventually periodic pattern in a stabilized prefix: the
// shortest period whose repetition covers >= 3 full copies up to depth.
std::optional<EventuallyPeriodicWord> recognize_ep(const ReducedWord& prefix,
                                                   std::size_t depth) {
  depth = std::min(depth, prefix.size());
  for (std::size_t per = 1; per * 3 <= depth; ++per) {
    std::size_t m = depth;
    while (m >= per + 1 && prefix[m - 1 - per] == prefix[m - 1]) --m;
    // pattern holds on [m-per, depth); prefix part is [0, m-per)
    std::size_t start = m - per;
    if (depth - start < 3 * per) continue;
    std::vector<Letter> u(prefix.letters().begin(),
                          prefix.letters().begin() + start);
    std::vector<Letter> c(prefix.letters().begin() + start,
                          prefix.letters().begin() + start + per);
    return ep_normalize(ReducedWord(prefix.rank(), std::move(u)),
                        ReducedWord(prefix.rank(), std::move(c)));
  }
  return std::nullopt;
}

// Promote prefix points to EP words when the pattern re-verifies under one
// more application of the boundary map (never fabricate a period).
void promote_points(OmegaLimit& limit, const Automorphism& alpha,
                    const LimitBudget& b) {
  if (limit.points.empty()) return;
  const int q = limit.period;
  std::vector<std::optional<EventuallyPeriodicWord>> candidates(q);
  for (int j = 0; j < q; ++j) {
    if (const auto* ep = std::get_if<EventuallyPeriodicWord>(&limit.points[j])) {
      candidates[j] = *ep;
      continue;
    }
    const auto& pp = std::get<PrefixPoint>(limit.points[j]);
    candidates[j] = recognize_ep(pp.prefix, b.cert_depth);
    if (!candidates[j]) return;
  }
  // The whole cycle must be exactly permuted by the boundary map; a prefix
  // match alone is not enough, since quasi-periodic rays (e.g. Sturmian
  // words) mimic a period over any shallow window.
  for (int j = 0; j < q; ++j) {
    EventuallyPeriodicWord image = apply_ep(alpha, *candidates[j]);
    if (!ep_equal(image, *candidates[(j + 1) % q])) return;
  }
  for (int j = 0; j < q; ++j) limit.points[j] = *candidates[j];
}

// Core driver for sequences of words t_{n+1} = step(t_n).
OmegaLimit run_word_sequence(const std::function<ReducedWord(const ReducedWord&)>& step,
                             const ReducedWord& start, const LimitBudget& b,
                             const Automorphism* promote_under) {
  LimitDetector detector(b);
  std::unordered_map<ReducedWord, int, ReducedWordHash> seen;
  const std::size_t exact_cap = 4096;

  ReducedWord t = start;
  for (int n = 0; n < b.n_max; ++n) {
    detector.feed(t, t.size());
    if (t.size() <= exact_cap) {
      auto it = seen.find(t);
      if (it != seen.end()) {
        OmegaLimit out;
        out.status = OmegaStatus::kPeriodicWord;
        out.period = n - it->second;
        out.terms_used = static_cast<std::size_t>(n);
        ReducedWord cur = t;
        for (int i = 0; i < out.period; ++i) {
          out.finite_cycle.push_back(cur);
          cur = step(cur);
        }
        return out;
      }
      seen.emplace(t, n);
    }

    if (auto cert = detector.try_certify(b.window)) {
      if (promote_under) promote_points(*cert, *promote_under, b);
      return *cert;
    }
    ReducedWord next = step(t);
    if (next.size() > b.term_length_cap) {
      detector.feed(next, next.size());
      break;
    }
    t = std::move(next);
  }
  for (int w = b.window; w >= b.min_window; --w) {
    if (auto cert = detector.try_certify(w)) {
      if (promote_under) promote_points(*cert, *promote_under, b);
      return *cert;
    }
  }
  OmegaLimit out;
  out.status = OmegaStatus::kNoConvergenceDetected;
  out.terms_used = detector.history().size();
  return out;
}

}  // namespace

OrbitTrace orbit(const Automorphism& alpha, const ReducedWord& g, int n_max) {
  OrbitTrace trace{g, {}, {}};
  ReducedWord t = g;
  for (int n = 0; n < n_max; ++n) {
    trace.terms.push_back(t);
    trace.lengths.push_back(t.size());
    if (n + 1 < n_max) t = apply(alpha, t);
  }
  return trace;
}

ReducedWord point_prefix(const LimitPoint& p, std::size_t n) {
  if (const auto* ep = std::get_if<EventuallyPeriodicWord>(&p))
    return ep_prefix(*ep, n);
  const auto& pp = std::get<PrefixPoint>(p);
  return truncate(pp.prefix, n);
}

std::size_t point_depth(const LimitPoint& p) {
  if (std::holds_alternative<EventuallyPeriodicWord>(p)) return kInfiniteLength;
  return std::get<PrefixPoint>(p).prefix.size();
}

bool point_agrees(const LimitPoint& a, const LimitPoint& b, std::size_t depth) {
  const auto* ea = std::get_if<EventuallyPeriodicWord>(&a);
  const auto* eb = std::get_if<EventuallyPeriodicWord>(&b);
  if (ea && eb) return ep_equal(*ea, *eb);
  std::size_t d = std::min({depth, point_depth(a), point_depth(b)});
  if (d == 0) return false;
  return prefixes_equal(point_prefix(a, d), point_prefix(b, d), d);
}

std::string point_to_string(const LimitPoint& p) {
  if (const auto* ep = std::get_if<EventuallyPeriodicWord>(&p))
    return to_string(*ep);
  const auto& pp = std::get<PrefixPoint>(p);
  std::string s = to_string(truncate(pp.prefix, 16));
  return s + "...";
}

OmegaLimit omega_limit(const Automorphism& alpha, const ReducedWord& g,
                       const LimitBudget& budget) {
  return run_word_sequence(
      [&alpha](const ReducedWord& t) { return apply(alpha, t); }, g, budget,
      &alpha);
}

OmegaLimit omega_limit_boundary(const Automorphism& alpha,
                                const EventuallyPeriodicWord& x,
                                const LimitBudget& budget) {
  // EP points have decidable equality, so look for an exact cycle first.
  std::unordered_map<std::string, int> seen;
  std::vector<EventuallyPeriodicWord> terms;
  EventuallyPeriodicWord cur = x;
  bool blew_up = false;
  for (int n = 0; n < budget.n_max; ++n) {
    const std::string key = to_string(cur);
    auto it = seen.find(key);
    if (it != seen.end()) {
      OmegaLimit out;
      out.status = OmegaStatus::kCertified;
      out.period = n - it->second;
      out.cert_depth = budget.cert_depth;
      out.window_used = 0;  // exact
      out.terms_used = static_cast<std::size_t>(n);
      for (int i = it->second; i < n; ++i) out.points.emplace_back(terms[i]);
      return out;
    }
    seen.emplace(key, n);
    terms.push_back(cur);
    if (cur.prefix.size() + cur.period.size() > budget.term_length_cap / 4) {
      blew_up = true;
      break;
    }
    cur = apply_ep(alpha, cur);
  }
  (void)blew_up;
  // No exact cycle within budget: certify on the prefix streams.
  LimitDetector detector(budget);
  for (const auto& t : terms)
    detector.feed(ep_prefix(t, budget.prefix_store), kInfiniteLength);
  for (int w = budget.window; w >= budget.min_window; --w) {
    if (auto cert = detector.try_certify(w)) {
      promote_points(*cert, alpha, budget);
      return *cert;
    }
  }
  OmegaLimit out;
  out.status = OmegaStatus::kNoConvergenceDetected;
  out.terms_used = terms.size();
  return out;
}

OmegaLimit omega_limit_boundary(const Automorphism& alpha,
                                const BoundaryPrefixOracle& x,
                                const LimitBudget& budget) {
  // Iterate on deep prefixes.  Cancellation can only affect the far tail;
  // the working depth keeps a generous margin over cert_depth, and any
  // claim is still only the finite-depth certificate.
  const std::size_t work_depth =
      std::max<std::size_t>(8 * budget.prefix_store, 1024);
  std::size_t depth0 = std::min(work_depth, x.stabilization_depth
                                                ? x.stabilization_depth
                                                : work_depth);
  ReducedWord cur = x.prefix_fn(depth0);
  LimitDetector detector(budget);
  for (int n = 0; n < budget.n_max; ++n) {
    detector.feed(cur, kInfiniteLength);
    if (auto cert = detector.try_certify(budget.window)) {
      promote_points(*cert, alpha, budget);
      return *cert;
    }
    cur = truncate(apply(alpha.forward(), cur), work_depth);
    if (cur.size() < budget.cert_depth) break;  // cancellation ate the margin
  }
  for (int w = budget.window; w >= budget.min_window; --w) {
    if (auto cert = detector.try_certify(w)) {
      promote_points(*cert, alpha, budget);
      return *cert;
    }
  }
  OmegaLimit out;
  out.status = OmegaStatus::kNoConvergenceDetected;
  out.terms_used = detector.history().size();
  return out;
}

bool verify_cycle(const Automorphism& alpha, const OmegaLimit& limit,
                  std::size_t depth) {
  if (!limit.certified() || limit.points.empty()) return false;
  const int q = limit.period;
  for (int j = 0; j < q; ++j) {
    const std::size_t deep =
        std::min(point_depth(limit.points[j]), depth * 4 + 64);
    ReducedWord image = apply(alpha, point_prefix(limit.points[j], deep));
    ReducedWord next = point_prefix(limit.points[(j + 1) % q], depth);
    if (image.size() < depth || next.size() < depth) return false;
    if (!prefixes_equal(image, next, depth)) return false;
  }
  return true;
}

std::vector<ReducedWord> w_sequence(const Automorphism& alpha,
                                    const ReducedWord& w, int p_max) {
  std::vector<ReducedWord> out;
  if (p_max <= 0) return out;
  out.push_back(w);
  for (int p = 1; p < p_max; ++p)
    out.push_back(multiply(apply(alpha, out.back()), w));
  return out;
}

OmegaLimit w_sequence_limit(const Automorphism& alpha, const ReducedWord& w,
                            const LimitBudget& budget) {
  return run_word_sequence(
      [&alpha, &w](const ReducedWord& t) {
        return multiply(apply(alpha, t), w);
      },
      w, budget, &alpha);
}

namespace {

// Minimal p <= p_max with alpha^p(w) = w; the length cap is a conservative
// prune (an orbit that exceeds it is treated as non-periodic).
std::optional<int> exact_period(const Automorphism& alpha, const ReducedWord& w,
                                int p_max, std::size_t length_cap) {
  ReducedWord t = w;
  for (int p = 1; p <= p_max; ++p) {
    t = apply(alpha, t);
    if (t == w) return p;
    if (t.size() > length_cap) return std::nullopt;
  }
  return std::nullopt;
}

void enumerate_reduced(const ReducedWord& cur, int len_max,
                       const std::function<void(const ReducedWord&)>& visit) {
  visit(cur);
  if (static_cast<int>(cur.size()) >= len_max) return;
  const int k = cur.rank();
  for (int i = 0; i < k; ++i)
    for (int s : {+1, -1}) {
      Letter l(i, s);
      if (!cur.empty() && cur.back().is_inverse_of(l)) continue;
      std::vector<Letter> next = cur.letters();
      next.push_back(l);
      enumerate_reduced(ReducedWord(cur.rank(), std::move(next)), len_max,
                        visit);
    }
}

}  // namespace

std::vector<PeriodicWord> periodic_words(const Automorphism& alpha, int len_max,
                                         int p_max) {
  std::vector<PeriodicWord> out;
  const std::size_t cap = 1000 * (static_cast<std::size_t>(len_max) + 1);
  enumerate_reduced(ReducedWord(alpha.rank()), len_max,
                    [&](const ReducedWord& w) {
                      if (w.empty()) {
                        out.push_back({w, 1});
                        return;
                      }
                      if (auto p = exact_period(alpha, w, p_max, cap))
                        out.push_back({w, *p});
                    });
  return out;
}

std::vector<ReducedWord> fixed_words(const Automorphism& alpha, int len_max) {
  std::vector<ReducedWord> out;
  for (const auto& pw : periodic_words(alpha, len_max, 1))
    out.push_back(pw.word);
  return out;
}

std::string to_string(FixedPointKind k) {
  switch (k) {
    case FixedPointKind::kAttracting: return "attracting";
    case FixedPointKind::kRepelling: return "repelling";
    case FixedPointKind::kHalfHalf: return "half-half";
    case FixedPointKind::kInBoundaryOfFixedSubgroup:
      return "in-boundary-of-fixed-subgroup";
    case FixedPointKind::kUndetermined: return "undetermined";
  }
  return "?";
}

namespace {

bool converges_to(const OmegaLimit& limit, const LimitPoint& x,
                  std::size_t depth) {
  if (!limit.certified() || limit.period != 1) return false;
  return point_agrees(limit.points[0], x, depth);
}

}  // namespace

FixedPointClass classify_fixed_point(const Automorphism& alpha,
                                     const LimitPoint& x,
                                     std::size_t max_depth,
                                     const LimitBudget& budget) {
  FixedPointClass out;
  const Automorphism backward = alpha.inverted();
  const int k = alpha.rank();
  for (std::size_t d : {std::size_t(4), std::size_t(8), std::size_t(16),
                        std::size_t(32)}) {
    if (d > max_depth || d + 1 > point_depth(x)) break;
    ReducedWord base = point_prefix(x, d);
    Letter next = point_prefix(x, d + 1).back();
    for (int i = 0; i < k; ++i)
      for (int s : {+1, -1}) {
        Letter l(i, s);
        if (l == next) continue;
        if (!base.empty() && base.back().is_inverse_of(l)) continue;
        std::vector<Letter> seed_letters = base.letters();
        seed_letters.push_back(l);
        ReducedWord seed(k, std::move(seed_letters));
        PerturbationOutcome o{seed, false, false};
        o.returns_forward =
            converges_to(omega_limit(alpha, seed, budget), x, budget.cert_depth);
        o.returns_backward = converges_to(omega_limit(backward, seed, budget),
                                          x, budget.cert_depth);
        out.evidence.push_back(std::move(o));
      }
  }
  bool all_fwd = true, all_bwd = true, any_fwd = false, any_bwd = false;
  bool each_one_side = true;
  for (const auto& o : out.evidence) {
    all_fwd = all_fwd && o.returns_forward;
    all_bwd = all_bwd && o.returns_backward;
    any_fwd = any_fwd || o.returns_forward;
    any_bwd = any_bwd || o.returns_backward;
    if (o.returns_forward == o.returns_backward) each_one_side = false;
  }
  if (out.evidence.empty()) {
    out.kind = FixedPointKind::kUndetermined;
  } else if (all_fwd && !any_bwd) {
    out.kind = FixedPointKind::kAttracting;
  } else if (all_bwd && !any_fwd) {
    out.kind = FixedPointKind::kRepelling;
  } else if (each_one_side && any_fwd && any_bwd) {
    out.kind = FixedPointKind::kHalfHalf;
  } else {
    // Mixed or inconclusive: report membership in the boundary of the
    // (enumerated) fixed subgroup when that is explicitly visible.
    out.kind = FixedPointKind::kUndetermined;
    for (const ReducedWord& g : fixed_words(alpha, 3)) {
      if (g.empty()) continue;
      if (point_agrees(LimitPoint(ep_from_element(g)), x, budget.cert_depth) ||
          point_agrees(LimitPoint(ep_from_element(invert(g))), x,
                       budget.cert_depth)) {
        out.kind = FixedPointKind::kInBoundaryOfFixedSubgroup;
        break;
      }
    }
  }
  return out;
}

GammaGraph gamma_graph(const Automorphism& alpha,
                       const std::vector<ReducedWord>& seeds,
                       const LimitBudget& budget) {
  GammaGraph g;
  const Automorphism backward = alpha.inverted();
  auto find_or_add = [&budget](std::vector<LimitPoint>& side,
                               const LimitPoint& p) {
    for (std::size_t i = 0; i < side.size(); ++i)
      if (point_agrees(side[i], p, 2 * budget.cert_depth)) return i;
    side.push_back(p);
    return side.size() - 1;
  };
  for (const ReducedWord& seed : seeds) {
    OmegaLimit fwd = omega_limit(alpha, seed, budget);
    OmegaLimit bwd = omega_limit(backward, seed, budget);
    if (!fwd.certified() || fwd.period != 1 || !bwd.certified() ||
        bwd.period != 1) {
      g.unresolved_seeds.push_back(seed);
      continue;
    }
    std::size_t a = find_or_add(g.attracting, fwd.points[0]);
    std::size_t r = find_or_add(g.repelling, bwd.points[0]);
    g.edges.push_back(GammaEdge{r, a, seed});
  }
  return g;
}

std::string gamma_to_dot(const GammaGraph& g) {
  std::ostringstream os;
  os << "digraph gamma {\n";
  for (std::size_t i = 0; i < g.repelling.size(); ++i)
    os << "  r" << i << " [shape=box, label=\"" << point_to_string(g.repelling[i])
       << "\"];\n";
  for (std::size_t i = 0; i < g.attracting.size(); ++i)
    os << "  a" << i << " [shape=ellipse, label=\""
       << point_to_string(g.attracting[i]) << "\"];\n";
  for (const GammaEdge& e : g.edges)
    os << "  r" << e.repelling_vertex << " -> a" << e.attracting_vertex
       << " [label=\"" << to_string(e.witness_seed) << "\"];\n";
  os << "}\n";
  return os.str();
}

PeriodCensus periods_census(const Automorphism& alpha, int word_len_max,
                            const std::vector<EventuallyPeriodicWord>& seeds,
                            int q_max) {
  PeriodCensus census;
  for (const auto& pw : periodic_words(alpha, word_len_max, q_max))
    census.periods.insert(pw.period);
  for (const auto& seed : seeds) {
    LimitBudget b;
    b.q_max = q_max;
    b.n_max = std::max(2 * q_max + 4, b.n_max);
    OmegaLimit lim = omega_limit_boundary(alpha, seed, b);
    // Only exact EP cycles count as boundary periods here.
    if (lim.certified() && lim.window_used == 0 && lim.period <= q_max) {
      census.periods.insert(lim.period);
    } else {
      census.uncertified_seeds.push_back(seed);
    }
  }
  return census;
}

AttractionRate attraction_rate(const Automorphism& alpha, const ReducedWord& g,
                               int n_max) {
  AttractionRate out;
  std::vector<double> lengths;
  ReducedWord t = g;
  const std::size_t cap = 2000000;
  for (int n = 0; n < n_max && t.size() <= cap; ++n) {
    lengths.push_back(static_cast<double>(std::max<std::size_t>(t.size(), 1)));
    t = apply(alpha, t);
  }
  const int window = 10;
  if (static_cast<int>(lengths.size()) < window + 2) {
    // hit the cap early: growth is clearly exponential, use the last ratios
    if (t.size() > cap && lengths.size() >= 3) {
      out.kind = GrowthKind::kExponential;
      out.lambda = std::pow(lengths.back() / lengths[lengths.size() - 3], 0.5);
      return out;
    }
    return out;
  }
  const std::size_t n = lengths.size();
  const double ratio =
      std::pow(lengths[n - 1] / lengths[n - 1 - window], 1.0 / window);
  if (ratio < 1.02) {
    out.kind = GrowthKind::kNonExponential;
    out.lambda = ratio;
  } else {
    out.kind = GrowthKind::kExponential;
    out.lambda = ratio;
  }
  return out;
}

PositiveIndexResult positive_index_search(const Automorphism& alpha, int q_max,
                                          int w_len_max, int budget,
                                          const LimitBudget& lb) {
  PositiveIndexResult best;
  best.w = ReducedWord(alpha.rank());
  int spent = 0;
  std::vector<ReducedWord> twist_words;
  enumerate_reduced(ReducedWord(alpha.rank()), w_len_max,
                    [&](const ReducedWord& w) { twist_words.push_back(w); });
  std::sort(twist_words.begin(), twist_words.end());

  for (int q = 1; q <= q_max && spent < budget; ++q) {
    for (const ReducedWord& w : twist_words) {
      if (spent++ >= budget) break;
      Automorphism beta = twist(alpha, w, q);
      std::vector<LimitPoint> fixed;
      auto add_point = [&fixed, &lb](const LimitPoint& p) {
        for (const auto& q2 : fixed)
          if (point_agrees(q2, p, lb.cert_depth)) return;
        fixed.push_back(p);
      };
      // endpoints of the (bounded) fixed subgroup
      for (const ReducedWord& g : fixed_words(beta, 3)) {
        if (g.empty()) continue;
        add_point(LimitPoint(ep_from_element(g)));
        add_point(LimitPoint(ep_from_element(invert(g))));
      }
      // attracting / repelling points from basis seeds
      const Automorphism beta_inv = beta.inverted();
      for (int i = 0; i < alpha.rank() && fixed.size() < 8; ++i)
        for (int s : {+1, -1}) {
          ReducedWord seed(alpha.rank(), {Letter(i, s)});
          OmegaLimit fwd = omega_limit(beta, seed, lb);
          if (fwd.certified() && fwd.period == 1) add_point(fwd.points[0]);
          OmegaLimit bwd = omega_limit(beta_inv, seed, lb);
          if (bwd.certified() && bwd.period == 1) add_point(bwd.points[0]);
        }
      if (static_cast<int>(fixed.size()) > best.fixed_points_found) {
        best.fixed_points_found = static_cast<int>(fixed.size());
        best.q = q;
        best.w = w;
      }
      if (fixed.size() >= 4) {
        best.found = true;
        return best;
      }
    }
  }
  return best;
}

}  // namespace fgd
