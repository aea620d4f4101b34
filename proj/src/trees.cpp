#include "fgd/trees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fgd {

namespace {

std::vector<int> top_pairs(const GraphMap& f) {
  std::vector<int> pairs;
  for (int k = 0; k < f.graph.num_pairs(); ++k)
    if (f.stratum[k] == Stratum::kTop) pairs.push_back(k);
  return pairs;
}

double pf_length(const PFData& pf, const std::vector<int>& pairs,
                 const EdgePath& p) {
  double len = 0;
  for (int e : p)
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (pairs[i] == edge_pair(e)) {
        len += pf.edge_lengths(static_cast<int>(i));
        break;
      }
  return len;
}

bool cyclically_legal(const TurnStructure& ts, const EdgePath& p) {
  if (p.empty()) return true;
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (ts.is_illegal(edge_reverse(p[i]), p[i + 1])) return false;
  return !ts.is_illegal(edge_reverse(p.back()), p.front());
}

}  // namespace

EdgePath cyclic_tighten(const EdgePath& p) {
  EdgePath t = tighten(p);
  std::size_t lo = 0, hi = t.size();
  while (hi - lo >= 2 && t[lo] == edge_reverse(t[hi - 1])) {
    ++lo;
    --hi;
  }
  return EdgePath(t.begin() + lo, t.begin() + hi);
}

EdgePath marked_loop(const MarkedGraph& g, const ReducedWord& w) {
  EdgePath loop;
  for (const Letter& l : w.letters()) {
    const EdgePath& m = g.marking.at(l.index);
    if (l.sign > 0)
      loop.insert(loop.end(), m.begin(), m.end());
    else {
      EdgePath r = reverse_path(m);
      loop.insert(loop.end(), r.begin(), r.end());
    }
  }
  return cyclic_tighten(loop);
}

LengthReport translation_length(const GraphMap& f, const PFData& pf,
                                const ReducedWord& g, int p_max, double tol) {
  LengthReport rep;
  rep.element = g;
  rep.class_key = to_string(conjugacy_key(g));
  const std::vector<int> pairs = top_pairs(f);
  const TurnStructure ts = gates(f);
  const std::size_t loop_cap = 400000;

  EdgePath loop = marked_loop(f.graph, g);
  double lam_p_lo = 1, lam_p_hi = 1;  // enclosures of lambda^p
  for (int p = 0; p <= p_max; ++p) {
    if (loop.empty()) {
      rep.value = 0;
      rep.enclosure = 0;
      rep.converged = true;
      rep.exact = true;
      rep.legal_at_p = p;
      rep.estimates.push_back(0);
      return rep;
    }
    double len = pf_length(pf, pairs, loop);
    double est = len / ((lam_p_lo + lam_p_hi) / 2);
    rep.estimates.push_back(est);
    if (cyclically_legal(ts, loop)) {
      // legal loops scale exactly by lambda: the limit is reached
      rep.value = est;
      rep.enclosure = len / lam_p_lo - len / lam_p_hi;
      rep.converged = true;
      rep.exact = true;
      rep.legal_at_p = p;
      return rep;
    }
    // Persistent illegal turns shed a near-constant PF-length per step, so
    // the deficit c_p = (est_{p-1} - est_p).lambda^p stabilizes and the
    // remaining tail is a geometric series; the spread of recent deficits
    // bounds the extrapolation error.
    const std::size_t ne = rep.estimates.size();
    if (ne >= 5) {
      double lam = (pf.lambda_lo + pf.lambda_hi) / 2;
      double lam_p = (lam_p_lo + lam_p_hi) / 2;
      double c_lo = std::numeric_limits<double>::infinity(), c_hi = 0;
      for (std::size_t q = ne - 3; q < ne; ++q) {
        double d = rep.estimates[q - 1] - rep.estimates[q];
        double c = d * lam_p / std::pow(lam, static_cast<double>(ne - 1 - q));
        c_lo = std::min(c_lo, c);
        c_hi = std::max(c_hi, c);
      }
      double tail_lo = c_lo / (lam_p * (lam - 1));
      double tail_hi = c_hi / (lam_p * (lam - 1));
      double width = tail_hi - tail_lo;
      if (width <= tol * std::max(1.0, est) || c_hi <= tol) {
        rep.value = est - (tail_lo + tail_hi) / 2;
        rep.enclosure = width + (len / lam_p_lo - len / lam_p_hi);
        rep.converged = true;
        return rep;
      }
    }
    loop = cyclic_tighten(map_path(f, loop, 1));
    lam_p_lo *= pf.lambda_lo;
    lam_p_hi *= pf.lambda_hi;
    if (loop.size() > loop_cap) break;
  }
  rep.value = rep.estimates.empty() ? 0 : rep.estimates.back();
  rep.converged = false;
  return rep;
}

std::string to_string(Ellipticity e) {
  switch (e) {
    case Ellipticity::kElliptic:
      return "elliptic";
    case Ellipticity::kHyperbolic:
      return "hyperbolic";
    case Ellipticity::kUndetermined:
      return "undetermined";
  }
  return "undetermined";
}

Ellipticity ellipticity_check(const GraphMap& f, const PFData& pf,
                              const ReducedWord& g, const Automorphism* alpha) {
  LengthReport rep = translation_length(f, pf, g);
  Ellipticity by_length = Ellipticity::kUndetermined;
  const double zero_slack = 1e-7;
  if (rep.converged) {
    if (rep.exact)
      by_length = rep.value > 0 ? Ellipticity::kHyperbolic
                                : Ellipticity::kElliptic;
    else if (rep.value - rep.enclosure > zero_slack)
      by_length = Ellipticity::kHyperbolic;
    else if (rep.value + rep.enclosure < zero_slack)
      by_length = Ellipticity::kElliptic;
  }
  if (alpha && by_length != Ellipticity::kUndetermined) {
    // invariance of the conjugacy class forces ellipticity; disagreement
    // with the length criterion is surfaced, never silently resolved
    bool invariant =
        conjugacy_key(apply(*alpha, g)) == conjugacy_key(g) && !g.empty();
    if (invariant && by_length == Ellipticity::kHyperbolic)
      return Ellipticity::kUndetermined;
  }
  return by_length;
}

ProductTreesReport product_trees_check(const Automorphism& alpha,
                                       const std::vector<ReducedWord>& sample,
                                       double eps_report) {
  ProductTreesReport report;
  TrainTrackResult fwd = try_make_train_track(rose_from_automorphism(alpha));
  TrainTrackResult bwd =
      try_make_train_track(rose_from_automorphism(alpha.inverted()));
  if (!fwd.resolved() || !bwd.resolved()) {
    report.status = "prerequisite unresolved: no train track representative";
    return report;
  }
  PFData pf_f, pf_b;
  try {
    pf_f = pf_data(transition_matrix(*fwd.map));
    pf_b = pf_data(transition_matrix(*bwd.map));
  } catch (const std::runtime_error& e) {
    report.status = std::string("prerequisite unresolved: ") + e.what();
    return report;
  }
  report.prerequisites_ok = true;
  report.status = "ok";
  double eps = std::numeric_limits<double>::infinity();
  for (const ReducedWord& g : sample) {
    ProductTreesRow row;
    row.element = g;
    row.class_key = to_string(conjugacy_key(g));
    row.in_t = ellipticity_check(*fwd.map, pf_f, g, &alpha);
    LengthReport lf = translation_length(*fwd.map, pf_f, g);
    row.length_t = lf.value;
    Automorphism inv = alpha.inverted();
    row.in_t_inv = ellipticity_check(*bwd.map, pf_b, g, &inv);
    LengthReport lb = translation_length(*bwd.map, pf_b, g);
    row.length_t_inv = lb.value;
    if ((row.in_t == Ellipticity::kElliptic &&
         row.in_t_inv == Ellipticity::kHyperbolic) ||
        (row.in_t == Ellipticity::kHyperbolic &&
         row.in_t_inv == Ellipticity::kElliptic))
      ++report.one_sided_elliptic;
    if (row.in_t == Ellipticity::kHyperbolic &&
        row.in_t_inv == Ellipticity::kHyperbolic)
      eps = std::min(eps, std::max(row.length_t, row.length_t_inv));
    report.rows.push_back(std::move(row));
  }
  report.epsilon = std::isfinite(eps) ? eps : eps_report;
  return report;
}

}  // namespace fgd
