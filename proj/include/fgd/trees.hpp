#pragma once

// Numerical access to the invariant R-tree of a train track map: limit
// translation lengths, ellipticity detection, and the product-of-trees
// discreteness check.

#include <string>
#include <vector>

#include "fgd/graphmaps.hpp"

namespace fgd {

struct LengthReport {
  ReducedWord element = ReducedWord(2);
  std::string class_key;            // canonical conjugacy-class key
  std::vector<double> estimates;    // lambda^{-p} . PF-length of f^p(loop)
  double value = 0;
  double enclosure = 0;             // width of the certified enclosure
  bool converged = false;
  bool exact = false;               // the loop became legal (or trivial)
  int legal_at_p = -1;
};

/// Loop in the graph spelling g through the marking, cyclically tightened.
EdgePath marked_loop(const MarkedGraph& g, const ReducedWord& w);
EdgePath cyclic_tighten(const EdgePath& p);

/// Translation length of [g] in the tree of a train track map: the limit
/// of lambda^{-p} . PF-length of the cyclically tightened iterated loop,
/// exact as soon as the loop becomes legal.
LengthReport translation_length(const GraphMap& f, const PFData& pf,
                                const ReducedWord& g, int p_max = 40,
                                double tol = 1e-9);

enum class Ellipticity { kElliptic, kHyperbolic, kUndetermined };

std::string to_string(Ellipticity e);

/// Length criterion, cross-checked against invariance of the conjugacy
/// class when the automorphism is supplied; disagreement or an enclosure
/// straddling zero yields kUndetermined.
Ellipticity ellipticity_check(const GraphMap& f, const PFData& pf,
                              const ReducedWord& g,
                              const Automorphism* alpha = nullptr);

struct ProductTreesRow {
  ReducedWord element = ReducedWord(2);
  std::string class_key;
  Ellipticity in_t = Ellipticity::kUndetermined;
  Ellipticity in_t_inv = Ellipticity::kUndetermined;
  double length_t = 0;
  double length_t_inv = 0;
};

struct ProductTreesReport {
  bool prerequisites_ok = false;  // train tracks found for alpha and inverse
  std::string status;
  std::vector<ProductTreesRow> rows;
  int one_sided_elliptic = 0;  // violations of equal ellipticity
  double epsilon = 0;          // min over hyperbolic rows of max(l, l')
};

/// Theorem-style sample check: every class should be elliptic in both
/// trees or hyperbolic in both, with max(l, l') bounded away from zero.
ProductTreesReport product_trees_check(const Automorphism& alpha,
                                       const std::vector<ReducedWord>& sample,
                                       double eps_report = 0.0);

}  // namespace fgd
