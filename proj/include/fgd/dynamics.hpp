#pragma once

// Orbit iteration on F_k and its boundary: limit-cycle detection with
// finite-depth stabilization certificates, fixed point classification,
// w_p machinery, period censuses and the bipartite limit graph.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fgd/automorphisms.hpp"
#include "fgd/words.hpp"

namespace fgd {

struct OrbitTrace {
  ReducedWord start;
  std::vector<ReducedWord> terms;    // terms[n] = alpha^n(start)
  std::vector<std::size_t> lengths;  // per-term word lengths
};

OrbitTrace orbit(const Automorphism& alpha, const ReducedWord& g, int n_max);

/// Budgets for limit detection.  A limit claim requires length-cert_depth
/// prefixes to agree across `window` consecutive subsequence samples; when
/// iteration stops early (length cap) the window may relax down to
/// min_window.  Budget exhaustion is never a negative claim.
struct LimitBudget {
  int q_max = 60;
  int n_max = 400;
  std::size_t cert_depth = 64;
  int window = 8;
  int min_window = 3;
  std::size_t term_length_cap = 4000000;
  std::size_t prefix_store = 256;
};

/// A boundary point known through a certified finite prefix.
struct PrefixPoint {
  ReducedWord prefix;
  std::size_t depth = 0;  // certified depth (<= prefix.size())
};

using LimitPoint = std::variant<EventuallyPeriodicWord, PrefixPoint>;

ReducedWord point_prefix(const LimitPoint& p, std::size_t n);
std::size_t point_depth(const LimitPoint& p);
bool point_agrees(const LimitPoint& a, const LimitPoint& b, std::size_t depth);
std::string point_to_string(const LimitPoint& p);

enum class OmegaStatus {
  kCertified,              // limit cycle certified at the stated depth
  kPeriodicWord,           // the word sequence itself is (pre)periodic
  kNoConvergenceDetected,  // budget exhausted; not a claim of divergence
};

struct OmegaLimit {
  OmegaStatus status = OmegaStatus::kNoConvergenceDetected;
  int period = 0;                 // q (certified or exact)
  std::vector<LimitPoint> points; // cyclically permuted by the boundary map
  // certificate
  std::size_t cert_depth = 0;
  int window_used = 0;
  std::size_t start_index = 0;
  std::size_t terms_used = 0;
  std::vector<ReducedWord> finite_cycle;  // kPeriodicWord only

  bool certified() const { return status == OmegaStatus::kCertified; }
};

OmegaLimit omega_limit(const Automorphism& alpha, const ReducedWord& g,
                       const LimitBudget& budget = {});

OmegaLimit omega_limit_boundary(const Automorphism& alpha,
                                const EventuallyPeriodicWord& x,
                                const LimitBudget& budget = {});
OmegaLimit omega_limit_boundary(const Automorphism& alpha,
                                const BoundaryPrefixOracle& x,
                                const LimitBudget& budget = {});

/// Checks that applying the boundary map to point j reproduces point j+1
/// (mod q) to the given depth.
bool verify_cycle(const Automorphism& alpha, const OmegaLimit& limit,
                  std::size_t depth);

// -- w_p machinery (twisted products) ---------------------------------------

/// w_1 = w, w_{p+1} = alpha(w_p).w; returns w_1..w_{p_max}.
std::vector<ReducedWord> w_sequence(const Automorphism& alpha,
                                    const ReducedWord& w, int p_max);

/// Limit cycle of the sequence w_p; reports kPeriodicWord when the
/// sequence itself repeats.
OmegaLimit w_sequence_limit(const Automorphism& alpha, const ReducedWord& w,
                            const LimitBudget& budget = {});

// -- periodic elements -------------------------------------------------------

std::vector<ReducedWord> fixed_words(const Automorphism& alpha, int len_max);

struct PeriodicWord {
  ReducedWord word;
  int period;
};
std::vector<PeriodicWord> periodic_words(const Automorphism& alpha, int len_max,
                                         int p_max);

// -- fixed point classification ----------------------------------------------

enum class FixedPointKind {
  kAttracting,
  kRepelling,
  kHalfHalf,
  kInBoundaryOfFixedSubgroup,
  kUndetermined,
};

struct PerturbationOutcome {
  ReducedWord seed;
  bool returns_forward = false;
  bool returns_backward = false;
};

struct FixedPointClass {
  FixedPointKind kind = FixedPointKind::kUndetermined;
  std::vector<PerturbationOutcome> evidence;
};

std::string to_string(FixedPointKind k);

/// Perturbation test at depths 4, 8, 16, 32 (capped by max_depth): replace
/// the next letter of x by each alternative that keeps the seed reduced and
/// iterate both ways.
FixedPointClass classify_fixed_point(const Automorphism& alpha,
                                     const LimitPoint& x,
                                     std::size_t max_depth = 32,
                                     const LimitBudget& budget = {});

// -- the bipartite limit graph -----------------------------------------------

struct GammaEdge {
  std::size_t repelling_vertex;
  std::size_t attracting_vertex;
  ReducedWord witness_seed;
};

struct GammaGraph {
  std::vector<LimitPoint> repelling;
  std::vector<LimitPoint> attracting;
  std::vector<GammaEdge> edges;
  std::vector<ReducedWord> unresolved_seeds;
};

GammaGraph gamma_graph(const Automorphism& alpha,
                       const std::vector<ReducedWord>& seeds,
                       const LimitBudget& budget = {});

std::string gamma_to_dot(const GammaGraph& g);

// -- censuses and rates ------------------------------------------------------

struct PeriodCensus {
  std::set<int> periods;
  std::vector<EventuallyPeriodicWord> uncertified_seeds;
};

PeriodCensus periods_census(const Automorphism& alpha, int word_len_max,
                            const std::vector<EventuallyPeriodicWord>& seeds,
                            int q_max);

enum class GrowthKind { kExponential, kNonExponential, kInconclusive };

struct AttractionRate {
  GrowthKind kind = GrowthKind::kInconclusive;
  double lambda = 1.0;  // meaningful for kExponential
};

AttractionRate attraction_rate(const Automorphism& alpha, const ReducedWord& g,
                               int n_max = 60);

// -- positive index search ---------------------------------------------------

struct PositiveIndexResult {
  bool found = false;
  int q = 0;
  ReducedWord w = ReducedWord(2);
  int fixed_points_found = 0;
};

/// Searches twists i_w o alpha^q for one whose boundary map has at least
/// four certified fixed points.  Exhausting the budget is not a refutation.
PositiveIndexResult positive_index_search(const Automorphism& alpha, int q_max,
                                          int w_len_max, int budget,
                                          const LimitBudget& lb = {});

}  // namespace fgd
