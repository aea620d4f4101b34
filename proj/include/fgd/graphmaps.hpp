#pragma once

// Marked graphs and graph self-maps: tightening and iteration, transition
// matrices and strata, Perron-Frobenius data with certified enclosures,
// gates and illegal turns, elementary moves, and Nielsen path search.

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgd/automorphisms.hpp"

namespace fgd {

/// Oriented edges are integers in [0, 2m): edge pair i is {2i, 2i+1} with
/// 2i+1 the reverse of 2i.
inline int edge_reverse(int e) { return e ^ 1; }
inline int edge_pair(int e) { return e >> 1; }
inline int edge_forward(int pair) { return 2 * pair; }

/// Sequence of oriented edges; tightened form has no e.reverse(e).
using EdgePath = std::vector<int>;

EdgePath reverse_path(const EdgePath& p);
EdgePath tighten(const EdgePath& p);

struct MarkedGraph {
  int num_vertices = 0;
  int rank = 0;
  std::vector<int> edge_from;  // indexed by oriented edge, size 2m
  std::vector<int> edge_to;
  // Marking: a loop at vertex 0 per generator of F_rank.
  std::vector<EdgePath> marking;

  int num_pairs() const { return static_cast<int>(edge_from.size()) / 2; }
  int num_directions() const { return static_cast<int>(edge_from.size()); }
  bool path_valid(const EdgePath& p) const;
  /// connected and first Betti number == rank
  void check_invariants() const;
};

enum class Stratum { kTop, kZero };

struct GraphMap {
  MarkedGraph graph;
  std::vector<int> vertex_image;     // per vertex
  std::vector<EdgePath> edge_image;  // per edge pair (image of the even rep)
  std::vector<Stratum> stratum;      // per edge pair
  // Shortcut zero edges: pair index -> the Nielsen path the retraction
  // sends the edge over.
  std::vector<std::pair<int, EdgePath>> shortcuts;

  EdgePath image_of(int oriented_edge) const;
  void check_invariants() const;
};

GraphMap rose_from_automorphism(const Automorphism& alpha);
/// Rose map directly from generator images (no invertibility requirement).
GraphMap rose_from_endomorphism(const Endomorphism& phi);

/// tighten(f^n(p)), computed with intermediate tightening; n = 0 tightens.
EdgePath map_path(const GraphMap& f, const EdgePath& p, int n);

using TransitionMatrix =
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Entry (e, e') counts occurrences of e' and its reverse in the image of
/// e, both restricted to the given edge pairs (default: all top edges).
TransitionMatrix transition_matrix(const GraphMap& f,
                                   const std::vector<int>& pairs);
TransitionMatrix transition_matrix(const GraphMap& f);

struct ZeroMatrixError : std::runtime_error {
  ZeroMatrixError() : std::runtime_error("zero transition matrix") {}
};
struct ReducibleMatrixError : std::runtime_error {
  ReducibleMatrixError() : std::runtime_error("reducible transition matrix") {}
};

struct PFData {
  TransitionMatrix matrix;
  double lambda = 0;  // midpoint of the enclosure
  double lambda_lo = 0;
  double lambda_hi = 0;
  Eigen::VectorXd edge_lengths;  // positive, sum 1
};

/// Perron-Frobenius eigenvalue by power iteration with Collatz-Wielandt
/// enclosures; requires an irreducible nonnegative matrix.
PFData pf_data(const TransitionMatrix& m, double tol = 1e-9);

enum class StratumClass { kExponential, kPolynomial, kZero };

struct StratumInfo {
  std::vector<int> pairs;  // edge pairs in this stratum
  StratumClass cls;
  std::optional<PFData> pf;  // exponential strata only
};

/// Strongly connected components of the edge transition digraph in a
/// filtration-compatible order (lower strata first).
std::vector<StratumInfo> strata(const GraphMap& f);

struct TurnStructure {
  std::vector<int> gate;  // per direction: gate id
  bool is_illegal(int d1, int d2) const {
    return d1 != d2 && gate[d1] == gate[d2];
  }
};

/// Gates as the stable partition under iterated derivative-map
/// identification; throws if not stabilized within (#directions)^2 rounds.
TurnStructure gates(const GraphMap& f, int depth_budget = 0);

/// Illegal turns crossed by the tightened path.
int ilt_count(const TurnStructure& ts, const EdgePath& p);

/// True iff no iterate f^m(e), m <= n_check, crosses an illegal turn.
bool is_train_track(const GraphMap& f, int n_check = 4);

// -- elementary moves --------------------------------------------------------

struct InvalidSiteError : std::runtime_error {
  explicit InvalidSiteError(const std::string& what) : std::runtime_error(what) {}
};

enum class BHMoveKind {
  kSubdivide,
  kFold,
  kCollapseInvariantForest,
  kRemoveValenceOne,
  kRemoveValenceTwo,
};

struct BHSite {
  int edge = -1;    // oriented: subdivide / fold first direction
  int other = -1;   // oriented: fold second direction
  int index = -1;   // subdivide: split position in the image path
  int vertex = -1;  // valence moves
  std::vector<int> forest_pairs;  // collapse
};

GraphMap bh_move(const GraphMap& f, BHMoveKind kind, const BHSite& site);

struct TrainTrackResult {
  std::optional<GraphMap> map;  // engaged on success
  std::vector<std::string> trace;
  bool resolved() const { return map.has_value(); }
};

/// Folds the illegal turn crossed by the shortest offending edge image
/// (ties by edge index) until is_train_track holds or the budget runs out.
TrainTrackResult try_make_train_track(const GraphMap& f, int budget = 100);

// -- Nielsen paths -----------------------------------------------------------

struct NielsenPath {
  EdgePath path;
  int illegal_turns = 0;
};

/// All tightened paths with <= 1 illegal turn, length <= len_budget,
/// f-fixed endpoints and map_path(f, p, 1) == p, up to orientation.
std::vector<NielsenPath> find_inps(const GraphMap& f, int len_budget);

struct InvalidINPError : std::runtime_error {
  InvalidINPError() : std::runtime_error("not an indivisible Nielsen path") {}
};

/// Adds a zero edge with the path's endpoints, mapped identically; the
/// retraction over the path is recorded in `shortcuts`.
GraphMap add_shortcut(const GraphMap& f, const EdgePath& inp);

// -- text format -------------------------------------------------------------
// vertices n / rank k / edge i: u v stratum=top|zero / image i: <path> /
// vmap v: w / marking g: <path>; paths are 1-based signed edge pairs.
std::string format_graph_map(const GraphMap& f);
GraphMap parse_graph_map(const std::string& text);

}  // namespace fgd
