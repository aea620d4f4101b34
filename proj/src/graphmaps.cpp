#include "fgd/graphmaps.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>

namespace fgd {

namespace {

void append_tight(EdgePath& out, int e) {
  if (!out.empty() && out.back() == edge_reverse(e))
    out.pop_back();
  else
    out.push_back(e);
}

void append_tight(EdgePath& out, const EdgePath& p) {
  for (int e : p) append_tight(out, e);
}

}  // namespace

EdgePath reverse_path(const EdgePath& p) {
  EdgePath out;
  out.reserve(p.size());
  for (auto it = p.rbegin(); it != p.rend(); ++it)
    out.push_back(edge_reverse(*it));
  return out;
}

EdgePath tighten(const EdgePath& p) {
  EdgePath out;
  out.reserve(p.size());
  append_tight(out, p);
  return out;
}

bool MarkedGraph::path_valid(const EdgePath& p) const {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0 || p[i] >= num_directions()) return false;
    if (i + 1 < p.size() && edge_to[p[i]] != edge_from[p[i + 1]]) return false;
  }
  return true;
}

void MarkedGraph::check_invariants() const {
  // connectivity
  std::vector<char> seen(num_vertices, 0);
  std::queue<int> bfs;
  bfs.push(0);
  seen[0] = 1;
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int e = 0; e < num_directions(); ++e)
      if (edge_from[e] == v && !seen[edge_to[e]]) {
        seen[edge_to[e]] = 1;
        bfs.push(edge_to[e]);
      }
  }
  for (char s : seen)
    if (!s) throw std::logic_error("graph: not connected");
  if (static_cast<int>(marking.size()) != rank)
    throw std::logic_error("graph: marking size != rank");
  for (const EdgePath& m : marking) {
    if (!path_valid(m)) throw std::logic_error("graph: invalid marking path");
    if (!m.empty() && (edge_from[m.front()] != 0 || edge_to[m.back()] != 0))
      throw std::logic_error("graph: marking not a loop at the basepoint");
  }
}

EdgePath GraphMap::image_of(int e) const {
  if ((e & 1) == 0) return edge_image[edge_pair(e)];
  return reverse_path(edge_image[edge_pair(e)]);
}

void GraphMap::check_invariants() const {
  graph.check_invariants();
  // first Betti number = rank, plus one per shortcut zero edge
  if (graph.num_pairs() - (graph.num_vertices - 1) !=
      graph.rank + static_cast<int>(shortcuts.size()))
    throw std::logic_error("map: first Betti number != rank");
  if (static_cast<int>(vertex_image.size()) != graph.num_vertices ||
      static_cast<int>(edge_image.size()) != graph.num_pairs() ||
      static_cast<int>(stratum.size()) != graph.num_pairs())
    throw std::logic_error("map: size mismatch");
  for (int k = 0; k < graph.num_pairs(); ++k) {
    const EdgePath& p = edge_image[k];
    if (!graph.path_valid(p)) throw std::logic_error("map: invalid image path");
    int u = vertex_image[graph.edge_from[2 * k]];
    int v = vertex_image[graph.edge_to[2 * k]];
    if (p.empty()) {
      if (u != v) throw std::logic_error("map: collapsed edge endpoints differ");
    } else if (graph.edge_from[p.front()] != u || graph.edge_to[p.back()] != v) {
      throw std::logic_error("map: image endpoints do not match vertex images");
    }
  }
}

GraphMap rose_from_endomorphism(const Endomorphism& phi) {
  const int k = phi.rank();
  GraphMap f;
  f.graph.num_vertices = 1;
  f.graph.rank = k;
  f.graph.edge_from.assign(2 * k, 0);
  f.graph.edge_to.assign(2 * k, 0);
  for (int i = 0; i < k; ++i) f.graph.marking.push_back({2 * i});
  f.vertex_image = {0};
  for (int i = 0; i < k; ++i) {
    EdgePath p;
    for (const Letter& l : phi.image(i).letters())
      p.push_back(2 * l.index + (l.sign > 0 ? 0 : 1));
    f.edge_image.push_back(std::move(p));
    f.stratum.push_back(Stratum::kTop);
  }
  return f;
}

GraphMap rose_from_automorphism(const Automorphism& alpha) {
  return rose_from_endomorphism(alpha.forward());
}

EdgePath map_path(const GraphMap& f, const EdgePath& p, int n) {
  EdgePath cur = tighten(p);
  for (int i = 0; i < n; ++i) {
    EdgePath next;
    for (int e : cur) append_tight(next, f.image_of(e));
    cur = std::move(next);
  }
  return cur;
}

TransitionMatrix transition_matrix(const GraphMap& f,
                                   const std::vector<int>& pairs) {
  const int n = static_cast<int>(pairs.size());
  std::vector<int> pos(f.graph.num_pairs(), -1);
  for (int i = 0; i < n; ++i) pos[pairs[i]] = i;
  TransitionMatrix m = TransitionMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int e : f.edge_image[pairs[i]]) {
      int j = pos[edge_pair(e)];
      if (j >= 0) m(i, j) += 1;
    }
  return m;
}

TransitionMatrix transition_matrix(const GraphMap& f) {
  std::vector<int> pairs;
  for (int k = 0; k < f.graph.num_pairs(); ++k)
    if (f.stratum[k] == Stratum::kTop) pairs.push_back(k);
  return transition_matrix(f, pairs);
}

PFData pf_data(const TransitionMatrix& m, double tol) {
  const int n = static_cast<int>(m.rows());
  if (n == 0 || m.isZero()) throw ZeroMatrixError();
  // irreducible <=> the digraph of nonzero entries is strongly connected
  auto reach = [&](bool transpose) {
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
      int i = q.front();
      q.pop();
      for (int j = 0; j < n; ++j)
        if (!seen[j] && (transpose ? m(j, i) : m(i, j)) > 0) {
          seen[j] = 1;
          q.push(j);
        }
    }
    return seen;
  };
  for (bool t : {false, true})
    for (char s : reach(t))
      if (!s) throw ReducibleMatrixError();

  // Power iteration on M + I (primitive for irreducible M) with
  // Collatz-Wielandt enclosures; lo never decreases, hi never increases.
  Eigen::MatrixXd a = m.cast<double>() + Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / n);
  double lo = 0, hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200000 && hi - lo > tol; ++it) {
    Eigen::VectorXd w = a * v;
    double step_lo = std::numeric_limits<double>::infinity(), step_hi = 0;
    for (int i = 0; i < n; ++i) {
      double r = w(i) / v(i);
      step_lo = std::min(step_lo, r);
      step_hi = std::max(step_hi, r);
    }
    lo = std::max(lo, step_lo - 1);
    hi = std::min(hi, step_hi - 1);
    v = w / w.sum();
  }
  PFData out;
  out.matrix = m;
  out.lambda_lo = lo;
  out.lambda_hi = hi;
  out.lambda = (lo + hi) / 2;
  out.edge_lengths = v;
  return out;
}

std::vector<StratumInfo> strata(const GraphMap& f) {
  const int n = f.graph.num_pairs();
  std::vector<std::vector<int>> adj(n), radj(n);
  for (int i = 0; i < n; ++i) {
    std::vector<char> hit(n, 0);
    for (int e : f.edge_image[i]) hit[edge_pair(e)] = 1;
    for (int j = 0; j < n; ++j)
      if (hit[j]) {
        adj[i].push_back(j);
        radj[j].push_back(i);
      }
  }
  // Kosaraju; components come out in topological order (sources first),
  // which we reverse so lower strata lead.
  std::vector<int> order;
  std::vector<char> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
    seen[s] = 1;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      if (idx < adj[v].size()) {
        int w = adj[v][idx++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<std::vector<int>> comps;
  std::vector<char> done(n, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (done[*it]) continue;
    std::vector<int> comp, stack{*it};
    done[*it] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int w : radj[v])
        if (!done[w]) {
          done[w] = 1;
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  std::reverse(comps.begin(), comps.end());

  std::vector<StratumInfo> out;
  for (auto& comp : comps) {
    StratumInfo info;
    info.pairs = comp;
    TransitionMatrix sub = transition_matrix(f, comp);
    if (sub.isZero()) {
      info.cls = StratumClass::kZero;
    } else {
      PFData pf = pf_data(sub, 1e-9);
      info.cls = pf.lambda_lo > 1 + 1e-7 ? StratumClass::kExponential
                                         : StratumClass::kPolynomial;
      if (info.cls == StratumClass::kExponential) info.pf = std::move(pf);
    }
    out.push_back(std::move(info));
  }
  return out;
}

TurnStructure gates(const GraphMap& f, int depth_budget) {
  const int nd = f.graph.num_directions();
  // derivative map: first edge of the (tightened) image; -1 if collapsed
  std::vector<int> deriv(nd, -1);
  for (int d = 0; d < nd; ++d) {
    EdgePath img = tighten(f.image_of(d));
    if (!img.empty()) deriv[d] = img.front();
  }
  std::vector<int> parent(nd);
  for (int d = 0; d < nd; ++d) parent[d] = d;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const int cap = depth_budget > 0 ? depth_budget : nd * nd;
  bool changed = true;
  int rounds = 0;
  while (changed) {
    if (++rounds > cap)
      throw std::logic_error("gates: partition failed to stabilize");
    changed = false;
    for (int d1 = 0; d1 < nd; ++d1)
      for (int d2 = d1 + 1; d2 < nd; ++d2) {
        if (deriv[d1] < 0 || deriv[d2] < 0) continue;
        if (find(d1) != find(d2) && find(deriv[d1]) == find(deriv[d2])) {
          parent[find(d1)] = find(d2);
          changed = true;
        }
      }
  }
  TurnStructure ts;
  ts.gate.resize(nd);
  for (int d = 0; d < nd; ++d) ts.gate[d] = find(d);
  return ts;
}

int ilt_count(const TurnStructure& ts, const EdgePath& p) {
  EdgePath t = tighten(p);
  int count = 0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (ts.is_illegal(edge_reverse(t[i]), t[i + 1])) ++count;
  return count;
}

bool is_train_track(const GraphMap& f, int n_check) {
  TurnStructure ts = gates(f);
  for (int k = 0; k < f.graph.num_pairs(); ++k) {
    EdgePath p = {2 * k};
    for (int m = 1; m <= n_check; ++m) {
      p = map_path(f, p, 1);
      if (ilt_count(ts, p) > 0) return false;
    }
  }
  return true;
}

// -- elementary moves --------------------------------------------------------

namespace {

// Replaces every occurrence of an oriented edge by a path (and its reverse
// by the reversed path) in all stored paths of the map.
struct Rewriter {
  std::vector<EdgePath> repl;  // per oriented edge

  explicit Rewriter(int nd) {
    repl.resize(nd);
    for (int d = 0; d < nd; ++d) repl[d] = {d};
  }
  void set(int d, EdgePath p) {
    repl[d] = std::move(p);
    repl[edge_reverse(d)] = reverse_path(repl[d]);
  }
  EdgePath operator()(const EdgePath& p) const {
    EdgePath out;
    for (int e : p) append_tight(out, repl[e]);
    return out;
  }
};

void rewrite_all(GraphMap& f, const Rewriter& rw) {
  for (EdgePath& p : f.edge_image) p = rw(p);
  for (EdgePath& p : f.graph.marking) p = rw(p);
  for (auto& [pair, path] : f.shortcuts) path = rw(path);
}

// Drops edge pair k (whose occurrences must already be rewritten away) and
// renumbers the higher pairs.
void erase_pair(GraphMap& f, int k) {
  auto renumber = [&](EdgePath& p) {
    for (int& e : p) {
      if (edge_pair(e) > k) e -= 2;
    }
  };
  f.edge_image.erase(f.edge_image.begin() + k);
  f.stratum.erase(f.stratum.begin() + k);
  f.graph.edge_from.erase(f.graph.edge_from.begin() + 2 * k,
                          f.graph.edge_from.begin() + 2 * k + 2);
  f.graph.edge_to.erase(f.graph.edge_to.begin() + 2 * k,
                        f.graph.edge_to.begin() + 2 * k + 2);
  for (EdgePath& p : f.edge_image) renumber(p);
  for (EdgePath& p : f.graph.marking) renumber(p);
  for (auto& [pair, path] : f.shortcuts) {
    renumber(path);
    if (pair > k) --pair;
  }
}

// Merges vertex `remove` into vertex `keep` and renumbers.
void merge_vertex(GraphMap& f, int remove, int keep) {
  auto remap = [&](int v) {
    if (v == remove) v = keep;
    return v > remove ? v - 1 : v;
  };
  for (int& v : f.graph.edge_from) v = remap(v);
  for (int& v : f.graph.edge_to) v = remap(v);
  f.vertex_image.erase(f.vertex_image.begin() + remove);
  for (int& v : f.vertex_image) v = remap(v);
  --f.graph.num_vertices;
}

// Collapses a non-loop edge pair, removing the given endpoint vertex; a
// homotopy equivalence, with the map conjugated by the retraction.
GraphMap collapse_pair(const GraphMap& f0, int k, int remove_vertex) {
  GraphMap f = f0;
  int e = 2 * k;
  if (f.graph.edge_from[e] == remove_vertex) e = edge_reverse(e);
  if (f.graph.edge_to[e] != remove_vertex)
    throw InvalidSiteError("collapse: vertex not an endpoint");
  const int keep = f.graph.edge_from[e];
  if (keep == remove_vertex) throw InvalidSiteError("collapse: loop edge");
  if (remove_vertex == 0)
    throw InvalidSiteError("collapse: cannot remove the basepoint");

  const EdgePath fe = f.image_of(e);
  // Conjugate by the homotopy inverse: an edge leaving/entering the removed
  // vertex picks up f(e) on that side; then delete e itself everywhere.
  std::vector<EdgePath> new_images(f.graph.num_pairs());
  for (int q = 0; q < f.graph.num_pairs(); ++q) {
    if (q == k) continue;
    EdgePath img;
    if (f.graph.edge_from[2 * q] == remove_vertex) append_tight(img, fe);
    append_tight(img, f.edge_image[q]);
    if (f.graph.edge_to[2 * q] == remove_vertex)
      append_tight(img, reverse_path(fe));
    new_images[q] = std::move(img);
  }
  for (int q = 0; q < f.graph.num_pairs(); ++q)
    if (q != k) f.edge_image[q] = std::move(new_images[q]);

  Rewriter rw(f.graph.num_directions());
  rw.set(e, {});
  rewrite_all(f, rw);
  erase_pair(f, k);
  // vertex images through the retraction
  for (int& v : f.vertex_image)
    if (v == remove_vertex) v = keep;
  merge_vertex(f, remove_vertex, keep);
  for (EdgePath& p : f.edge_image) p = tighten(p);
  return f;
}

// Splits pair k so the image of the even edge breaks after position t;
// returns the new map.  The new pair is appended at the end.
GraphMap subdivide_pair(const GraphMap& f0, int k, int t) {
  const int len = static_cast<int>(f0.edge_image[k].size());
  if (t < 1 || t >= len) throw InvalidSiteError("subdivide: bad position");
  GraphMap f = f0;
  const EdgePath img = f.edge_image[k];
  const int split_image = f0.graph.edge_to[img[t - 1]];
  const int w = f.graph.num_vertices++;
  const int m = f.graph.num_pairs();
  f.graph.edge_from.push_back(w);                      // 2m
  f.graph.edge_from.push_back(f.graph.edge_to[2 * k]); // 2m+1
  f.graph.edge_to.push_back(f.graph.edge_to[2 * k]);
  f.graph.edge_to.push_back(w);
  f.graph.edge_to[2 * k] = w;
  f.graph.edge_from[2 * k + 1] = w;
  f.stratum.push_back(f.stratum[k]);
  f.vertex_image.push_back(split_image);
  f.edge_image[k] = EdgePath(img.begin(), img.begin() + t);
  f.edge_image.push_back(EdgePath(img.begin() + t, img.end()));
  Rewriter rw(f.graph.num_directions());
  rw.set(2 * k, {2 * k, 2 * m});
  rewrite_all(f, rw);
  return f;
}

// Subdivides (if needed) so the initial segment of direction d has image
// exactly the first t edges of image_of(d); returns {map, direction}.
std::pair<GraphMap, int> split_direction(const GraphMap& f, int d, int t) {
  const int len = static_cast<int>(f.image_of(d).size());
  if (t == len) return {f, d};
  const int k = edge_pair(d);
  if ((d & 1) == 0) return {subdivide_pair(f, k, t), d};
  GraphMap g = subdivide_pair(f, k, len - t);
  return {g, 2 * (g.graph.num_pairs() - 1) + 1};
}

// Identifies directions x and y: same initial vertex, identical images.
GraphMap identify_directions(GraphMap f, int x, int y) {
  if (edge_pair(x) == edge_pair(y))
    throw InvalidSiteError("fold: directions share an edge pair");
  if (f.graph.edge_from[x] != f.graph.edge_from[y] ||
      f.image_of(x) != f.image_of(y))
    throw InvalidSiteError("fold: directions not identifiable");
  int by = f.graph.edge_to[y];  // vertex ids survive pair removal
  Rewriter rw(f.graph.num_directions());
  rw.set(y, {x});
  rewrite_all(f, rw);
  const int xr = edge_pair(x) > edge_pair(y) ? x - 2 : x;
  erase_pair(f, edge_pair(y));
  int bx = f.graph.edge_to[xr];
  if (by != bx) {
    if (by == 0) std::swap(bx, by);
    merge_vertex(f, by, bx);
  }
  for (EdgePath& p : f.edge_image) p = tighten(p);
  return f;
}

GraphMap fold_turn(const GraphMap& f0, int d1, int d2) {
  if (f0.graph.edge_from[d1] != f0.graph.edge_from[d2])
    throw InvalidSiteError("fold: directions at different vertices");
  EdgePath p1 = f0.image_of(d1), p2 = f0.image_of(d2);
  std::size_t t = 0;
  while (t < p1.size() && t < p2.size() && p1[t] == p2[t]) ++t;
  if (t == 0) throw InvalidSiteError("fold: images share no prefix");
  if (edge_pair(d2) == edge_pair(d1)) {
    // a loop folded onto its own reverse: subdivide first so the two sides
    // of the turn lie on distinct edge pairs, then fold generically
    const int L = static_cast<int>(p2.size());
    if (L < 2) throw InvalidSiteError("fold: loop too short to split");
    const int s = std::min(static_cast<int>(t), L - 1);
    const int k = edge_pair(d2);
    auto [fa2, x2] = split_direction(f0, d2, s);
    const int m = fa2.graph.num_pairs() - 1;
    const int other = (d2 & 1) == 0 ? 2 * m + 1 : 2 * k;
    return fold_turn(fa2, other, x2);
  }
  auto [fa, x] = split_direction(f0, d1, static_cast<int>(t));
  // Subdividing rewrites paths, so re-measure the shared prefix as the
  // (rewritten) image of the split-off segment.
  const int t2 = static_cast<int>(fa.image_of(x).size());
  auto [fb, y] = split_direction(fa, d2, t2);
  return identify_directions(fb, x, y);
}

}  // namespace

GraphMap bh_move(const GraphMap& f, BHMoveKind kind, const BHSite& site) {
  switch (kind) {
    case BHMoveKind::kSubdivide: {
      if (site.edge < 0 || site.edge >= f.graph.num_directions())
        throw InvalidSiteError("subdivide: bad edge");
      int k = edge_pair(site.edge);
      int t = site.index;
      if ((site.edge & 1) != 0)
        t = static_cast<int>(f.edge_image[k].size()) - t;
      return subdivide_pair(f, k, t);
    }
    case BHMoveKind::kFold:
      if (site.edge < 0 || site.other < 0 ||
          site.edge >= f.graph.num_directions() ||
          site.other >= f.graph.num_directions())
        throw InvalidSiteError("fold: bad directions");
      return fold_turn(f, site.edge, site.other);
    case BHMoveKind::kCollapseInvariantForest: {
      if (site.forest_pairs.empty())
        throw InvalidSiteError("collapse: empty forest");
      // forest: acyclic; invariant: images stay inside the forest
      std::vector<char> in_forest(f.graph.num_pairs(), 0);
      for (int k : site.forest_pairs) {
        if (k < 0 || k >= f.graph.num_pairs())
          throw InvalidSiteError("collapse: bad edge");
        in_forest[k] = 1;
      }
      for (int k : site.forest_pairs)
        for (int e : f.edge_image[k])
          if (!in_forest[edge_pair(e)])
            throw InvalidSiteError("collapse: forest not invariant");
      std::vector<int> comp(f.graph.num_vertices);
      for (int v = 0; v < f.graph.num_vertices; ++v) comp[v] = v;
      std::function<int(int)> find = [&](int v) {
        while (comp[v] != v) v = comp[v] = comp[comp[v]];
        return v;
      };
      for (int k : site.forest_pairs) {
        int a = find(f.graph.edge_from[2 * k]), b = find(f.graph.edge_to[2 * k]);
        if (a == b) throw InvalidSiteError("collapse: forest has a cycle");
        comp[a] = b;
      }
      // collapse one edge at a time, tracking renumbering
      GraphMap g = f;
      std::vector<int> todo = site.forest_pairs;
      std::sort(todo.begin(), todo.end());
      while (!todo.empty()) {
        int k = todo.back();
        todo.pop_back();
        int rm = g.graph.edge_to[2 * k];
        if (rm == 0) rm = g.graph.edge_from[2 * k];
        g = collapse_pair(g, k, rm);
        for (int& q : todo)
          if (q > k) --q;
      }
      return g;
    }
    case BHMoveKind::kRemoveValenceOne: {
      int v = site.vertex;
      if (v <= 0 || v >= f.graph.num_vertices)
        throw InvalidSiteError("valence-1: bad vertex");
      std::vector<int> dirs;
      for (int d = 0; d < f.graph.num_directions(); ++d)
        if (f.graph.edge_from[d] == v) dirs.push_back(d);
      if (dirs.size() != 1) throw InvalidSiteError("valence-1: valence != 1");
      return collapse_pair(f, edge_pair(dirs[0]), v);
    }
    case BHMoveKind::kRemoveValenceTwo: {
      int v = site.vertex;
      if (v <= 0 || v >= f.graph.num_vertices)
        throw InvalidSiteError("valence-2: bad vertex");
      std::vector<int> dirs;
      for (int d = 0; d < f.graph.num_directions(); ++d)
        if (f.graph.edge_from[d] == v) dirs.push_back(d);
      if (dirs.size() != 2) throw InvalidSiteError("valence-2: valence != 2");
      if (edge_pair(dirs[0]) == edge_pair(dirs[1]))
        throw InvalidSiteError("valence-2: isolated loop");
      return collapse_pair(f, edge_pair(dirs[0]), v);
    }
  }
  throw InvalidSiteError("unknown move");
}

TrainTrackResult try_make_train_track(const GraphMap& f0, int budget) {
  TrainTrackResult res;
  GraphMap f = f0;
  for (int step = 0; step < budget; ++step) {
    // collapse edges whose image became trivial
    bool collapsed = false;
    for (int k = 0; k < f.graph.num_pairs() && !collapsed; ++k) {
      if (!f.edge_image[k].empty()) continue;
      int rm = f.graph.edge_to[2 * k];
      if (rm == 0) rm = f.graph.edge_from[2 * k];
      if (rm == f.graph.edge_from[2 * k] && rm == f.graph.edge_to[2 * k])
        continue;  // trivial loop; leave it
      f = collapse_pair(f, k, rm);
      res.trace.push_back("collapse " + std::to_string(k));
      collapsed = true;
    }
    if (collapsed) continue;

    // tidy: remove valence-one and valence-two vertices away from the
    // basepoint so folds cannot grow the graph without bound
    bool tidied = false;
    for (int v = 1; v < f.graph.num_vertices && !tidied; ++v) {
      std::vector<int> dirs;
      for (int d = 0; d < f.graph.num_directions(); ++d)
        if (f.graph.edge_from[d] == v) dirs.push_back(d);
      if (dirs.size() == 1) {
        f = collapse_pair(f, edge_pair(dirs[0]), v);
        res.trace.push_back("valence1 " + std::to_string(v));
        tidied = true;
      } else if (dirs.size() == 2 && edge_pair(dirs[0]) != edge_pair(dirs[1])) {
        f = collapse_pair(f, edge_pair(dirs[0]), v);
        res.trace.push_back("valence2 " + std::to_string(v));
        tidied = true;
      }
    }
    if (tidied) continue;

    TurnStructure ts = gates(f);
    int best_pair = -1, best_pos = -1;
    std::size_t best_len = 0;
    for (int k = 0; k < f.graph.num_pairs(); ++k) {
      const EdgePath& p = f.edge_image[k];
      for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (ts.is_illegal(edge_reverse(p[i]), p[i + 1])) {
          if (best_pair < 0 || p.size() < best_len) {
            best_pair = k;
            best_pos = static_cast<int>(i);
            best_len = p.size();
          }
          break;
        }
    }
    if (best_pair < 0) {
      res.map = std::move(f);
      return res;
    }
    // fold the crossed illegal turn, descending to a directly foldable pair
    int x = edge_reverse(f.edge_image[best_pair][best_pos]);
    int y = f.edge_image[best_pair][best_pos + 1];
    auto first_dir = [&](int d) {
      EdgePath img = tighten(f.image_of(d));
      return img.empty() ? -1 : img.front();
    };
    int guard = f.graph.num_directions() + 1;
    while (guard-- > 0) {
      int fx = first_dir(x), fy = first_dir(y);
      if (fx < 0 || fy < 0) break;
      if (fx == fy) break;
      x = fx;
      y = fy;
    }
    res.trace.push_back("fold " + std::to_string(x) + " " + std::to_string(y));
    try {
      f = fold_turn(f, x, y);
    } catch (const InvalidSiteError& e) {
      res.trace.push_back(std::string("stuck: ") + e.what());
      return res;
    }
  }
  res.trace.push_back("budget exhausted");
  return res;
}

std::vector<NielsenPath> find_inps(const GraphMap& f, int len_budget) {
  std::vector<NielsenPath> out;
  TurnStructure ts = gates(f);
  std::vector<int> fixed;
  for (int v = 0; v < f.graph.num_vertices; ++v)
    if (f.vertex_image[v] == v) fixed.push_back(v);
  std::vector<char> is_fixed(f.graph.num_vertices, 0);
  for (int v : fixed) is_fixed[v] = 1;

  EdgePath path;
  std::function<void(int, int)> dfs = [&](int at, int ilt) {
    if (!path.empty() && is_fixed[at]) {
      if (map_path(f, path, 1) == path) {
        EdgePath rev = reverse_path(path);
        if (path <= rev)
          out.push_back(NielsenPath{path, ilt});
      }
    }
    if (static_cast<int>(path.size()) == len_budget) return;
    for (int d = 0; d < f.graph.num_directions(); ++d) {
      if (f.graph.edge_from[d] != at) continue;
      if (!path.empty() && d == edge_reverse(path.back())) continue;
      int add = 0;
      if (!path.empty() && ts.is_illegal(edge_reverse(path.back()), d)) add = 1;
      if (ilt + add > 1) continue;
      path.push_back(d);
      dfs(f.graph.edge_to[d], ilt + add);
      path.pop_back();
    }
  };
  for (int v : fixed) dfs(v, 0);
  std::sort(out.begin(), out.end(),
            [](const NielsenPath& a, const NielsenPath& b) {
              if (a.path.size() != b.path.size())
                return a.path.size() < b.path.size();
              return a.path < b.path;
            });
  return out;
}

GraphMap add_shortcut(const GraphMap& f0, const EdgePath& inp) {
  EdgePath p = tighten(inp);
  if (p.empty() || !f0.graph.path_valid(p)) throw InvalidINPError();
  int u = f0.graph.edge_from[p.front()], v = f0.graph.edge_to[p.back()];
  if (f0.vertex_image[u] != u || f0.vertex_image[v] != v)
    throw InvalidINPError();
  if (map_path(f0, p, 1) != p) throw InvalidINPError();
  if (ilt_count(gates(f0), p) > 1) throw InvalidINPError();
  GraphMap f = f0;
  const int m = f.graph.num_pairs();
  f.graph.edge_from.push_back(u);
  f.graph.edge_from.push_back(v);
  f.graph.edge_to.push_back(v);
  f.graph.edge_to.push_back(u);
  f.edge_image.push_back({2 * m});
  f.stratum.push_back(Stratum::kZero);
  f.shortcuts.push_back({m, p});
  return f;
}

// -- text format -------------------------------------------------------------

namespace {

std::string path_to_text(const EdgePath& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << ' ';
    int signed1 = (p[i] & 1) ? -(edge_pair(p[i]) + 1) : edge_pair(p[i]) + 1;
    os << signed1;
  }
  return os.str();
}

EdgePath path_from_text(std::istringstream& is) {
  EdgePath p;
  int s;
  while (is >> s) {
    if (s == 0) throw std::invalid_argument("graph map: zero edge index");
    p.push_back(s > 0 ? 2 * (s - 1) : 2 * (-s - 1) + 1);
  }
  return p;
}

}  // namespace

std::string format_graph_map(const GraphMap& f) {
  std::ostringstream os;
  os << "vertices " << f.graph.num_vertices << "\n";
  os << "rank " << f.graph.rank << "\n";
  for (int k = 0; k < f.graph.num_pairs(); ++k)
    os << "edge " << (k + 1) << ": " << f.graph.edge_from[2 * k] << ' '
       << f.graph.edge_to[2 * k] << " stratum="
       << (f.stratum[k] == Stratum::kTop ? "top" : "zero") << "\n";
  for (int k = 0; k < f.graph.num_pairs(); ++k)
    os << "image " << (k + 1) << ": " << path_to_text(f.edge_image[k]) << "\n";
  for (int v = 0; v < f.graph.num_vertices; ++v)
    os << "vmap " << v << ": " << f.vertex_image[v] << "\n";
  for (int g = 0; g < f.graph.rank; ++g)
    os << "marking " << (g + 1) << ": " << path_to_text(f.graph.marking[g])
       << "\n";
  return os.str();
}

GraphMap parse_graph_map(const std::string& text) {
  GraphMap f;
  std::istringstream lines(text);
  std::string line;
  auto fail = [](const std::string& l) {
    throw std::invalid_argument("graph map: bad line: " + l);
  };
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string tag;
    is >> tag;
    if (tag == "vertices") {
      if (!(is >> f.graph.num_vertices)) fail(line);
    } else if (tag == "rank") {
      if (!(is >> f.graph.rank)) fail(line);
      f.graph.marking.resize(f.graph.rank);
    } else if (tag == "edge") {
      std::string id, stratum_tok;
      int u, v;
      if (!(is >> id >> u >> v >> stratum_tok)) fail(line);
      f.graph.edge_from.push_back(u);
      f.graph.edge_from.push_back(v);
      f.graph.edge_to.push_back(v);
      f.graph.edge_to.push_back(u);
      if (stratum_tok == "stratum=top")
        f.stratum.push_back(Stratum::kTop);
      else if (stratum_tok == "stratum=zero")
        f.stratum.push_back(Stratum::kZero);
      else
        fail(line);
    } else if (tag == "image") {
      std::string id;
      is >> id;
      f.edge_image.push_back(path_from_text(is));
    } else if (tag == "vmap") {
      std::string id;
      int w;
      if (!(is >> id >> w)) fail(line);
      f.vertex_image.push_back(w);
    } else if (tag == "marking") {
      std::string id;
      is >> id;
      int g = std::stoi(id) - 1;
      if (g < 0 || g >= f.graph.rank) fail(line);
      f.graph.marking[g] = path_from_text(is);
    } else {
      fail(line);
    }
  }
  f.check_invariants();
  return f;
}

}  // namespace fgd
