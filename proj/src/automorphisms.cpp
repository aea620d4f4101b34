#include "fgd/automorphisms.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_set>

namespace fgd {

namespace {

void check_same_rank(int a, int b) {
  if (a != b) throw std::invalid_argument("rank mismatch");
}

void append_reduced(std::vector<Letter>& out, const ReducedWord& w,
                    bool inverted) {
  auto push = [&out](Letter l) {
    if (!out.empty() && out.back().is_inverse_of(l))
      out.pop_back();
    else
      out.push_back(l);
  };
  if (!inverted) {
    for (const Letter& l : w.letters()) push(l);
  } else {
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it)
      push(it->inverse());
  }
}

}  // namespace

Endomorphism::Endomorphism(std::vector<ReducedWord> images)
    : rank_(static_cast<int>(images.size())), images_(std::move(images)) {
  ReducedWord::check_rank(rank_);
  for (const ReducedWord& w : images_) check_same_rank(w.rank(), rank_);
}

Endomorphism Endomorphism::identity(int rank) {
  ReducedWord::check_rank(rank);
  std::vector<ReducedWord> images;
  images.reserve(rank);
  for (int i = 0; i < rank; ++i)
    images.push_back(ReducedWord(rank, {Letter(i, +1)}));
  return Endomorphism(std::move(images));
}

ReducedWord apply(const Endomorphism& phi, const ReducedWord& w) {
  check_same_rank(phi.rank(), w.rank());
  std::vector<Letter> out;
  for (const Letter& l : w.letters())
    append_reduced(out, phi.image(l.index), l.sign < 0);
  return ReducedWord(phi.rank(), std::move(out));
}

Endomorphism compose(const Endomorphism& phi, const Endomorphism& psi) {
  check_same_rank(phi.rank(), psi.rank());
  std::vector<ReducedWord> images;
  images.reserve(phi.rank());
  for (int i = 0; i < phi.rank(); ++i) images.push_back(apply(phi, psi.image(i)));
  return Endomorphism(std::move(images));
}

IntegerMatrix abelianization(const Endomorphism& phi) {
  const int k = phi.rank();
  IntegerMatrix m = IntegerMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i)
    for (const Letter& l : phi.image(i).letters()) m(i, l.index) += l.sign;
  return m;
}

std::int64_t determinant(const IntegerMatrix& m) {
  // Fraction-free Bareiss elimination.
  const int n = static_cast<int>(m.rows());
  Eigen::Matrix<__int128, Eigen::Dynamic, Eigen::Dynamic> a =
      m.cast<__int128>();
  __int128 prev = 1;
  int sign = 1;
  for (int c = 0; c < n - 1; ++c) {
    int pivot = -1;
    for (int r = c; r < n; ++r)
      if (a(r, c) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) return 0;
    if (pivot != c) {
      a.row(pivot).swap(a.row(c));
      sign = -sign;
    }
    for (int r = c + 1; r < n; ++r)
      for (int j = c + 1; j < n; ++j)
        a(r, j) = (a(r, j) * a(c, c) - a(r, c) * a(c, j)) / prev;
    prev = a(c, c);
  }
  return static_cast<std::int64_t>(sign * a(n - 1, n - 1));
}

Endomorphism NielsenMove::as_endomorphism(int rank) const {
  std::vector<ReducedWord> images;
  for (int g = 0; g < rank; ++g)
    images.push_back(ReducedWord(rank, {Letter(g, +1)}));
  const Letter xi(i, +1);
  const Letter xj(j, sign);
  switch (kind) {
    case kInvert:
      images[i] = ReducedWord(rank, {Letter(i, -1)});
      break;
    case kSwap:
      images[i] = ReducedWord(rank, {Letter(j, +1)});
      images[j] = ReducedWord(rank, {Letter(i, +1)});
      break;
    case kMultiplyRight:
      images[i] = ReducedWord(rank, {xi, xj});
      break;
    case kMultiplyLeft:
      images[i] = ReducedWord(rank, {xj, xi});
      break;
  }
  return Endomorphism(std::move(images));
}

void apply_move(std::vector<ReducedWord>& tuple, const NielsenMove& move) {
  const int rank = tuple.front().rank();
  ReducedWord vj(rank);
  switch (move.kind) {
    case NielsenMove::kInvert:
      tuple[move.i] = invert(tuple[move.i]);
      break;
    case NielsenMove::kSwap:
      std::swap(tuple[move.i], tuple[move.j]);
      break;
    case NielsenMove::kMultiplyRight:
      vj = move.sign > 0 ? tuple[move.j] : invert(tuple[move.j]);
      tuple[move.i] = multiply(tuple[move.i], vj);
      break;
    case NielsenMove::kMultiplyLeft:
      vj = move.sign > 0 ? tuple[move.j] : invert(tuple[move.j]);
      tuple[move.i] = multiply(vj, tuple[move.i]);
      break;
  }
}

Automorphism::Automorphism(Endomorphism forward, Endomorphism inverse,
                           std::vector<NielsenMove> certificate)
    : forward_(std::move(forward)),
      inverse_(std::move(inverse)),
      certificate_(std::move(certificate)) {
  check_same_rank(forward_.rank(), inverse_.rank());
  const Endomorphism id = Endomorphism::identity(rank());
  if (compose(forward_, inverse_) != id || compose(inverse_, forward_) != id)
    throw std::invalid_argument("inverse does not certify");
}

Automorphism Automorphism::identity(int rank) {
  return Automorphism(Endomorphism::identity(rank),
                      Endomorphism::identity(rank), {});
}

Automorphism Automorphism::inverted() const {
  return Automorphism(inverse_, forward_, {});
}

namespace {

std::string tuple_key(const std::vector<ReducedWord>& tuple) {
  std::string key;
  for (const ReducedWord& w : tuple) {
    for (const Letter& l : w.letters()) {
      key.push_back(static_cast<char>('0' + l.index));
      key.push_back(l.sign > 0 ? '+' : '-');
    }
    key.push_back('|');
  }
  return key;
}

std::size_t total_length(const std::vector<ReducedWord>& tuple) {
  std::size_t n = 0;
  for (const ReducedWord& w : tuple) n += w.size();
  return n;
}

bool is_standard_basis(const std::vector<ReducedWord>& tuple) {
  for (int i = 0; i < static_cast<int>(tuple.size()); ++i)
    if (tuple[i].size() != 1 || tuple[i][0] != Letter(i, +1)) return false;
  return true;
}

std::vector<NielsenMove> candidate_moves(int k) {
  std::vector<NielsenMove> moves;
  for (int i = 0; i < k; ++i)
    moves.push_back({NielsenMove::kInvert, i, 0, +1});
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      if (i < j) moves.push_back({NielsenMove::kSwap, i, j, +1});
      for (int s : {+1, -1}) {
        moves.push_back({NielsenMove::kMultiplyRight, i, j, s});
        moves.push_back({NielsenMove::kMultiplyLeft, i, j, s});
      }
    }
  return moves;
}

}  // namespace

InversionResult verify_and_invert(const Endomorphism& phi) {
  const int k = phi.rank();
  const std::int64_t det = determinant(abelianization(phi));
  if (det != 1 && det != -1)
    return InversionResult{std::nullopt, InversionFailure::kDeterminantObstruction};

  // Dijkstra over image tuples ordered by total letter count (shortlex
  // tie-break on the serialized tuple).  Length never increases along an
  // edge, so the reachable state space is finite; a generating tuple of
  // F_k reaches the standard basis, anything else exhausts its plateau.
  struct Node {
    std::vector<ReducedWord> tuple;
    std::vector<NielsenMove> path;
  };
  auto cmp = [](const std::pair<std::pair<std::size_t, std::string>, int>& a,
                const std::pair<std::pair<std::size_t, std::string>, int>& b) {
    return a.first > b.first;
  };
  std::vector<Node> nodes;
  std::priority_queue<std::pair<std::pair<std::size_t, std::string>, int>,
                      std::vector<std::pair<std::pair<std::size_t, std::string>, int>>,
                      decltype(cmp)>
      queue(cmp);
  std::unordered_set<std::string> visited;

  nodes.push_back(Node{phi.images(), {}});
  queue.push({{total_length(phi.images()), tuple_key(phi.images())}, 0});
  const std::vector<NielsenMove> moves = candidate_moves(k);
  const std::size_t state_budget = 500000;

  while (!queue.empty() && visited.size() < state_budget) {
    const int id = queue.top().second;
    queue.pop();
    std::vector<ReducedWord> tuple = nodes[id].tuple;
    const std::string key = tuple_key(tuple);
    if (visited.count(key)) continue;
    visited.insert(key);

    if (is_standard_basis(tuple)) {
      Endomorphism inv = Endomorphism::identity(k);
      for (const NielsenMove& m : nodes[id].path)
        inv = compose(inv, m.as_endomorphism(k));
      return InversionResult{Automorphism(phi, inv, nodes[id].path),
                             std::nullopt};
    }

    const std::size_t len = total_length(tuple);
    for (const NielsenMove& m : moves) {
      std::vector<ReducedWord> next = tuple;
      apply_move(next, m);
      const std::size_t next_len = total_length(next);
      if (next_len > len) continue;
      const std::string next_key = tuple_key(next);
      if (visited.count(next_key)) continue;
      std::vector<NielsenMove> path = nodes[id].path;
      path.push_back(m);
      nodes.push_back(Node{std::move(next), std::move(path)});
      queue.push({{next_len, next_key}, static_cast<int>(nodes.size()) - 1});
    }
  }
  return InversionResult{std::nullopt, InversionFailure::kNotSurjective};
}

ReducedWord apply(const Automorphism& alpha, const ReducedWord& w) {
  return apply(alpha.forward(), w);
}

EventuallyPeriodicWord apply_ep(const Endomorphism& phi,
                                const EventuallyPeriodicWord& x) {
  check_same_rank(phi.rank(), x.rank());
  const ReducedWord image_c = apply(phi, x.period);
  CyclicDecomposition dec = cyclic_reduce(image_c);
  if (dec.core.empty())
    throw std::domain_error("period maps to a trivial element");
  return ep_normalize(multiply(apply(phi, x.prefix), dec.conjugator), dec.core);
}

EventuallyPeriodicWord apply_ep(const Automorphism& alpha,
                                const EventuallyPeriodicWord& x) {
  return apply_ep(alpha.forward(), x);
}

Automorphism compose(const Automorphism& a, const Automorphism& b) {
  return Automorphism(compose(a.forward(), b.forward()),
                      compose(b.inverse(), a.inverse()), {});
}

Automorphism power(const Automorphism& alpha, int n) {
  Automorphism acc = Automorphism::identity(alpha.rank());
  const Automorphism& base = n < 0 ? alpha.inverted() : alpha;
  for (int i = 0, m = n < 0 ? -n : n; i < m; ++i) acc = compose(acc, base);
  return acc;
}

Automorphism inner(const ReducedWord& w) {
  const int k = w.rank();
  const ReducedWord wi = invert(w);
  std::vector<ReducedWord> fwd, inv;
  for (int i = 0; i < k; ++i) {
    const ReducedWord x(k, {Letter(i, +1)});
    fwd.push_back(multiply(multiply(w, x), wi));
    inv.push_back(multiply(multiply(wi, x), w));
  }
  return Automorphism(Endomorphism(std::move(fwd)), Endomorphism(std::move(inv)),
                      {});
}

Automorphism twist(const Automorphism& alpha, const ReducedWord& w, int q) {
  return compose(inner(w), power(alpha, q));
}

ReducedWord random_reduced_word(int rank, std::size_t length,
                                std::mt19937_64& rng) {
  std::vector<Letter> out;
  std::uniform_int_distribution<int> gen(0, rank - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  while (out.size() < length) {
    Letter l(gen(rng), coin(rng) ? +1 : -1);
    if (!out.empty() && out.back().is_inverse_of(l)) continue;
    out.push_back(l);
  }
  return ReducedWord(rank, std::move(out));
}

Automorphism random_automorphism(int rank, int n_moves, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<int> gen(0, rank - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  Endomorphism fwd = Endomorphism::identity(rank);
  std::vector<NielsenMove> applied;
  for (int n = 0; n < n_moves; ++n) {
    NielsenMove m;
    m.kind = static_cast<NielsenMove::Kind>(kind(rng));
    m.i = gen(rng);
    m.j = gen(rng);
    m.sign = coin(rng) ? +1 : -1;
    if ((m.kind == NielsenMove::kSwap || m.kind == NielsenMove::kMultiplyRight ||
         m.kind == NielsenMove::kMultiplyLeft) &&
        m.i == m.j)
      m.j = (m.i + 1) % rank;
    fwd = compose(fwd, m.as_endomorphism(rank));
    applied.push_back(m);
  }
  // Invert each elementary move and compose in reverse order.
  Endomorphism inv = Endomorphism::identity(rank);
  for (auto it = applied.rbegin(); it != applied.rend(); ++it) {
    NielsenMove m = *it;
    if (m.kind == NielsenMove::kMultiplyRight ||
        m.kind == NielsenMove::kMultiplyLeft)
      m.sign = -m.sign;
    inv = compose(inv, m.as_endomorphism(rank));
  }
  return Automorphism(std::move(fwd), std::move(inv), std::move(applied));
}

namespace {

ReducedWord parse_word_strict(const std::string& text, int rank) {
  ReducedWord w = parse_word(text, rank);
  const std::string round_trip = to_string(w);
  std::string cleaned;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) cleaned += c;
  if (cleaned != round_trip)
    throw std::invalid_argument("image is not freely reduced: " + text);
  return w;
}

}  // namespace

Endomorphism parse_endomorphism(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int rank = -1;
  std::map<int, ReducedWord> images;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "rank") {
      if (!(ls >> rank) || rank < 2)
        throw std::invalid_argument("bad rank header");
      continue;
    }
    if (rank < 0) throw std::invalid_argument("missing 'rank k' header");
    std::string arrow, rhs;
    if (!(ls >> arrow >> rhs) || arrow != "->" || first.size() != 1)
      throw std::invalid_argument("expected 'g -> word': " + line);
    const char g = first[0];
    if (g < 'a' || g >= 'a' + rank)
      throw std::invalid_argument("generator out of rank: " + first);
    const int idx = g - 'a';
    if (images.count(idx))
      throw std::invalid_argument("duplicate generator line: " + first);
    images.emplace(idx, parse_word_strict(rhs, rank));
  }
  if (rank < 0) throw std::invalid_argument("missing 'rank k' header");
  if (static_cast<int>(images.size()) != rank)
    throw std::invalid_argument("missing generator image");
  std::vector<ReducedWord> list;
  for (int i = 0; i < rank; ++i) list.push_back(images.at(i));
  return Endomorphism(std::move(list));
}

Endomorphism load_endomorphism(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_endomorphism(buf.str());
}

std::string format_endomorphism(const Endomorphism& phi) {
  std::ostringstream os;
  os << "rank " << phi.rank() << "\n";
  for (int i = 0; i < phi.rank(); ++i)
    os << static_cast<char>('a' + i) << " -> " << to_string(phi.image(i))
       << "\n";
  return os.str();
}

}  // namespace fgd
