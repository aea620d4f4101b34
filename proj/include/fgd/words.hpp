#pragma once

// Exact arithmetic on freely reduced words in F_k and on eventually
// periodic right-infinite words (boundary points), with the Gromov product.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fgd {

/// One generator or inverse generator of F_k.
/// `index` is 0-based; `sign` is +1 for a generator, -1 for its inverse.
struct Letter {
  std::int32_t index = 0;
  std::int32_t sign = +1;

  Letter() = default;
  Letter(std::int32_t idx, std::int32_t sgn) : index(idx), sign(sgn) {}

  Letter inverse() const { return Letter(index, -sign); }
  bool is_inverse_of(const Letter& o) const {
    return index == o.index && sign == -o.sign;
  }

  friend bool operator==(const Letter& a, const Letter& b) {
    return a.index == b.index && a.sign == b.sign;
  }
  friend bool operator!=(const Letter& a, const Letter& b) { return !(a == b); }
  // total order: a < A < b < B < ...
  friend bool operator<(const Letter& a, const Letter& b) {
    if (a.index != b.index) return a.index < b.index;
    return a.sign > b.sign;
  }
};

/// A freely reduced word in the generators of F_k.  Immutable value type;
/// the invariant (no adjacent inverse pair, all indices < rank) is
/// maintained by construction through reduce().
class ReducedWord {
 public:
  explicit ReducedWord(int rank) : rank_(rank) { check_rank(rank); }
  ReducedWord(int rank, std::vector<Letter> reduced_letters);

  int rank() const { return rank_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::vector<Letter>& letters() const { return letters_; }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }
  const Letter& front() const { return letters_.front(); }
  const Letter& back() const { return letters_.back(); }

  friend bool operator==(const ReducedWord& a, const ReducedWord& b) {
    return a.rank_ == b.rank_ && a.letters_ == b.letters_;
  }
  friend bool operator!=(const ReducedWord& a, const ReducedWord& b) {
    return !(a == b);
  }
  friend bool operator<(const ReducedWord& a, const ReducedWord& b);  // shortlex

  static void check_rank(int rank) {
    if (rank < 2) throw std::invalid_argument("rank must be >= 2");
  }

 private:
  int rank_;
  std::vector<Letter> letters_;
};

/// Canonical u.c^inf representation of an eventually periodic boundary
/// point: c primitive and cyclically reduced, u the shortest prefix
/// realizing the point.  Built through ep_normalize().
struct EventuallyPeriodicWord {
  ReducedWord prefix;
  ReducedWord period;

  int rank() const { return prefix.rank(); }

  friend bool operator==(const EventuallyPeriodicWord& a,
                         const EventuallyPeriodicWord& b) {
    return a.prefix == b.prefix && a.period == b.period;
  }
  friend bool operator!=(const EventuallyPeriodicWord& a,
                         const EventuallyPeriodicWord& b) {
    return !(a == b);
  }
};

/// A boundary point given only through certified finite prefixes.
/// prefix_fn(n) returns the length-n initial subword; prefixes are
/// coherent up to stabilization_depth.
struct BoundaryPrefixOracle {
  int rank;
  std::function<ReducedWord(std::size_t)> prefix_fn;
  std::size_t stabilization_depth = 0;
};

constexpr std::size_t kGromovInfinity = std::numeric_limits<std::size_t>::max();

// -- free reduction and the group law ---------------------------------------

ReducedWord reduce(const std::vector<Letter>& raw, int rank);
ReducedWord multiply(const ReducedWord& u, const ReducedWord& v);
ReducedWord invert(const ReducedWord& u);
ReducedWord power_word(const ReducedWord& u, int n);

/// u = s . c . s^{-1} with c cyclically reduced and |s| minimal.
struct CyclicDecomposition {
  ReducedWord conjugator;  // s
  ReducedWord core;        // c
};
CyclicDecomposition cyclic_reduce(const ReducedWord& u);

// -- Gromov products --------------------------------------------------------

std::size_t gromov_product(const ReducedWord& x, const ReducedWord& y);
std::size_t gromov_product(const EventuallyPeriodicWord& x,
                           const EventuallyPeriodicWord& y);
std::size_t gromov_product(const EventuallyPeriodicWord& x,
                           const ReducedWord& y);
std::size_t gromov_product(const ReducedWord& x,
                           const EventuallyPeriodicWord& y);

// -- eventually periodic words ----------------------------------------------

/// Canonical form of the boundary point u.c^inf; c must be nonempty.
EventuallyPeriodicWord ep_normalize(const ReducedWord& u, const ReducedWord& c);

/// g^inf for g != 1 (and g^{-inf} via invert).
EventuallyPeriodicWord ep_from_element(const ReducedWord& g);

ReducedWord ep_prefix(const EventuallyPeriodicWord& x, std::size_t n);

bool ep_equal(const EventuallyPeriodicWord& x, const EventuallyPeriodicWord& y);

// -- canonical keys ---------------------------------------------------------

/// Lexicographically least cyclic rotation of the cyclically reduced core;
/// canonical key of the conjugacy class of u.
ReducedWord conjugacy_key(const ReducedWord& u);

/// Smallest d with c = d^m (concatenation); c itself when primitive.
ReducedWord primitive_root(const ReducedWord& c);

// -- text form --------------------------------------------------------------
// Words are spelled with lowercase letters for generators and uppercase for
// inverses ("abA"); the empty word is "1".  EP words as "u(c)^inf".

std::string to_string(const Letter& l);
std::string to_string(const ReducedWord& w);
std::string to_string(const EventuallyPeriodicWord& x);

ReducedWord parse_word(const std::string& text, int rank);
EventuallyPeriodicWord parse_ep(const std::string& text, int rank);

struct ReducedWordHash {
  std::size_t operator()(const ReducedWord& w) const;
};

}  // namespace fgd
