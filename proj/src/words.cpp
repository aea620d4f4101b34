#include "fgd/words.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>

namespace fgd {

namespace {

void check_same_rank(int a, int b) {
  if (a != b) throw std::invalid_argument("rank mismatch");
}

void push_reduced(std::vector<Letter>& out, const Letter& l) {
  if (!out.empty() && out.back().is_inverse_of(l)) {
    out.pop_back();
  } else {
    out.push_back(l);
  }
}

bool is_cyclically_reduced(const ReducedWord& w) {
  return w.empty() || !w.front().is_inverse_of(w.back());
}

ReducedWord rotate_left(const ReducedWord& c) {
  std::vector<Letter> ls(c.letters().begin() + 1, c.letters().end());
  ls.push_back(c.front());
  return ReducedWord(c.rank(), std::move(ls));
}

ReducedWord rotate_right(const ReducedWord& c) {
  std::vector<Letter> ls;
  ls.reserve(c.size());
  ls.push_back(c.back());
  ls.insert(ls.end(), c.letters().begin(), c.letters().end() - 1);
  return ReducedWord(c.rank(), std::move(ls));
}

}  // namespace

ReducedWord::ReducedWord(int rank, std::vector<Letter> reduced_letters)
    : rank_(rank), letters_(std::move(reduced_letters)) {
  check_rank(rank);
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    const Letter& l = letters_[i];
    if (l.index < 0 || l.index >= rank_)
      throw std::invalid_argument("letter index out of rank");
    if (l.sign != 1 && l.sign != -1)
      throw std::invalid_argument("letter sign must be +1 or -1");
    if (i > 0 && letters_[i - 1].is_inverse_of(l))
      throw std::invalid_argument("word is not freely reduced");
  }
}

bool operator<(const ReducedWord& a, const ReducedWord& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.letters().begin(), a.letters().end(),
                                      b.letters().begin(), b.letters().end());
}

ReducedWord reduce(const std::vector<Letter>& raw, int rank) {
  ReducedWord::check_rank(rank);
  std::vector<Letter> out;
  out.reserve(raw.size());
  for (const Letter& l : raw) {
    if (l.index < 0 || l.index >= rank)
      throw std::invalid_argument("letter index out of rank");
    push_reduced(out, l);
  }
  return ReducedWord(rank, std::move(out));
}

ReducedWord multiply(const ReducedWord& u, const ReducedWord& v) {
  check_same_rank(u.rank(), v.rank());
  std::vector<Letter> out = u.letters();
  for (const Letter& l : v.letters()) push_reduced(out, l);
  return ReducedWord(u.rank(), std::move(out));
}

ReducedWord invert(const ReducedWord& u) {
  std::vector<Letter> out;
  out.reserve(u.size());
  for (auto it = u.letters().rbegin(); it != u.letters().rend(); ++it)
    out.push_back(it->inverse());
  return ReducedWord(u.rank(), std::move(out));
}

ReducedWord power_word(const ReducedWord& u, int n) {
  ReducedWord base = n < 0 ? invert(u) : u;
  ReducedWord acc(u.rank());
  for (int i = 0, m = n < 0 ? -n : n; i < m; ++i) acc = multiply(acc, base);
  return acc;
}

CyclicDecomposition cyclic_reduce(const ReducedWord& u) {
  std::size_t lo = 0, hi = u.size();
  std::vector<Letter> conj;
  while (hi - lo >= 2 && u[lo].is_inverse_of(u[hi - 1])) {
    conj.push_back(u[lo]);
    ++lo;
    --hi;
  }
  std::vector<Letter> core(u.letters().begin() + lo, u.letters().begin() + hi);
  return CyclicDecomposition{ReducedWord(u.rank(), std::move(conj)),
                             ReducedWord(u.rank(), std::move(core))};
}

std::size_t gromov_product(const ReducedWord& x, const ReducedWord& y) {
  check_same_rank(x.rank(), y.rank());
  std::size_t n = std::min(x.size(), y.size());
  std::size_t i = 0;
  while (i < n && x[i] == y[i]) ++i;
  return i;
}

namespace {

Letter ep_letter_at(const EventuallyPeriodicWord& x, std::size_t i) {
  if (i < x.prefix.size()) return x.prefix[i];
  return x.period[(i - x.prefix.size()) % x.period.size()];
}

}  // namespace

std::size_t gromov_product(const EventuallyPeriodicWord& x,
                           const EventuallyPeriodicWord& y) {
  check_same_rank(x.rank(), y.rank());
  if (ep_equal(x, y)) return kGromovInfinity;
  // Fine-Wilf bound: distinct EP words disagree within
  // max(|u|,|u'|) + |c| + |c'| letters.
  std::size_t bound = std::max(x.prefix.size(), y.prefix.size()) +
                      x.period.size() + y.period.size() + 1;
  for (std::size_t i = 0; i < bound; ++i)
    if (ep_letter_at(x, i) != ep_letter_at(y, i)) return i;
  assert(false && "distinct EP words must differ within the Fine-Wilf bound");
  return bound;
}

std::size_t gromov_product(const EventuallyPeriodicWord& x,
                           const ReducedWord& y) {
  check_same_rank(x.rank(), y.rank());
  std::size_t i = 0;
  while (i < y.size() && ep_letter_at(x, i) == y[i]) ++i;
  return i;
}

std::size_t gromov_product(const ReducedWord& x,
                           const EventuallyPeriodicWord& y) {
  return gromov_product(y, x);
}

ReducedWord primitive_root(const ReducedWord& c) {
  const std::size_t n = c.size();
  for (std::size_t d = 1; d <= n / 2; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i)
      if (c[i] != c[i - d]) ok = false;
    if (ok)
      return ReducedWord(c.rank(), std::vector<Letter>(c.letters().begin(),
                                                       c.letters().begin() + d));
  }
  return c;
}

EventuallyPeriodicWord ep_normalize(const ReducedWord& u,
                                    const ReducedWord& c_in) {
  check_same_rank(u.rank(), c_in.rank());
  if (c_in.empty()) throw std::invalid_argument("ep_normalize: empty period");

  // u.c^inf = (u.s).c0^inf where c = s.c0.s^{-1}.
  CyclicDecomposition dec = cyclic_reduce(c_in);
  if (dec.core.empty())
    throw std::invalid_argument("ep_normalize: period is trivial");
  ReducedWord prefix = multiply(u, dec.conjugator);
  ReducedWord period = primitive_root(dec.core);

  // Cancel at the junction: dropping the last prefix letter against the
  // first period letter shifts the period phase left.
  while (!prefix.empty() && prefix.back().is_inverse_of(period.front())) {
    std::vector<Letter> p(prefix.letters().begin(), prefix.letters().end() - 1);
    prefix = ReducedWord(prefix.rank(), std::move(p));
    period = rotate_left(period);
  }
  // Absorb: if the prefix ends with the period's last letter, the point is
  // unchanged under shortening the prefix and rotating the period right.
  while (!prefix.empty() && prefix.back() == period.back()) {
    std::vector<Letter> p(prefix.letters().begin(), prefix.letters().end() - 1);
    prefix = ReducedWord(prefix.rank(), std::move(p));
    period = rotate_right(period);
  }
  return EventuallyPeriodicWord{std::move(prefix), std::move(period)};
}

EventuallyPeriodicWord ep_from_element(const ReducedWord& g) {
  if (g.empty())
    throw std::invalid_argument("ep_from_element: trivial element");
  CyclicDecomposition dec = cyclic_reduce(g);
  return ep_normalize(dec.conjugator, dec.core);
}

ReducedWord ep_prefix(const EventuallyPeriodicWord& x, std::size_t n) {
  std::vector<Letter> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(ep_letter_at(x, i));
  return ReducedWord(x.rank(), std::move(out));
}

bool ep_equal(const EventuallyPeriodicWord& x, const EventuallyPeriodicWord& y) {
  check_same_rank(x.rank(), y.rank());
  return x == y;
}

ReducedWord conjugacy_key(const ReducedWord& u) {
  ReducedWord core = cyclic_reduce(u).core;
  if (core.empty()) return core;
  ReducedWord best = core;
  ReducedWord rot = core;
  for (std::size_t i = 1; i < core.size(); ++i) {
    rot = rotate_left(rot);
    if (std::lexicographical_compare(rot.letters().begin(), rot.letters().end(),
                                     best.letters().begin(),
                                     best.letters().end()))
      best = rot;
  }
  return best;
}

std::string to_string(const Letter& l) {
  if (l.index < 26) {
    char c = static_cast<char>((l.sign > 0 ? 'a' : 'A') + l.index);
    return std::string(1, c);
  }
  std::ostringstream os;
  os << "x" << (l.index + 1) << (l.sign > 0 ? "" : "^-1");
  return os.str();
}

std::string to_string(const ReducedWord& w) {
  if (w.empty()) return "1";
  std::string out;
  for (const Letter& l : w.letters()) out += to_string(l);
  return out;
}

std::string to_string(const EventuallyPeriodicWord& x) {
  std::string out;
  if (!x.prefix.empty()) out += to_string(x.prefix);
  out += "(" + to_string(x.period) + ")^inf";
  return out;
}

ReducedWord parse_word(const std::string& text, int rank) {
  ReducedWord::check_rank(rank);
  if (text == "1" || text.empty()) return ReducedWord(rank);
  std::vector<Letter> raw;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    int idx;
    int sign;
    if (ch >= 'a' && ch <= 'z') {
      idx = ch - 'a';
      sign = +1;
    } else if (ch >= 'A' && ch <= 'Z') {
      idx = ch - 'A';
      sign = -1;
    } else {
      throw std::invalid_argument(std::string("bad character in word: ") + ch);
    }
    if (idx >= rank)
      throw std::invalid_argument(std::string("letter out of rank: ") + ch);
    raw.emplace_back(idx, sign);
  }
  return reduce(raw, rank);
}

EventuallyPeriodicWord parse_ep(const std::string& text, int rank) {
  auto open = text.find('(');
  auto close = text.find(')');
  if (open == std::string::npos || close == std::string::npos || close < open ||
      text.substr(close + 1) != "^inf")
    throw std::invalid_argument("EP word must be of the form u(c)^inf");
  ReducedWord u = parse_word(text.substr(0, open), rank);
  ReducedWord c = parse_word(text.substr(open + 1, close - open - 1), rank);
  return ep_normalize(u, c);
}

std::size_t ReducedWordHash::operator()(const ReducedWord& w) const {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::size_t>(w.rank()));
  for (const Letter& l : w.letters())
    mix(static_cast<std::size_t>(l.index * 2 + (l.sign > 0 ? 0 : 1)));
  return h;
}

}  // namespace fgd
