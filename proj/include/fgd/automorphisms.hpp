#pragma once

// Endomorphisms and certified automorphisms of F_k: application to words
// and boundary points, composition, Nielsen-move inversion with a
// replayable certificate, and the abelianization screen.

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fgd/words.hpp"

namespace fgd {

using IntegerMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Images of the k generators; not necessarily invertible.
class Endomorphism {
 public:
  explicit Endomorphism(std::vector<ReducedWord> images);
  static Endomorphism identity(int rank);

  int rank() const { return rank_; }
  const ReducedWord& image(int generator) const { return images_.at(generator); }
  const std::vector<ReducedWord>& images() const { return images_; }

  friend bool operator==(const Endomorphism& a, const Endomorphism& b) {
    return a.images_ == b.images_;
  }

 private:
  int rank_;
  std::vector<ReducedWord> images_;
};

ReducedWord apply(const Endomorphism& phi, const ReducedWord& w);
Endomorphism compose(const Endomorphism& phi, const Endomorphism& psi);
IntegerMatrix abelianization(const Endomorphism& phi);
std::int64_t determinant(const IntegerMatrix& m);

/// One elementary Nielsen transformation on a tuple of k words, identified
/// with the elementary automorphism precomposed when the tuple is an image
/// tuple.
struct NielsenMove {
  enum Kind {
    kInvert,        // v_i <- v_i^{-1}
    kSwap,          // v_i <-> v_j
    kMultiplyRight, // v_i <- v_i . v_j^s
    kMultiplyLeft,  // v_i <- v_j^s . v_i
  };
  Kind kind;
  int i = 0;
  int j = 0;
  int sign = +1;

  Endomorphism as_endomorphism(int rank) const;
};

void apply_move(std::vector<ReducedWord>& tuple, const NielsenMove& move);

/// An automorphism with a certified inverse.  The certificate is the
/// Nielsen-move sequence that reduces the image tuple to the standard basis;
/// replaying it on the basis produces the inverse.
class Automorphism {
 public:
  Automorphism(Endomorphism forward, Endomorphism inverse,
               std::vector<NielsenMove> certificate);

  int rank() const { return forward_.rank(); }
  const Endomorphism& forward() const { return forward_; }
  const Endomorphism& inverse() const { return inverse_; }
  const std::vector<NielsenMove>& certificate() const { return certificate_; }

  ReducedWord operator()(const ReducedWord& w) const { return apply(forward_, w); }
  Automorphism inverted() const;

  static Automorphism identity(int rank);

 private:
  Endomorphism forward_;
  Endomorphism inverse_;
  std::vector<NielsenMove> certificate_;
};

enum class InversionFailure {
  kDeterminantObstruction,  // abelianization determinant not +-1
  kNotSurjective,           // images do not Nielsen-reduce to a basis
};

struct InversionResult {
  std::optional<Automorphism> automorphism;
  std::optional<InversionFailure> failure;
  bool ok() const { return automorphism.has_value(); }
};

/// Nielsen reduction with move recording; succeeds iff phi is an automorphism.
InversionResult verify_and_invert(const Endomorphism& phi);

ReducedWord apply(const Automorphism& alpha, const ReducedWord& w);
EventuallyPeriodicWord apply_ep(const Automorphism& alpha,
                                const EventuallyPeriodicWord& x);
/// Endomorphism variant; throws if the period maps to the trivial element.
EventuallyPeriodicWord apply_ep(const Endomorphism& phi,
                                const EventuallyPeriodicWord& x);

Automorphism compose(const Automorphism& a, const Automorphism& b);
Automorphism power(const Automorphism& alpha, int n);

/// Conjugation g -> w g w^{-1}.
Automorphism inner(const ReducedWord& w);
/// i_w o alpha^q.
Automorphism twist(const Automorphism& alpha, const ReducedWord& w, int q);

/// Random automorphism as a composition of n_moves elementary Nielsen moves;
/// invertible by construction.
Automorphism random_automorphism(int rank, int n_moves, std::mt19937_64& rng);
ReducedWord random_reduced_word(int rank, std::size_t length,
                                std::mt19937_64& rng);

// -- file format -------------------------------------------------------------
// Line-based: header "rank k", then one "a -> cb" line per generator.
Endomorphism parse_endomorphism(const std::string& text);
Endomorphism load_endomorphism(const std::string& path);
std::string format_endomorphism(const Endomorphism& phi);

}  // namespace fgd
