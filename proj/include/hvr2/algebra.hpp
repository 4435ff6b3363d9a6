#pragma once

#include <map>
#include <string>
#include <vector>

#include "hvr2/lattice.hpp"
#include "hvr2/rational.hpp"

namespace hvr2 {

// One spanning symbol of the extended algebra: the two lattice-graded
// families E(m) and t^m (m nonzero), the four central elements K1..K4, and
// the two degree derivations d1, d2.
enum class SymKind { E, T, K, D };

struct BasisSymbol {
  SymKind kind;
  Vec2 m{0, 0};  // degree, for E/T only
  int idx = 0;   // 1..4 for K, 1..2 for D

  static BasisSymbol mkE(Vec2 m);
  static BasisSymbol mkT(Vec2 m);
  static BasisSymbol mkK(int i);
  static BasisSymbol mkD(int i);

  Vec2 degree() const { return (kind == SymKind::E || kind == SymKind::T) ? m : Vec2{0, 0}; }
  bool is_graded() const { return kind == SymKind::E || kind == SymKind::T; }

  std::string str() const;

  friend bool operator==(const BasisSymbol& a, const BasisSymbol& b) {
    return a.kind == b.kind && a.m == b.m && a.idx == b.idx;
  }
  friend bool operator<(const BasisSymbol& a, const BasisSymbol& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (!(a.m == b.m)) return a.m < b.m;
    return a.idx < b.idx;
  }
};

// Finite rational combination of basis symbols.
using LieElement = std::map<BasisSymbol, Rational>;

void add_term(LieElement& x, const BasisSymbol& s, const Rational& c);
LieElement scale(const LieElement& x, const Rational& c);
LieElement add(const LieElement& x, const LieElement& y);
bool is_zero(const LieElement& x);

// h(m) = m1 K1 + m2 K2 and f(m) = m1 K3 + m2 K4, the central values paired
// with the two graded families.
LieElement h_of(Vec2 m);
LieElement f_of(Vec2 m);

// Structure constants of the algebra. Both graded families commute with the
// central elements; the derivations act by degree; within and across the two
// graded families the coefficient is the determinant of the degree pair,
// with a central correction when the degrees cancel. Symbols of degree zero
// produced by the bracket are zero and are dropped silently.
LieElement bracket(const BasisSymbol& a, const BasisSymbol& b);
LieElement bracket(const LieElement& x, const LieElement& y);

// [x,[y,z]] + [y,[z,x]] + [z,[x,y]]; identically zero, kept as a checkable
// witness for fuzz tests.
LieElement jacobi_defect(const LieElement& x, const LieElement& y, const LieElement& z);

// Split by the sign of the second coordinate of each graded symbol's degree
// in the given basis; central elements and derivations sit in the zero part.
struct TriangularSplit {
  LieElement minus, zero, plus;
};
TriangularSplit triangular_part(const LieElement& x, const BasisPair& b);

// Distinguished subalgebras attached to a direction b1: the full level-zero
// graded piece H(b1) (both families along b1, all central elements); the
// E-family half with its central value f(b1); the bare t-family line; and
// the basis-independent span of all E-symbols with K3, K4.
enum class SubalgebraId { H_b1, E_b1, t_b1, E_script };
bool in_subalgebra(const LieElement& x, SubalgebraId which, const BasisPair& b);

// Words in the enveloping algebra of one nilpotent direction part.
using Monomial = std::vector<BasisSymbol>;
using MonomialSum = std::map<Monomial, Rational>;

// Generator order used to straighten words in the lower triangular part:
// second-basis-coordinate level descending (-1 before -2), then first
// coordinate ascending, then E before t. The comparator is total on graded
// symbols and works on either triangular half.
struct PbwOrder {
  BasisPair b;
  bool operator()(const BasisSymbol& u, const BasisSymbol& v) const;
};

enum class SwapSchedule { FirstInversion, LastInversion };

// Rewrites a word as a combination of sorted words by adjacent swaps, each
// swap paying the bracket of the transposed pair. Terminates because every
// correction term is strictly shorter. The schedule picks which inversion to
// resolve next; the result is schedule-independent (tested), FirstInversion
// is the default used everywhere.
class Straightener {
public:
  explicit Straightener(BasisPair b) : order_{b} {}
  const MonomialSum& straighten(const Monomial& w,
                                SwapSchedule sched = SwapSchedule::FirstInversion);

private:
  PbwOrder order_;
  std::map<std::pair<Monomial, SwapSchedule>, MonomialSum> memo_;
};

// Public normal form. Requires every symbol graded with the same sign of the
// second basis coordinate (one nilpotent triangular part); mixed input or
// central/derivation symbols are rejected since straightening is not defined
// for them here.
MonomialSum pbw_normal_form(const Monomial& word, const BasisPair& b,
                            SwapSchedule sched = SwapSchedule::FirstInversion);

}  // namespace hvr2
