#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "hvr2/exppoly.hpp"
#include "hvr2/module.hpp"

namespace hvr2 {

// Which generators of the level-zero direction algebra act on a Laurent
// module: both graded families plus the central elements, only the E-family,
// or only the t-family.
enum class HSubalgebra { Full, EOnly, TOnly };

// Laurent-power module: basis t^n for |n| <= window, all concentrated on
// the b1-graded row, with the shift action weighted by the rho values and
// the b2-central values acting as declared scalars (Full only). The module
// is not generated by any single row, so radical-style queries do not apply.
ModulePtr laurent_T(const RhoSpec& rho, HSubalgebra alg, const BasisPair& b, int window);

struct ClassifyResult {
  long r = 0;
  bool irreducible = false;
  std::vector<long> support;  // degrees with a nonzero acting value, sorted
};

// Decides irreducibility of the Laurent module from the additive monoid
// generated by the acting degrees: irreducible iff that monoid is a group
// r*Z with r = gcd of the support. Empty support (r = 0) leaves every line
// invariant, so only the one-dimensional window-zero module counts as
// irreducible then. Requires the window to contain twice the support of a
// table-kind rho.
ClassifyResult classify_T_rho(const RhoSpec& rho, HSubalgebra alg, const BasisPair& b,
                              int window);

// Polynomial-algebra module on one side of the E-family: basis are
// multisets of lowering generators E(-k b1) (epsilon '+') or E(k b1)
// (epsilon '-') of total size <= depth; the opposite side acts by scaled
// part-removal with f(b1) acting by a. Graded dimensions are the integer
// partition numbers.
ModulePtr fock(char epsilon, const Rational& a, const BasisPair& b, int depth);

// Two-variable-family analogue induced from a line killed by one side of
// both families, with central levels c = (f(b1), h(b1), f(b2), h(b2)).
// Basis are commuting monomials in E(-k b1) and t^{-k b1} (epsilon '+');
// graded dimensions are the two-colored partition numbers.
ModulePtr verma_H(const std::array<Rational, 4>& c, char epsilon, const BasisPair& b,
                  int depth);

// Tensor of a t-family-only Laurent module with the Fock module of level
// c1: E-generators act on the Fock factor, t-generators shift the Laurent
// exponent (weighted by rho), and the exponents retained are the additive
// closure of rho's t-support inside the window. Rejected unless c1 != 0 and
// rho vanishes on the E-family (the classification case this realizes).
ModulePtr tensor_M_rho(const RhoSpec& rho, char epsilon, const Rational& c1,
                       const BasisPair& b, int depth, int window);

// Adds the diagonal derivation action to a b1-graded module: grade j gets
// d-eigenvalues lambda + j * b1 (componentwise in standard coordinates).
ModulePtr extend_to_L0(ModulePtr h_mod, std::pair<Rational, Rational> lambda,
                       const BasisPair& b);

// Induced module over the whole algebra from a level-zero module carrying a
// derivation action: basis are sorted words in the lowering generators
// (b2-levels -1..-depth, b1-coordinates within the window) applied to the
// base module's basis, with actions computed by commutator straightening
// through the word; the raising half annihilates the base row.
ModulePtr induce(const BasisPair& b, ModulePtr v0_mod, const Truncation& trunc);

// Same engine over a one-dimensional top line on which the level-zero
// direction algebra acts through rho; the b1-offset is not a grading here
// (level-zero generators return to the same weight space), so weights are
// indexed by the b2-level alone. This is the pre-quotient module.
ModulePtr highest_weight_raw(const RhoSpec& rho, const BasisPair& b, const Truncation& trunc);

// The quotient of highest_weight_raw by its radical.
ModulePtr highest_weight_V_rho(const RhoSpec& rho, const BasisPair& b,
                               const Truncation& trunc);

// Quotient of any top-generated module by its radical.
ModulePtr irreducible_quotient(ModulePtr mod);

// Tensor of highest_weight_V_rho with Laurent powers t^k, |k| <= window:
// graded generators shift k by their b1-coordinate while acting on the
// first factor; the combined derivations p1 d1 + p2 d2 and q1 d1 + q2 d2
// (rows of the inverse basis matrix) read off k and the level. When i is
// given, restricts to the submodule generated by the top vector tensor t^i
// (index taken mod r when the classification r is >= 1).
ModulePtr hat_V(const RhoSpec& rho, const BasisPair& b, const Truncation& trunc,
                std::optional<long> i = std::nullopt);

}  // namespace hvr2
