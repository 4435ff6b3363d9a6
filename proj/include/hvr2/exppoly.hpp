#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "hvr2/lattice.hpp"
#include "hvr2/rational.hpp"

namespace hvr2 {

// One term c * n^m * a^n of an exponential-polynomial function of n; the
// base a must be nonzero so the function is defined on all integers.
struct ExpTerm {
  Rational c;
  long m = 0;  // polynomial degree, >= 0
  Rational a;
};

// Finite sum of such terms, kept normalized: like (m, a) pairs are merged
// and zero coefficients dropped, so the zero function has no terms.
class ExpPolynomial {
public:
  ExpPolynomial() = default;
  explicit ExpPolynomial(std::vector<ExpTerm> terms);

  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational eval(long n) const;

private:
  std::vector<ExpTerm> terms_;  // sorted by (a, m)
};

// Linear recurrence sum_{i=0..n} a_i f(m+i) = 0 with a_0 and a_n nonzero,
// so it constrains f in both directions.
struct Recurrence {
  std::vector<Rational> a;  // size n+1, n >= 1

  int order() const { return static_cast<int>(a.size()) - 1; }
  static Recurrence make(std::vector<Rational> coeffs);  // validates ends
};

// Annihilator read off the term data: the product of (x - a)^{m+1} over the
// terms. Rejects the zero function (it has no distinguished annihilator).
Recurrence characteristic_recurrence(const ExpPolynomial& f);

// Checks the recurrence on every window [m, m+n] inside [lo, hi].
bool satisfies_recurrence(const std::function<Rational(long)>& g, const Recurrence& rec,
                          long lo, long hi);

// Action data for the level-zero graded piece along b1 on a one-dimensional
// top: values on both graded families E(k b1), t^{k b1}, plus the two
// central values attached to the b2-direction. Values along b1 itself
// (f(b1), h(b1)) are always zero for these modules.
//
// Two kinds: an explicit finite table (values off the table are zero), or
// closed-form data g1, g2 with rho(E(k b1)) = g1(k)/k, rho(t^{k b1}) =
// g2(k)/k and the b2-central values derived as g(0)/det(b1;b2). For the
// closed-form kind an explicitly supplied central value must agree with the
// derived one; the mismatch is rejected when the data is bound to a basis.
class RhoSpec {
public:
  enum class Kind { Table, ExpPoly };

  static RhoSpec table(std::map<long, Rational> e_vals, std::map<long, Rational> t_vals,
                       Rational f_b2, Rational h_b2);
  static RhoSpec exp_poly(ExpPolynomial g1, ExpPolynomial g2,
                          std::optional<Rational> explicit_f_b2 = std::nullopt,
                          std::optional<Rational> explicit_h_b2 = std::nullopt);

  Kind kind() const { return kind_; }

  // Throws on an explicit central value inconsistent with the derived one.
  void validate(const BasisPair& b) const;

  Rational rho_E(long k) const;  // k != 0
  Rational rho_t(long k) const;
  Rational f_b2(const BasisPair& b) const;
  Rational h_b2(const BasisPair& b) const;

  // g1(m) = m * rho(E(m b1)) for m != 0, det(b1;b2) * f(b2)-value at m = 0;
  // same shape for g2 with the t-family and h.
  Rational g1_at(long m, const BasisPair& b) const;
  Rational g2_at(long m, const BasisPair& b) const;

  // Degrees k with a nonzero value on either family. Finite for the table
  // kind; for the closed-form kind restricted to |k| <= probe window.
  std::set<long> support(long probe_window) const;

  const std::map<long, Rational>& table_E() const { return e_vals_; }
  const std::map<long, Rational>& table_t() const { return t_vals_; }
  const ExpPolynomial& g1() const { return g1_; }
  const ExpPolynomial& g2() const { return g2_; }

private:
  RhoSpec() = default;
  Kind kind_ = Kind::Table;
  std::map<long, Rational> e_vals_, t_vals_;
  Rational table_f_b2_, table_h_b2_;
  ExpPolynomial g1_, g2_;
  std::optional<Rational> explicit_f_b2_, explicit_h_b2_;
};

// Evaluators for the pair (g1, g2) attached to rho over the given basis.
std::pair<std::function<Rational(long)>, std::function<Rational(long)>> rho_to_g(
    const RhoSpec& rho, const BasisPair& b);

// Closed-form inverse of rho_to_g.
RhoSpec g_to_rho(const ExpPolynomial& g1, const ExpPolynomial& g2);

struct RecurrenceSearchResult {
  std::optional<Recurrence> witness;  // empty means undetermined, never "no"
  bool yes() const { return witness.has_value(); }
};

// Looks for one recurrence of order <= order_bound annihilating both g1 and
// g2 over [lo, hi] (all windows, including those covering m = 0). The
// system is solved exactly; a kernel element with nonzero end coefficients
// is returned as the witness, smallest order first. Requires
// hi - lo + 1 >= 3 * order_bound so the data genuinely overdetermines the
// search; absence of a witness is reported as undetermined.
RecurrenceSearchResult is_exp_polynomial_over_H(const RhoSpec& rho, const BasisPair& b,
                                                int order_bound, long lo, long hi);

}  // namespace hvr2
