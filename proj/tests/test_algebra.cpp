#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hvr2/algebra.hpp"

using namespace hvr2;

namespace {

LieElement one(const BasisSymbol& s) {
  LieElement x;
  add_term(x, s, Rational(1));
  return x;
}

Rational coeff(const LieElement& x, const BasisSymbol& s) {
  auto it = x.find(s);
  return it == x.end() ? Rational(0) : it->second;
}

// A pool of symbols from a small window, plus all central and derivation
// generators, for randomized identity checks.
std::vector<BasisSymbol> symbol_pool(long window) {
  std::vector<BasisSymbol> pool;
  for (long a = -window; a <= window; ++a)
    for (long b = -window; b <= window; ++b) {
      if (a == 0 && b == 0) continue;
      pool.push_back(BasisSymbol::mkE({a, b}));
      pool.push_back(BasisSymbol::mkT({a, b}));
    }
  for (int i = 1; i <= 4; ++i) pool.push_back(BasisSymbol::mkK(i));
  for (int i = 1; i <= 2; ++i) pool.push_back(BasisSymbol::mkD(i));
  return pool;
}

}  // namespace

TEST_CASE("symbol formatting and ordering") {
  CHECK(BasisSymbol::mkE({1, -2}).str() == "E[1,-2]");
  CHECK(BasisSymbol::mkT({0, 3}).str() == "t[0,3]");
  CHECK(BasisSymbol::mkK(3).str() == "K3");
  CHECK(BasisSymbol::mkD(2).str() == "d2");
  CHECK(BasisSymbol::mkE({1, 1}) == BasisSymbol::mkE({1, 1}));
  CHECK(!(BasisSymbol::mkE({1, 1}) == BasisSymbol::mkT({1, 1})));
}

TEST_CASE("element arithmetic drops cancelled terms") {
  LieElement x = one(BasisSymbol::mkE({1, 0}));
  LieElement y = scale(x, Rational(-1));
  CHECK(is_zero(add(x, y)));
  add_term(x, BasisSymbol::mkE({1, 0}), Rational(-1));
  CHECK(is_zero(x));
  CHECK(x.empty());  // cancellation erases the key entirely
}

TEST_CASE("mixed bracket sign convention") {
  // The commutator of the two families at crossing degrees fixes the global
  // sign: [t^(1,0), E(0,1)] = -1 * t^(1,1).
  LieElement r = bracket(BasisSymbol::mkT({1, 0}), BasisSymbol::mkE({0, 1}));
  CHECK(r.size() == 1);
  CHECK(coeff(r, BasisSymbol::mkT({1, 1})) == Rational(-1));

  // Swapping arguments flips the sign.
  LieElement s = bracket(BasisSymbol::mkE({0, 1}), BasisSymbol::mkT({1, 0}));
  CHECK(coeff(s, BasisSymbol::mkT({1, 1})) == Rational(1));

  // General degree pair: coefficient is det2(n, m) on t^(m+n).
  LieElement g = bracket(BasisSymbol::mkT({2, -1}), BasisSymbol::mkE({1, 3}));
  CHECK(coeff(g, BasisSymbol::mkT({3, 2})) == Rational(det2({1, 3}, {2, -1})));
}

TEST_CASE("E-family bracket carries central correction at cancelling degrees") {
  // [E(m), E(-m)] lands purely in the span of K3, K4 via f(m).
  LieElement r = bracket(BasisSymbol::mkE({2, 3}), BasisSymbol::mkE({-2, -3}));
  CHECK(coeff(r, BasisSymbol::mkK(3)) == Rational(2));
  CHECK(coeff(r, BasisSymbol::mkK(4)) == Rational(3));
  CHECK(coeff(r, BasisSymbol::mkK(1)) == Rational(0));

  // Mixed families at cancelling degrees produce h(m) = m1 K1 + m2 K2.
  LieElement m = bracket(BasisSymbol::mkT({2, 3}), BasisSymbol::mkE({-2, -3}));
  CHECK(coeff(m, BasisSymbol::mkK(1)) == Rational(2));
  CHECK(coeff(m, BasisSymbol::mkK(2)) == Rational(3));
  CHECK(coeff(m, BasisSymbol::mkK(3)) == Rational(0));

  // Noncancelling E-pair: determinant coefficient on E(m+n).
  LieElement g = bracket(BasisSymbol::mkE({1, 0}), BasisSymbol::mkE({0, 1}));
  CHECK(coeff(g, BasisSymbol::mkE({1, 1})) == Rational(det2({0, 1}, {1, 0})));
}

TEST_CASE("t-family is abelian and centrals are central") {
  CHECK(is_zero(bracket(BasisSymbol::mkT({1, 2}), BasisSymbol::mkT({-3, 5}))));
  CHECK(is_zero(bracket(BasisSymbol::mkT({1, 0}), BasisSymbol::mkT({-1, 0}))));
  for (int i = 1; i <= 4; ++i) {
    CHECK(is_zero(bracket(BasisSymbol::mkK(i), BasisSymbol::mkE({5, 5}))));
    CHECK(is_zero(bracket(BasisSymbol::mkK(i), BasisSymbol::mkT({-2, 1}))));
    CHECK(is_zero(bracket(BasisSymbol::mkK(i), BasisSymbol::mkD(1))));
  }
}

TEST_CASE("degree-zero bracket output is dropped silently") {
  // [E(m), E(n)] with m + n = 0 would produce E(0); only the central part
  // survives. With det != 0 and f(m) = 0 the bracket must still be central
  // only - never an E(0) or t^0 symbol.
  LieElement r = bracket(BasisSymbol::mkE({1, 0}), BasisSymbol::mkE({-1, 0}));
  for (const auto& [sym, c] : r) {
    CHECK(sym.kind == SymKind::K);
  }
  CHECK(coeff(r, BasisSymbol::mkK(3)) == Rational(1));
}

TEST_CASE("derivations act by degree coordinates") {
  LieElement r = bracket(BasisSymbol::mkD(1), BasisSymbol::mkE({3, 5}));
  CHECK(coeff(r, BasisSymbol::mkE({3, 5})) == Rational(3));
  LieElement s = bracket(BasisSymbol::mkD(2), BasisSymbol::mkT({3, 5}));
  CHECK(coeff(s, BasisSymbol::mkT({3, 5})) == Rational(5));
  CHECK(is_zero(bracket(BasisSymbol::mkD(1), BasisSymbol::mkD(2))));
  CHECK(is_zero(bracket(BasisSymbol::mkD(1), BasisSymbol::mkK(2))));
}

TEST_CASE("central value helpers") {
  LieElement h = h_of({4, -7});
  CHECK(coeff(h, BasisSymbol::mkK(1)) == Rational(4));
  CHECK(coeff(h, BasisSymbol::mkK(2)) == Rational(-7));
  LieElement f = f_of({4, -7});
  CHECK(coeff(f, BasisSymbol::mkK(3)) == Rational(4));
  CHECK(coeff(f, BasisSymbol::mkK(4)) == Rational(-7));
  CHECK(is_zero(h_of({0, 0})));
}

TEST_CASE("bracket is antisymmetric and satisfies the Jacobi identity") {
  std::vector<BasisSymbol> pool = symbol_pool(3);
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    LieElement x = one(pool[pick(rng)]);
    LieElement y = one(pool[pick(rng)]);
    LieElement z = one(pool[pick(rng)]);
    CHECK(is_zero(add(bracket(x, y), bracket(y, x))));
    CHECK(is_zero(jacobi_defect(x, y, z)));
  }
  // Also on genuine linear combinations.
  LieElement x = add(one(BasisSymbol::mkE({1, 2})), scale(one(BasisSymbol::mkT({-1, 1})), Rational(3, 2)));
  LieElement y = add(one(BasisSymbol::mkD(1)), one(BasisSymbol::mkE({-1, -2})));
  LieElement z = add(one(BasisSymbol::mkT({1, -3})), scale(one(BasisSymbol::mkK(2)), Rational(-5)));
  CHECK(is_zero(jacobi_defect(x, y, z)));
}

TEST_CASE("triangular split in a chosen basis") {
  BasisPair b = standard_basis();
  LieElement x;
  add_term(x, BasisSymbol::mkE({2, 1}), Rational(1));    // plus
  add_term(x, BasisSymbol::mkT({3, -2}), Rational(2));   // minus
  add_term(x, BasisSymbol::mkE({5, 0}), Rational(3));    // zero level
  add_term(x, BasisSymbol::mkK(1), Rational(4));         // zero
  add_term(x, BasisSymbol::mkD(2), Rational(5));         // zero
  TriangularSplit sp = triangular_part(x, b);
  CHECK(sp.plus.size() == 1);
  CHECK(sp.minus.size() == 1);
  CHECK(sp.zero.size() == 3);
  CHECK(coeff(sp.plus, BasisSymbol::mkE({2, 1})) == Rational(1));
  CHECK(coeff(sp.minus, BasisSymbol::mkT({3, -2})) == Rational(2));

  // A skew basis reclassifies: level of (2,1) wrt b1=(1,1), b2=(0,1) is -1.
  BasisPair s{{1, 1}, {0, 1}};
  TriangularSplit sp2 = triangular_part(one(BasisSymbol::mkE({2, 1})), s);
  CHECK(sp2.minus.size() == 1);
  CHECK(sp2.plus.empty());
}

TEST_CASE("subalgebra membership") {
  BasisPair b = standard_basis();
  LieElement h_elem = add(one(BasisSymbol::mkE({2, 0})), one(BasisSymbol::mkK(1)));
  CHECK(in_subalgebra(h_elem, SubalgebraId::H_b1, b));
  CHECK(!in_subalgebra(one(BasisSymbol::mkE({1, 1})), SubalgebraId::H_b1, b));
  CHECK(!in_subalgebra(one(BasisSymbol::mkT({1, 0})), SubalgebraId::E_b1, b));
  CHECK(in_subalgebra(one(BasisSymbol::mkE({-3, 0})), SubalgebraId::E_b1, b));
  CHECK(in_subalgebra(one(BasisSymbol::mkT({2, 0})), SubalgebraId::t_b1, b));
  CHECK(!in_subalgebra(one(BasisSymbol::mkK(1)), SubalgebraId::t_b1, b));
  CHECK(in_subalgebra(add(one(BasisSymbol::mkE({1, 1})), one(BasisSymbol::mkK(4))),
                      SubalgebraId::E_script, b));
  CHECK(!in_subalgebra(one(BasisSymbol::mkK(1)), SubalgebraId::E_script, b));
}

TEST_CASE("straightening is independent of the swap schedule") {
  BasisPair b = standard_basis();
  // Lower-triangular words (second coordinate negative) in scrambled order.
  std::vector<Monomial> words = {
      {BasisSymbol::mkE({1, -2}), BasisSymbol::mkE({0, -1})},
      {BasisSymbol::mkT({2, -1}), BasisSymbol::mkE({0, -1}), BasisSymbol::mkE({1, -1})},
      {BasisSymbol::mkE({1, -1}), BasisSymbol::mkT({0, -1}), BasisSymbol::mkE({-1, -1}),
       BasisSymbol::mkT({1, -2})},
      {BasisSymbol::mkE({0, -2}), BasisSymbol::mkE({0, -1}), BasisSymbol::mkE({0, -2}),
       BasisSymbol::mkT({1, -1})},
  };
  for (const Monomial& w : words) {
    MonomialSum first = pbw_normal_form(w, b, SwapSchedule::FirstInversion);
    MonomialSum last = pbw_normal_form(w, b, SwapSchedule::LastInversion);
    CHECK(first == last);
    // Every surviving word is sorted in the generator order.
    PbwOrder order{b};
    for (const auto& [word, c] : first) {
      for (std::size_t i = 0; i + 1 < word.size(); ++i) {
        CHECK(!order(word[i + 1], word[i]));
      }
    }
  }
}

TEST_CASE("straightening a commuting pair just sorts it") {
  BasisPair b = standard_basis();
  Monomial w = {BasisSymbol::mkT({1, -1}), BasisSymbol::mkT({0, -1})};
  MonomialSum nf = pbw_normal_form(w, b);
  REQUIRE(nf.size() == 1);
  Monomial sorted_w = {BasisSymbol::mkT({0, -1}), BasisSymbol::mkT({1, -1})};
  CHECK(nf.begin()->first == sorted_w);
  CHECK(nf.begin()->second == Rational(1));
}

TEST_CASE("straightening rejects mixed or ungraded input") {
  BasisPair b = standard_basis();
  CHECK_THROWS_AS(pbw_normal_form({BasisSymbol::mkE({0, 1}), BasisSymbol::mkE({0, -1})}, b),
                  std::invalid_argument);
  CHECK_THROWS_AS(pbw_normal_form({BasisSymbol::mkK(1)}, b), std::invalid_argument);
}
