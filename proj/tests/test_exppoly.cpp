#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hvr2/exppoly.hpp"

using namespace hvr2;

namespace {

ExpPolynomial ep(std::vector<ExpTerm> ts) { return ExpPolynomial(std::move(ts)); }

Rational two_pow(long n) { return Rational(2).pow(n); }

}  // namespace

TEST_CASE("exponential polynomial evaluation and normalization") {
  // f(n) = 3*n^2*1^n + (1/2)*2^n
  ExpPolynomial f = ep({{Rational(3), 2, Rational(1)}, {Rational(1, 2), 0, Rational(2)}});
  CHECK(f.eval(0) == Rational(1, 2));
  CHECK(f.eval(2) == Rational(14));
  CHECK(f.eval(-1) == Rational(3) + Rational(1, 4));

  // Like terms merge; cancelling terms vanish entirely.
  ExpPolynomial g = ep({{Rational(1), 1, Rational(3)}, {Rational(-1), 1, Rational(3)}});
  CHECK(g.is_zero());
  ExpPolynomial h = ep({{Rational(1), 1, Rational(3)}, {Rational(2), 1, Rational(3)}});
  CHECK(h.terms().size() == 1);
  CHECK(h.terms()[0].c == Rational(3));

  // Base zero is rejected (the function would be ill-defined at negatives).
  CHECK_THROWS(ep({{Rational(1), 0, Rational(0)}}));
}

TEST_CASE("recurrence construction validates end coefficients") {
  Recurrence r = Recurrence::make({Rational(-2), Rational(1)});
  CHECK(r.order() == 1);
  CHECK_THROWS(Recurrence::make({Rational(1)}));              // order 0
  CHECK_THROWS(Recurrence::make({Rational(0), Rational(1)})); // a_0 = 0
  CHECK_THROWS(Recurrence::make({Rational(1), Rational(0)})); // a_n = 0
}

TEST_CASE("characteristic recurrence annihilates its function") {
  std::vector<ExpPolynomial> fixtures = {
      ep({{Rational(1), 0, Rational(2)}}),                          // 2^n
      ep({{Rational(1), 1, Rational(1)}}),                          // n
      ep({{Rational(1), 3, Rational(1)}}),                          // n^3
      ep({{Rational(5, 3), 2, Rational(-1, 2)}}),                   // (5/3) n^2 (-1/2)^n
      ep({{Rational(1), 0, Rational(1)}, {Rational(1), 0, Rational(3)}}),  // 1 + 3^n
      ep({{Rational(2), 1, Rational(2)}, {Rational(-7), 0, Rational(1, 5)}}),
  };
  for (const ExpPolynomial& f : fixtures) {
    Recurrence rec = characteristic_recurrence(f);
    CHECK(satisfies_recurrence([&](long n) { return f.eval(n); }, rec, -20, 20));
  }
  // The simplest doubling pin: f(n+1) - 2 f(n) = 0 for 2^n.
  Recurrence doubling = characteristic_recurrence(ep({{Rational(1), 0, Rational(2)}}));
  CHECK(doubling.order() == 1);
  CHECK(doubling.a[0] / doubling.a[1] == Rational(-2));
  CHECK_THROWS(characteristic_recurrence(ExpPolynomial()));
}

TEST_CASE("randomized exp-polynomials satisfy their characteristic recurrence") {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<long> coef(-5, 5), base(-3, 3), deg(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ExpTerm> terms;
    int nterms = 1 + static_cast<int>(trial % 3);
    for (int i = 0; i < nterms; ++i) {
      long a = 0;
      while (a == 0) a = base(rng);
      long c = coef(rng);
      if (c == 0) c = 1;
      terms.push_back({Rational(c), deg(rng), Rational(a)});
    }
    ExpPolynomial f = ep(terms);
    if (f.is_zero()) continue;
    Recurrence rec = characteristic_recurrence(f);
    CHECK(satisfies_recurrence([&](long n) { return f.eval(n); }, rec, -20, 20));
  }
}

TEST_CASE("recurrence checking detects a non-solution") {
  // 3^n does not satisfy the doubling recurrence.
  Recurrence doubling = Recurrence::make({Rational(-2), Rational(1)});
  CHECK(!satisfies_recurrence([](long n) { return Rational(3).pow(n); }, doubling, 0, 5));
  CHECK(satisfies_recurrence([](long n) { return two_pow(n); }, doubling, -10, 10));
}

TEST_CASE("table action data evaluates and exposes central values") {
  RhoSpec rho = RhoSpec::table({{1, Rational(1)}, {-1, Rational(1)}}, {},
                               Rational(2), Rational(1, 3));
  CHECK(rho.rho_E(1) == Rational(1));
  CHECK(rho.rho_E(-1) == Rational(1));
  CHECK(rho.rho_E(5) == Rational(0));  // off the table means zero
  CHECK(rho.rho_t(1) == Rational(0));
  BasisPair b = standard_basis();
  CHECK(rho.f_b2(b) == Rational(2));
  CHECK(rho.h_b2(b) == Rational(1, 3));
  CHECK(rho.support(10) == std::set<long>{-1, 1});
  rho.validate(b);  // table data is always consistent
}

TEST_CASE("closed-form action data derives central values from g at zero") {
  // g1(m) = m so rho(E(m b1)) = 1 for every m, and f(b2) = g1(0)/det = 0.
  RhoSpec rho = RhoSpec::exp_poly(ep({{Rational(1), 1, Rational(1)}}), ExpPolynomial());
  BasisPair b = standard_basis();
  CHECK(rho.rho_E(7) == Rational(1));
  CHECK(rho.rho_E(-2) == Rational(1));
  CHECK(rho.f_b2(b) == Rational(0));
  CHECK(rho.h_b2(b) == Rational(0));

  // Constant g1 = 1 gives rho(E(m b1)) = 1/m and f(b2) = 1/det.
  RhoSpec c = RhoSpec::exp_poly(ep({{Rational(1), 0, Rational(1)}}), ExpPolynomial());
  CHECK(c.rho_E(2) == Rational(1, 2));
  CHECK(c.rho_E(-3) == Rational(-1, 3));
  CHECK(c.f_b2(b) == Rational(1));
  BasisPair skew{{0, 1}, {1, 0}};  // det = -1
  CHECK(c.f_b2(skew) == Rational(-1));

  // An explicit central value inconsistent with the derived one is rejected.
  RhoSpec bad = RhoSpec::exp_poly(ep({{Rational(1), 0, Rational(1)}}), ExpPolynomial(),
                                  Rational(5), std::nullopt);
  CHECK_THROWS(bad.validate(b));
  RhoSpec good = RhoSpec::exp_poly(ep({{Rational(1), 0, Rational(1)}}), ExpPolynomial(),
                                   Rational(1), std::nullopt);
  good.validate(b);
}

TEST_CASE("g evaluators round trip with the closed-form builder") {
  BasisPair b = standard_basis();
  ExpPolynomial g1 = ep({{Rational(3), 1, Rational(2)}});           // 3 n 2^n
  ExpPolynomial g2 = ep({{Rational(1), 0, Rational(1)}, {Rational(-1), 2, Rational(1)}});
  RhoSpec rho = g_to_rho(g1, g2);
  auto [e1, e2] = rho_to_g(rho, b);
  for (long m = -8; m <= 8; ++m) {
    CHECK(e1(m) == g1.eval(m));
    CHECK(e2(m) == g2.eval(m));
    CHECK(rho.g1_at(m, b) == g1.eval(m));
    CHECK(rho.g2_at(m, b) == g2.eval(m));
  }
  // Round trip through the evaluators recovers the same action values.
  for (long k = 1; k <= 6; ++k) {
    CHECK(rho.rho_E(k) * Rational(k) == g1.eval(k));
    CHECK(rho.rho_t(-k) * Rational(-k) == g2.eval(-k));
  }
}

TEST_CASE("g evaluators for a finite table extend by zero") {
  BasisPair b = standard_basis();
  RhoSpec rho = RhoSpec::table({{2, Rational(1, 2)}}, {{1, Rational(4)}},
                               Rational(0), Rational(0));
  auto [e1, e2] = rho_to_g(rho, b);
  CHECK(e1(2) == Rational(1));   // 2 * (1/2)
  CHECK(e1(3) == Rational(0));
  CHECK(e2(1) == Rational(4));
  CHECK(e1(0) == Rational(0));   // derived from the zero central value
}

TEST_CASE("recurrence search certifies closed-form action data") {
  BasisPair b = standard_basis();
  // g1(m) = m: annihilated by order 2 (double root at 1).
  RhoSpec linear = RhoSpec::exp_poly(ep({{Rational(1), 1, Rational(1)}}), ExpPolynomial());
  RecurrenceSearchResult r = is_exp_polynomial_over_H(linear, b, 4, -8, 8);
  REQUIRE(r.yes());
  CHECK(r.witness->order() <= 2);

  // g1(m) = 2^m together with g2(m) = m needs roots {2, 1, 1}: order 3.
  RhoSpec pair = RhoSpec::exp_poly(ep({{Rational(1), 0, Rational(2)}}),
                                   ep({{Rational(1), 1, Rational(1)}}));
  RecurrenceSearchResult rp = is_exp_polynomial_over_H(pair, b, 4, -8, 8);
  REQUIRE(rp.yes());
  CHECK(rp.witness->order() <= 3);
  CHECK(rp.witness->order() >= 2);

  // The witness really annihilates both evaluators on the window.
  auto [e1, e2] = rho_to_g(pair, b);
  CHECK(satisfies_recurrence(e1, *rp.witness, -8, 8));
  CHECK(satisfies_recurrence(e2, *rp.witness, -8, 8));
}

TEST_CASE("recurrence search stays undetermined on super-exponential data") {
  BasisPair b = standard_basis();
  // Table with g1(m) = 2^(m^2): no fixed-order recurrence fits the window.
  std::map<long, Rational> e_vals;
  for (long m = -9; m <= 9; ++m) {
    if (m == 0) continue;
    e_vals[m] = two_pow(m * m) / Rational(m);
  }
  RhoSpec rho = RhoSpec::table(std::move(e_vals), {}, Rational(1), Rational(0));
  RecurrenceSearchResult r = is_exp_polynomial_over_H(rho, b, 3, -9, 9);
  CHECK(!r.yes());

  // An undersized window is rejected rather than guessed at.
  RhoSpec linear = RhoSpec::exp_poly(ep({{Rational(1), 1, Rational(1)}}), ExpPolynomial());
  CHECK_THROWS(is_exp_polynomial_over_H(linear, b, 4, 0, 5));
}
