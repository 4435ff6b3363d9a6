#include "hvr2/exppoly.hpp"

#include <algorithm>
#include <stdexcept>

#include "hvr2/linalg.hpp"

namespace hvr2 {

ExpPolynomial::ExpPolynomial(std::vector<ExpTerm> terms) {
  std::map<std::pair<Rational, long>, Rational> acc;  // (a, m) -> c
  for (auto& t : terms) {
    if (t.a.is_zero()) throw std::invalid_argument("ExpPolynomial: base a = 0");
    if (t.m < 0) throw std::invalid_argument("ExpPolynomial: negative poly degree");
    acc[{t.a, t.m}] += t.c;
  }
  for (auto& [key, c] : acc)
    if (!c.is_zero()) terms_.push_back({c, key.second, key.first});
}

Rational ExpPolynomial::eval(long n) const {
  Rational out(0);
  for (const auto& t : terms_) {
    Rational npow(1);
    for (long i = 0; i < t.m; ++i) npow *= Rational(n);
    out += t.c * npow * t.a.pow(n);
  }
  return out;
}

Recurrence Recurrence::make(std::vector<Rational> coeffs) {
  if (coeffs.size() < 2)
    throw std::invalid_argument("Recurrence: order must be at least 1");
  if (coeffs.front().is_zero() || coeffs.back().is_zero())
    throw std::invalid_argument("Recurrence: end coefficients must be nonzero");
  return {std::move(coeffs)};
}

Recurrence characteristic_recurrence(const ExpPolynomial& f) {
  if (f.is_zero())
    throw std::invalid_argument("characteristic_recurrence: zero function");
  std::vector<Rational> p{Rational(1)};
  for (const auto& t : f.terms()) {
    for (long rep = 0; rep <= t.m; ++rep) {
      // p *= (x - a)
      std::vector<Rational> q(p.size() + 1, Rational(0));
      for (size_t i = 0; i < p.size(); ++i) {
        q[i + 1] += p[i];
        q[i] -= t.a * p[i];
      }
      p = std::move(q);
    }
  }
  return Recurrence::make(std::move(p));
}

bool satisfies_recurrence(const std::function<Rational(long)>& g, const Recurrence& rec,
                          long lo, long hi) {
  const int n = rec.order();
  for (long m = lo; m + n <= hi; ++m) {
    Rational acc(0);
    for (int i = 0; i <= n; ++i) acc += rec.a[static_cast<size_t>(i)] * g(m + i);
    if (!acc.is_zero()) return false;
  }
  return true;
}

RhoSpec RhoSpec::table(std::map<long, Rational> e_vals, std::map<long, Rational> t_vals,
                       Rational f_b2, Rational h_b2) {
  for (const auto* m : {&e_vals, &t_vals}) {
    if (m->count(0)) throw std::invalid_argument("RhoSpec: table key 0 is not a degree");
  }
  RhoSpec r;
  r.kind_ = Kind::Table;
  for (auto& [k, v] : e_vals)
    if (!v.is_zero()) r.e_vals_.emplace(k, v);
  for (auto& [k, v] : t_vals)
    if (!v.is_zero()) r.t_vals_.emplace(k, v);
  r.table_f_b2_ = std::move(f_b2);
  r.table_h_b2_ = std::move(h_b2);
  return r;
}

RhoSpec RhoSpec::exp_poly(ExpPolynomial g1, ExpPolynomial g2,
                          std::optional<Rational> explicit_f_b2,
                          std::optional<Rational> explicit_h_b2) {
  RhoSpec r;
  r.kind_ = Kind::ExpPoly;
  r.g1_ = std::move(g1);
  r.g2_ = std::move(g2);
  r.explicit_f_b2_ = std::move(explicit_f_b2);
  r.explicit_h_b2_ = std::move(explicit_h_b2);
  return r;
}

void RhoSpec::validate(const BasisPair& b) const {
  if (kind_ != Kind::ExpPoly) return;
  Rational det(det2(b.b1, b.b2));
  if (explicit_f_b2_ && *explicit_f_b2_ != g1_.eval(0) / det)
    throw std::invalid_argument(
        "RhoSpec: explicit f(b2) value inconsistent with g1(0)/det");
  if (explicit_h_b2_ && *explicit_h_b2_ != g2_.eval(0) / det)
    throw std::invalid_argument(
        "RhoSpec: explicit h(b2) value inconsistent with g2(0)/det");
}

Rational RhoSpec::rho_E(long k) const {
  if (k == 0) throw std::invalid_argument("rho_E: degree 0");
  if (kind_ == Kind::Table) {
    auto it = e_vals_.find(k);
    return it == e_vals_.end() ? Rational(0) : it->second;
  }
  return g1_.eval(k) / Rational(k);
}

Rational RhoSpec::rho_t(long k) const {
  if (k == 0) throw std::invalid_argument("rho_t: degree 0");
  if (kind_ == Kind::Table) {
    auto it = t_vals_.find(k);
    return it == t_vals_.end() ? Rational(0) : it->second;
  }
  return g2_.eval(k) / Rational(k);
}

Rational RhoSpec::f_b2(const BasisPair& b) const {
  if (kind_ == Kind::Table) return table_f_b2_;
  return g1_.eval(0) / Rational(det2(b.b1, b.b2));
}

Rational RhoSpec::h_b2(const BasisPair& b) const {
  if (kind_ == Kind::Table) return table_h_b2_;
  return g2_.eval(0) / Rational(det2(b.b1, b.b2));
}

Rational RhoSpec::g1_at(long m, const BasisPair& b) const {
  if (kind_ == Kind::ExpPoly) return g1_.eval(m);
  if (m == 0) return Rational(det2(b.b1, b.b2)) * table_f_b2_;
  return Rational(m) * rho_E(m);
}

Rational RhoSpec::g2_at(long m, const BasisPair& b) const {
  if (kind_ == Kind::ExpPoly) return g2_.eval(m);
  if (m == 0) return Rational(det2(b.b1, b.b2)) * table_h_b2_;
  return Rational(m) * rho_t(m);
}

std::set<long> RhoSpec::support(long probe_window) const {
  std::set<long> s;
  if (kind_ == Kind::Table) {
    for (const auto& [k, v] : e_vals_) s.insert(k);
    for (const auto& [k, v] : t_vals_) s.insert(k);
    return s;
  }
  for (long k = -probe_window; k <= probe_window; ++k) {
    if (k == 0) continue;
    if (!rho_E(k).is_zero() || !rho_t(k).is_zero()) s.insert(k);
  }
  return s;
}

std::pair<std::function<Rational(long)>, std::function<Rational(long)>> rho_to_g(
    const RhoSpec& rho, const BasisPair& b) {
  rho.validate(b);
  return {[rho, b](long m) { return rho.g1_at(m, b); },
          [rho, b](long m) { return rho.g2_at(m, b); }};
}

RhoSpec g_to_rho(const ExpPolynomial& g1, const ExpPolynomial& g2) {
  return RhoSpec::exp_poly(g1, g2);
}

RecurrenceSearchResult is_exp_polynomial_over_H(const RhoSpec& rho, const BasisPair& b,
                                                int order_bound, long lo, long hi) {
  if (order_bound < 1)
    throw std::invalid_argument("is_exp_polynomial_over_H: order_bound < 1");
  if (hi - lo + 1 < 3L * order_bound)
    throw std::invalid_argument(
        "is_exp_polynomial_over_H: range shorter than 3 * order_bound");
  rho.validate(b);

  // cache the g-values once; the table kind is zero off its support
  std::map<long, Rational> g1v, g2v;
  for (long m = lo; m <= hi; ++m) {
    g1v[m] = rho.g1_at(m, b);
    g2v[m] = rho.g2_at(m, b);
  }

  for (int n = 1; n <= order_bound; ++n) {
    std::vector<SVec> rows;
    for (const auto* g : {&g1v, &g2v}) {
      for (long m = lo; m + n <= hi; ++m) {
        SVec row;
        for (int i = 0; i <= n; ++i) {
          const Rational& v = g->at(m + i);
          if (!v.is_zero()) row.emplace(i, v);
        }
        rows.push_back(std::move(row));
      }
    }
    std::vector<SVec> ker = kernel_basis(SparseMatrix::from_rows(std::move(rows), n + 1));
    if (ker.empty()) continue;
    // Need a kernel element with both end coefficients nonzero. If some
    // basis vector has a_0 != 0 and some (possibly other) has a_n != 0, a
    // combination works; otherwise the whole kernel misses one end.
    const SVec* with_a0 = nullptr;
    const SVec* with_an = nullptr;
    for (const auto& k : ker) {
      if (!with_a0 && !svec_get(k, 0).is_zero()) with_a0 = &k;
      if (!with_an && !svec_get(k, n).is_zero()) with_an = &k;
    }
    if (!with_a0 || !with_an) continue;
    SVec cand = *with_a0;
    if (svec_get(cand, n).is_zero()) svec_axpy(cand, Rational(1), *with_an);
    if (svec_get(cand, 0).is_zero() || svec_get(cand, n).is_zero()) {
      // cancellation at an end; a different multiple avoids it
      cand = *with_a0;
      svec_axpy(cand, Rational(2), *with_an);
    }
    std::vector<Rational> coeffs(static_cast<size_t>(n) + 1, Rational(0));
    for (const auto& [i, v] : cand) coeffs[static_cast<size_t>(i)] = v;
    Rational lead = coeffs.back();
    for (auto& c : coeffs) c /= lead;  // monic for stable comparison
    return {Recurrence::make(std::move(coeffs))};
  }
  return {std::nullopt};
}

}  // namespace hvr2
