#include "hvr2/algebra.hpp"

#include <stdexcept>

namespace hvr2 {

BasisSymbol BasisSymbol::mkE(Vec2 m) {
  if (m.is_zero()) throw std::invalid_argument("E(0) is not a basis symbol");
  return {SymKind::E, m, 0};
}

BasisSymbol BasisSymbol::mkT(Vec2 m) {
  if (m.is_zero()) throw std::invalid_argument("t^0 is not a basis symbol");
  return {SymKind::T, m, 0};
}

BasisSymbol BasisSymbol::mkK(int i) {
  if (i < 1 || i > 4) throw std::invalid_argument("K index must be 1..4");
  return {SymKind::K, {0, 0}, i};
}

BasisSymbol BasisSymbol::mkD(int i) {
  if (i < 1 || i > 2) throw std::invalid_argument("d index must be 1..2");
  return {SymKind::D, {0, 0}, i};
}

std::string BasisSymbol::str() const {
  switch (kind) {
    case SymKind::E:
      return "E[" + std::to_string(m.x1) + "," + std::to_string(m.x2) + "]";
    case SymKind::T:
      return "t[" + std::to_string(m.x1) + "," + std::to_string(m.x2) + "]";
    case SymKind::K: return "K" + std::to_string(idx);
    case SymKind::D: return "d" + std::to_string(idx);
  }
  return "?";
}

void add_term(LieElement& x, const BasisSymbol& s, const Rational& c) {
  if (c.is_zero()) return;
  auto it = x.find(s);
  if (it == x.end()) {
    x.emplace(s, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) x.erase(it);
  }
}

LieElement scale(const LieElement& x, const Rational& c) {
  LieElement out;
  if (c.is_zero()) return out;
  for (const auto& [s, v] : x) out.emplace(s, c * v);
  return out;
}

LieElement add(const LieElement& x, const LieElement& y) {
  LieElement out = x;
  for (const auto& [s, v] : y) add_term(out, s, v);
  return out;
}

bool is_zero(const LieElement& x) { return x.empty(); }

LieElement h_of(Vec2 m) {
  LieElement out;
  add_term(out, BasisSymbol::mkK(1), Rational(m.x1));
  add_term(out, BasisSymbol::mkK(2), Rational(m.x2));
  return out;
}

LieElement f_of(Vec2 m) {
  LieElement out;
  add_term(out, BasisSymbol::mkK(3), Rational(m.x1));
  add_term(out, BasisSymbol::mkK(4), Rational(m.x2));
  return out;
}

namespace {

// [t^m, E(n)] = det(n; m) t^{m+n}, plus h(m) when the degrees cancel.
LieElement bracket_TE(Vec2 m, Vec2 n) {
  LieElement out;
  Vec2 s = m + n;
  if (s.is_zero()) return h_of(m);
  add_term(out, BasisSymbol::mkT(s), Rational(det2(n, m)));
  return out;
}

}  // namespace

LieElement bracket(const BasisSymbol& a, const BasisSymbol& b) {
  using K = SymKind;
  // central elements
  if (a.kind == K::K || b.kind == K::K) return {};
  // derivations act by degree; they commute with each other
  if (a.kind == K::D && b.kind == K::D) return {};
  if (a.kind == K::D) {
    LieElement out;
    long mi = a.idx == 1 ? b.m.x1 : b.m.x2;
    add_term(out, b, Rational(mi));
    return out;
  }
  if (b.kind == K::D) return scale(bracket(b, a), Rational(-1));
  // both graded
  if (a.kind == K::T && b.kind == K::T) return {};
  if (a.kind == K::T && b.kind == K::E) return bracket_TE(a.m, b.m);
  if (a.kind == K::E && b.kind == K::T) return scale(bracket_TE(b.m, a.m), Rational(-1));
  // [E(m), E(n)] = det(n; m) E(m+n), plus f(m) when the degrees cancel.
  LieElement out;
  Vec2 s = a.m + b.m;
  if (s.is_zero()) return f_of(a.m);
  add_term(out, BasisSymbol::mkE(s), Rational(det2(b.m, a.m)));
  return out;
}

LieElement bracket(const LieElement& x, const LieElement& y) {
  LieElement out;
  for (const auto& [sa, ca] : x)
    for (const auto& [sb, cb] : y) {
      Rational c = ca * cb;
      for (const auto& [s, v] : bracket(sa, sb)) add_term(out, s, c * v);
    }
  return out;
}

LieElement jacobi_defect(const LieElement& x, const LieElement& y, const LieElement& z) {
  LieElement out = bracket(x, bracket(y, z));
  out = add(out, bracket(y, bracket(z, x)));
  out = add(out, bracket(z, bracket(x, y)));
  return out;
}

TriangularSplit triangular_part(const LieElement& x, const BasisPair& b) {
  TriangularSplit out;
  for (const auto& [s, c] : x) {
    if (!s.is_graded()) {
      add_term(out.zero, s, c);
      continue;
    }
    long level = coords(s.m, b).x2;
    if (level > 0)
      add_term(out.plus, s, c);
    else if (level < 0)
      add_term(out.minus, s, c);
    else
      add_term(out.zero, s, c);
  }
  return out;
}

bool in_subalgebra(const LieElement& x, SubalgebraId which, const BasisPair& b) {
  // K-part coefficients, indexed 1..4
  Rational k[5];
  for (const auto& [s, c] : x) {
    switch (s.kind) {
      case SymKind::D: return false;
      case SymKind::K:
        if (which == SubalgebraId::t_b1) return false;
        if (which == SubalgebraId::E_script && s.idx <= 2) return false;
        k[s.idx] = c;
        break;
      case SymKind::E:
        if (which == SubalgebraId::t_b1) return false;
        if (which == SubalgebraId::E_script) break;  // any degree allowed
        if (!multiple_of(s.m, b.b1)) return false;
        break;
      case SymKind::T:
        if (which == SubalgebraId::E_b1 || which == SubalgebraId::E_script) return false;
        if (!multiple_of(s.m, b.b1)) return false;
        break;
    }
  }
  if (which == SubalgebraId::E_b1) {
    // central part must be a multiple of f(b1) = b11 K3 + b12 K4
    if (!k[1].is_zero() || !k[2].is_zero()) return false;
    if (k[3] * Rational(b.b1.x2) != k[4] * Rational(b.b1.x1)) return false;
  }
  return true;
}

bool PbwOrder::operator()(const BasisSymbol& u, const BasisSymbol& v) const {
  if (!u.is_graded() || !v.is_graded())
    throw std::invalid_argument("PbwOrder: only graded symbols are ordered");
  Vec2 cu = coords(u.m, b), cv = coords(v.m, b);
  if (cu.x2 != cv.x2) return cu.x2 > cv.x2;  // level -1 before level -2
  if (cu.x1 != cv.x1) return cu.x1 < cv.x1;
  return u.kind == SymKind::E && v.kind == SymKind::T;
}

const MonomialSum& Straightener::straighten(const Monomial& w, SwapSchedule sched) {
  auto key = std::make_pair(w, sched);
  auto hit = memo_.find(key);
  if (hit != memo_.end()) return hit->second;

  long inv = -1;
  for (size_t i = 0; i + 1 < w.size(); ++i) {
    bool out_of_order = order_(w[i + 1], w[i]);  // strict: w[i] must follow w[i+1]
    if (out_of_order) {
      inv = static_cast<long>(i);
      if (sched == SwapSchedule::FirstInversion) break;
    }
  }
  if (inv < 0) {
    MonomialSum s;
    s.emplace(w, Rational(1));
    return memo_.emplace(std::move(key), std::move(s)).first->second;
  }

  Monomial swapped = w;
  std::swap(swapped[inv], swapped[inv + 1]);
  MonomialSum acc = straighten(swapped, sched);

  LieElement corr = bracket(w[inv], w[inv + 1]);
  for (const auto& [sym, c] : corr) {
    if (!sym.is_graded())
      throw std::logic_error("straighten: central correction inside one triangular part");
    Monomial shorter;
    shorter.reserve(w.size() - 1);
    shorter.insert(shorter.end(), w.begin(), w.begin() + inv);
    shorter.push_back(sym);
    shorter.insert(shorter.end(), w.begin() + inv + 2, w.end());
    for (const auto& [mono, c2] : straighten(shorter, sched)) {
      Rational v = c * c2;
      auto it = acc.find(mono);
      if (it == acc.end()) {
        acc.emplace(mono, v);
      } else {
        it->second += v;
        if (it->second.is_zero()) acc.erase(it);
      }
    }
  }
  return memo_.emplace(std::move(key), std::move(acc)).first->second;
}

MonomialSum pbw_normal_form(const Monomial& word, const BasisPair& b, SwapSchedule sched) {
  int sign = 0;
  for (const auto& s : word) {
    if (!s.is_graded())
      throw std::invalid_argument("pbw_normal_form: only graded symbols allowed");
    long level = coords(s.m, b).x2;
    int sgn = level > 0 ? 1 : level < 0 ? -1 : 0;
    if (sgn == 0)
      throw std::invalid_argument("pbw_normal_form: level-zero symbol " + s.str());
    if (sign == 0) sign = sgn;
    if (sgn != sign)
      throw std::invalid_argument("pbw_normal_form: symbols from mixed triangular parts");
  }
  Straightener st(b);
  return st.straighten(word, sched);
}

}  // namespace hvr2
