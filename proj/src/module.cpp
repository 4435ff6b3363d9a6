#include "hvr2/module.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>

namespace hvr2 {

Truncation Truncation::make(int depth, int window, int raising_bound) {
  if (depth < 0) throw std::invalid_argument("Truncation: negative depth");
  if (window < 0) throw std::invalid_argument("Truncation: negative window");
  if (raising_bound < 0) raising_bound = 2 * window;
  if (raising_bound < window)
    throw std::invalid_argument("Truncation: raising bound below window");
  return {depth, window, raising_bound};
}

std::array<Rational, 4> TruncatedModule::levels() const {
  auto pair_val = [&](Vec2 v, int i, int j) {
    return Rational(v.x1) * kscal_[i] + Rational(v.x2) * kscal_[j];
  };
  return {pair_val(basis_.b1, 3, 4), pair_val(basis_.b1, 1, 2),
          pair_val(basis_.b2, 3, 4), pair_val(basis_.b2, 1, 2)};
}

void TruncatedModule::set_k_scalars_from_levels(const std::array<Rational, 4>& c) {
  InverseBasisMatrix inv = inverse_basis(basis_);
  auto solve = [&](const Rational& on_b1, const Rational& on_b2) {
    return std::pair<Rational, Rational>(
        Rational(inv.p1) * on_b1 + Rational(inv.q1) * on_b2,
        Rational(inv.p2) * on_b1 + Rational(inv.q2) * on_b2);
  };
  auto [k3, k4] = solve(c[0], c[2]);
  auto [k1, k2] = solve(c[1], c[3]);
  kscal_ = {Rational(0), k1, k2, k3, k4};
}

std::pair<Rational, Rational> TruncatedModule::d_eigen(WeightKey k) const {
  Vec2 off = k.x * basis_.b1 + k.y * basis_.b2;
  return {lambda1_ + Rational(off.x1), lambda2_ + Rational(off.x2)};
}

Weight TruncatedModule::weight_of(WeightKey k) const {
  return {lambda1_, lambda2_, k.x * basis_.b1 + k.y * basis_.b2};
}

long TruncatedModule::level_of(WeightKey k) const {
  long coord = axis_ == Axis::B1 ? k.x : k.y;
  return -static_cast<long>(level_dir_) * coord;
}

WeightKey TruncatedModule::target_key(const BasisSymbol& s, WeightKey src) const {
  if (!s.is_graded()) return src;
  Vec2 c = coords(s.m, basis_);
  switch (axis_) {
    case Axis::B1: return {src.x + c.x1, 0};
    case Axis::B2: return {src.x + c.x1, src.y + c.x2};
    case Axis::LevelOnly: return {0, src.y + c.x2};
  }
  return src;
}

const std::vector<std::string>& TruncatedModule::no_labels() {
  static const std::vector<std::string> empty;
  return empty;
}

const SparseMatrix& TruncatedModule::action(const BasisSymbol& s, WeightKey src) const {
  if (!supports(s))
    throw std::invalid_argument("unknown generator for this module: " + s.str());
  std::lock_guard<std::recursive_mutex> lk(mu_);
  auto key = std::make_pair(s, src);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  SparseMatrix m;
  const int n = dim(src);
  if (s.kind == SymKind::K) {
    m = SparseMatrix(n, n);
    const Rational& c = kscal_[static_cast<size_t>(s.idx)];
    for (int i = 0; i < n; ++i) m.set(i, i, c);
  } else if (s.kind == SymKind::D) {
    m = SparseMatrix(n, n);
    auto [e1, e2] = d_eigen(src);
    const Rational& c = s.idx == 1 ? e1 : e2;
    for (int i = 0; i < n; ++i) m.set(i, i, c);
  } else {
    m = compute_action(s, src);
    WeightKey tgt = target_key(s, src);
    if (m.rows() != dim(tgt) || m.cols() != n)
      throw std::logic_error("action matrix shape mismatch at " + src.str());
  }
  return cache_.emplace(std::move(key), std::move(m)).first->second;
}

std::vector<BasisSymbol> TruncatedModule::raising_generators(int dist) const {
  if (dist < 1) throw std::invalid_argument("raising_generators: dist must be >= 1");
  std::vector<BasisSymbol> out;
  if (axis_ == Axis::B1) {
    Vec2 deg = (level_dir_ * dist) * basis_.b1;
    for (SymKind k : {SymKind::E, SymKind::T}) {
      BasisSymbol s{k, deg, 0};
      if (supports(s)) out.push_back(s);
    }
    return out;
  }
  for (long a = -trunc_.raising_bound; a <= trunc_.raising_bound; ++a) {
    Vec2 deg = a * basis_.b1 + (level_dir_ * dist) * basis_.b2;
    for (SymKind k : {SymKind::E, SymKind::T}) {
      BasisSymbol s{k, deg, 0};
      if (supports(s)) out.push_back(s);
    }
  }
  return out;
}

std::vector<BasisSymbol> TruncatedModule::closure_generators() const {
  std::vector<BasisSymbol> out;
  if (axis_ == Axis::B1) {
    long cap = std::max(trunc_.window, trunc_.depth);
    for (long k = -cap; k <= cap; ++k) {
      if (k == 0) continue;
      for (SymKind kd : {SymKind::E, SymKind::T}) {
        BasisSymbol s{kd, k * basis_.b1, 0};
        if (supports(s)) out.push_back(s);
      }
    }
    return out;
  }
  for (long a = -trunc_.window; a <= trunc_.window; ++a) {
    for (long n = -trunc_.depth; n <= trunc_.depth; ++n) {
      if (a == 0 && n == 0) continue;
      Vec2 deg = a * basis_.b1 + n * basis_.b2;
      for (SymKind kd : {SymKind::E, SymKind::T}) {
        BasisSymbol s{kd, deg, 0};
        if (supports(s)) out.push_back(s);
      }
    }
  }
  return out;
}

ModVec unit_vector(WeightKey k, int idx) {
  ModVec v;
  v.emplace(ModIndex{k, idx}, Rational(1));
  return v;
}

ModVec act(const TruncatedModule& mod, const LieElement& x, const ModVec& v) {
  ModVec out;
  auto accumulate = [&out](WeightKey k, int i, const Rational& c) {
    if (c.is_zero()) return;
    ModIndex mi{k, i};
    auto it = out.find(mi);
    if (it == out.end()) {
      out.emplace(mi, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) out.erase(it);
    }
  };
  for (const auto& [sym, coeff] : x) {
    if (sym.kind == SymKind::K) {
      if (!mod.supports(sym))
        throw std::invalid_argument("unknown generator for this module: " + sym.str());
      const Rational c = coeff * mod.k_scalars()[static_cast<size_t>(sym.idx)];
      for (const auto& [mi, cv] : v) accumulate(mi.first, mi.second, c * cv);
      continue;
    }
    if (sym.kind == SymKind::D) {
      if (!mod.has_d_action())
        throw std::invalid_argument("unknown generator for this module: " + sym.str());
      for (const auto& [mi, cv] : v) {
        auto [e1, e2] = mod.d_eigen(mi.first);
        accumulate(mi.first, mi.second, coeff * (sym.idx == 1 ? e1 : e2) * cv);
      }
      continue;
    }
    // graded: group the components of v by weight and push through matrices
    std::map<WeightKey, SVec> by_key;
    for (const auto& [mi, cv] : v) by_key[mi.first].emplace(mi.second, cv);
    for (const auto& [k, xv] : by_key) {
      if (mod.dim(k) == 0) continue;
      WeightKey tgt = mod.target_key(sym, k);
      if (mod.dim(tgt) == 0) continue;  // leaves the truncation region
      SVec y = mod.action(sym, k).apply(xv);
      for (const auto& [r, val] : y) accumulate(tgt, r, coeff * val);
    }
  }
  return out;
}

namespace {

void split_by_key(const ModVec& v, std::map<WeightKey, SVec>& out) {
  for (const auto& [mi, c] : v) out[mi.first].emplace(mi.second, c);
}

bool add_to_slice(SliceMap& slices, const TruncatedModule& mod, WeightKey k, const SVec& v) {
  if (svec_is_zero(v)) return false;
  auto it = slices.find(k);
  if (it == slices.end()) {
    it = slices.emplace(k, Subspace(mod.dim(k))).first;
  }
  if (it->second.contains(v)) return false;
  std::vector<SVec> gens = it->second.basis();
  gens.push_back(v);
  it->second = Subspace::from_vectors(it->second.ambient(), gens);
  return true;
}

}  // namespace

SliceMap generated_submodule(const TruncatedModule& mod, const std::vector<ModVec>& seeds) {
  SliceMap slices;
  for (const auto& seed : seeds) {
    std::map<WeightKey, SVec> parts;
    split_by_key(seed, parts);
    for (const auto& [k, v] : parts) {
      if (mod.dim(k) == 0)
        throw std::invalid_argument("generated_submodule: seed outside retained weights");
      add_to_slice(slices, mod, k, v);
    }
  }
  const std::vector<BasisSymbol> gens = mod.closure_generators();
  bool changed = true;
  while (changed) {
    changed = false;
    // snapshot keys first: applying actions grows the map
    std::vector<WeightKey> keys;
    keys.reserve(slices.size());
    for (const auto& [k, s] : slices) keys.push_back(k);
    for (WeightKey k : keys) {
      for (const auto& g : gens) {
        WeightKey tgt = mod.target_key(g, k);
        if (mod.dim(tgt) == 0) continue;
        const SparseMatrix& m = mod.action(g, k);
        if (m.nnz() == 0) continue;
        // basis may grow while iterating; act on a copy
        std::vector<SVec> basis = slices.at(k).basis();
        for (const auto& v : basis) {
          SVec y = m.apply(v);
          if (add_to_slice(slices, mod, tgt, y)) changed = true;
        }
      }
    }
  }
  // drop zero slices for a clean report
  for (auto it = slices.begin(); it != slices.end();)
    it = it->second.dim() == 0 ? slices.erase(it) : std::next(it);
  return slices;
}

namespace {

long checked_max_level(const TruncatedModule& mod, const std::vector<WeightKey>& keys) {
  if (!mod.top_generated())
    throw std::invalid_argument("radical: module is not generated by its top row");
  long max_level = 0;
  for (WeightKey k : keys) {
    long l = mod.level_of(k);
    if (l < 0) throw std::logic_error("radical: weight above the top row");
    max_level = std::max(max_level, l);
  }
  return max_level;
}

// Constraint rows for "v at `k` is in the radical": images under every
// retained raising generator must land in the (already computed) radical of
// the target weight.
std::vector<SVec> radical_rows(const TruncatedModule& mod, const SliceMap& rad, WeightKey k,
                               long lvl) {
  std::vector<SVec> rows;
  for (int dist = 1; dist <= lvl; ++dist) {
    for (const BasisSymbol& g : mod.raising_generators(dist)) {
      WeightKey tgt = mod.target_key(g, k);
      const int td = mod.dim(tgt);
      if (td == 0) continue;  // edge effect: no constraint from dropped targets
      const SparseMatrix& m = mod.action(g, k);
      if (m.nnz() == 0) continue;
      auto rit = rad.find(tgt);
      if (rit == rad.end())
        throw std::logic_error("radical: raising target " + tgt.str() +
                               " was not processed first");
      const Subspace& tr = rit->second;
      if (tr.dim() == td) continue;  // everything lands in the radical
      if (tr.dim() == 0) {
        for (int r = 0; r < m.rows(); ++r)
          if (!m.row(r).empty()) rows.push_back(m.row(r));
      } else {
        SparseMatrix qm = matmul(quotient_map(tr, td), m);
        for (int r = 0; r < qm.rows(); ++r)
          if (!qm.row(r).empty()) rows.push_back(qm.row(r));
      }
    }
  }
  return rows;
}

// Deterministic rank certificate over a fixed large prime.  The modular rank
// never exceeds the exact rank, so when it reaches the number of columns that
// appear at all, the exact rank is pinned down without any exact elimination.
// Returns -1 when no certificate is obtained (including the rare case of a
// denominator divisible by the prime); callers then fall back to exact rank.
constexpr std::uint64_t kRankPrime = (std::uint64_t(1) << 61) - 1;

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kRankPrime);
}

std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mod_mul(r, b);
    b = mod_mul(b, b);
    e >>= 1;
  }
  return r;
}

int certified_full_rank(const std::vector<SVec>& rows, const std::set<int>& active) {
  const int m = static_cast<int>(active.size());
  std::map<int, int> col_of;
  int next = 0;
  for (int c : active) col_of[c] = next++;

  std::vector<std::vector<std::uint64_t>> pivots;  // reduced rows, leading 1 first
  std::vector<int> pivot_col;
  for (const SVec& r : rows) {
    std::vector<std::uint64_t> dense(m, 0);
    for (const auto& [c, v] : r) {
      std::uint64_t den = mpz_fdiv_ui(v.den().get_mpz_t(), kRankPrime);
      if (den == 0) return -1;
      std::uint64_t num = mpz_fdiv_ui(v.num().get_mpz_t(), kRankPrime);
      dense[col_of.at(c)] = mod_mul(num, mod_pow(den, kRankPrime - 2));
    }
    for (std::size_t p = 0; p < pivots.size(); ++p) {
      std::uint64_t x = dense[pivot_col[p]];
      if (x == 0) continue;
      const std::vector<std::uint64_t>& pr = pivots[p];
      for (int j = pivot_col[p]; j < m; ++j)
        if (pr[j]) dense[j] = (dense[j] + kRankPrime - mod_mul(x, pr[j])) % kRankPrime;
    }
    int lead = -1;
    for (int j = 0; j < m; ++j)
      if (dense[j]) { lead = j; break; }
    if (lead < 0) continue;
    std::uint64_t inv = mod_pow(dense[lead], kRankPrime - 2);
    for (int j = lead; j < m; ++j) dense[j] = mod_mul(dense[j], inv);
    pivot_col.push_back(lead);
    pivots.push_back(std::move(dense));
    if (static_cast<int>(pivots.size()) == m) return m;
  }
  return -1;
}

}  // namespace

SliceMap radical(const TruncatedModule& mod) {
  std::vector<WeightKey> keys = mod.weights();
  const long max_level = checked_max_level(mod, keys);
  SliceMap rad;
  for (WeightKey k : keys)
    if (mod.level_of(k) == 0) rad.emplace(k, Subspace(mod.dim(k)));

  for (long lvl = 1; lvl <= max_level; ++lvl) {
    for (WeightKey k : keys) {
      if (mod.level_of(k) != lvl) continue;
      const int n = mod.dim(k);
      SparseMatrix stack = SparseMatrix::from_rows(radical_rows(mod, rad, k, lvl), n);
      rad.emplace(k, Subspace::from_vectors(n, kernel_basis(stack)));
    }
  }
  return rad;
}

std::map<WeightKey, int> radical_quotient_dims(const TruncatedModule& mod) {
  std::vector<WeightKey> keys = mod.weights();
  const long max_level = checked_max_level(mod, keys);
  SliceMap rad;
  for (WeightKey k : keys)
    if (mod.level_of(k) == 0) rad.emplace(k, Subspace(mod.dim(k)));

  std::map<WeightKey, int> out;
  for (WeightKey k : keys)
    if (mod.level_of(k) == 0) out[k] = mod.dim(k);

  for (long lvl = 1; lvl <= max_level; ++lvl) {
    for (WeightKey k : keys) {
      if (mod.level_of(k) != lvl) continue;
      const int n = mod.dim(k);
      std::vector<SVec> rows = radical_rows(mod, rad, k, lvl);
      if (lvl == max_level) {
        // deepest level: only the rank is needed, and once it saturates the
        // columns that appear at all, the remaining rows cannot add to it
        std::set<int> active;
        for (const SVec& r : rows)
          for (const auto& [c, v] : r) active.insert(c);
        int cert = certified_full_rank(rows, active);
        if (cert >= 0) {
          out[k] = cert;
        } else {
          RankAccumulator acc(n);
          for (SVec& r : rows) {
            acc.add_row(std::move(r));
            if (acc.rank() == static_cast<int>(active.size())) break;
          }
          out[k] = acc.rank();
        }
      } else {
        SparseMatrix stack = SparseMatrix::from_rows(std::move(rows), n);
        Subspace ker = Subspace::from_vectors(n, kernel_basis(stack));
        out[k] = n - ker.dim();
        rad.emplace(k, std::move(ker));
      }
    }
  }
  return out;
}

std::map<WeightKey, int> quotient_dims(const TruncatedModule& mod, const SliceMap& rad) {
  std::map<WeightKey, int> out;
  for (WeightKey k : mod.weights()) {
    int d = mod.dim(k);
    auto it = rad.find(k);
    if (it != rad.end()) d -= it->second.dim();
    out[k] = d;
  }
  return out;
}

std::vector<WeightKey> support(const TruncatedModule& mod, const SliceMap& rad) {
  std::vector<WeightKey> out;
  for (const auto& [k, d] : quotient_dims(mod, rad))
    if (d > 0) out.push_back(k);
  return out;
}

SparseMatrix quotient_map(const Subspace& rad, int ambient) {
  if (rad.ambient() != ambient) throw std::invalid_argument("quotient_map: ambient mismatch");
  std::vector<bool> is_pivot(ambient, false);
  for (int p : rad.pivots()) is_pivot[static_cast<size_t>(p)] = true;
  SparseMatrix q(ambient - rad.dim(), ambient);
  int r = 0;
  for (int c = 0; c < ambient; ++c) {
    if (is_pivot[static_cast<size_t>(c)]) continue;
    q.set(r, c, Rational(1));
    for (int i = 0; i < rad.dim(); ++i) {
      Rational e = svec_get(rad.basis()[static_cast<size_t>(i)], c);
      if (!e.is_zero()) q.set(r, rad.pivots()[static_cast<size_t>(i)], -e);
    }
    ++r;
  }
  return q;
}

SparseMatrix section_map(const Subspace& rad, int ambient) {
  if (rad.ambient() != ambient) throw std::invalid_argument("section_map: ambient mismatch");
  std::vector<bool> is_pivot(ambient, false);
  for (int p : rad.pivots()) is_pivot[static_cast<size_t>(p)] = true;
  SparseMatrix s(ambient, ambient - rad.dim());
  int c = 0;
  for (int i = 0; i < ambient; ++i) {
    if (is_pivot[static_cast<size_t>(i)]) continue;
    s.set(i, c, Rational(1));
    ++c;
  }
  return s;
}

SparseMatrix matmul(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
  SparseMatrix out(a.rows(), b.cols());
  for (int r = 0; r < a.rows(); ++r) {
    SVec acc;
    for (const auto& [c, v] : a.row(r)) svec_axpy(acc, v, b.row(c));
    for (const auto& [c, v] : acc) out.set(r, c, v);
  }
  return out;
}

namespace {

// A derived view keeps the parent's level convention; the sign is recovered
// from any below-top weight (defaulting to downward for a bare top row).
int deduce_dir(const TruncatedModule& parent) {
  for (WeightKey k : parent.weights()) {
    long coord = parent.axis() == TruncatedModule::Axis::B1 ? k.x : k.y;
    if (coord < 0) return +1;
    if (coord > 0) return -1;
  }
  return +1;
}

class QuotientModule : public TruncatedModule {
public:
  QuotientModule(ModulePtr parent, SliceMap rad)
      : TruncatedModule(parent->basis(), parent->trunc(), parent->axis()),
        parent_(std::move(parent)),
        rad_(std::move(rad)) {
    set_k_scalars(parent_->k_scalars());
    auto [l1, l2] = parent_->weight_base();
    set_lambda(l1, l2);
    set_has_d(parent_->has_d_action());
    set_top_generated(parent_->top_generated());
    set_level_dir(deduce_dir(*parent_));
    for (WeightKey k : parent_->weights()) {
      const int pd = parent_->dim(k);
      auto it = rad_.find(k);
      const Subspace zero(pd);
      const Subspace& r = it == rad_.end() ? zero : it->second;
      if (r.dim() == pd) continue;
      std::vector<bool> is_pivot(pd, false);
      for (int p : r.pivots()) is_pivot[static_cast<size_t>(p)] = true;
      std::vector<std::string> names;
      const auto& pl = parent_->labels(k);
      for (int i = 0; i < pd; ++i)
        if (!is_pivot[static_cast<size_t>(i)]) names.push_back(pl[static_cast<size_t>(i)]);
      labels_.emplace(k, std::move(names));
      qmap_.emplace(k, quotient_map(r, pd));
      smap_.emplace(k, section_map(r, pd));
      keys_.push_back(k);
    }
  }

  std::vector<WeightKey> weights() const override { return keys_; }

  const std::vector<std::string>& labels(WeightKey k) const override {
    auto it = labels_.find(k);
    return it == labels_.end() ? no_labels() : it->second;
  }

  bool supports(const BasisSymbol& s) const override { return parent_->supports(s); }

  std::vector<BasisSymbol> raising_generators(int dist) const override {
    return parent_->raising_generators(dist);
  }
  std::vector<BasisSymbol> closure_generators() const override {
    return parent_->closure_generators();
  }

  ModVec project(const ModVec& parent_vec) const {
    ModVec out;
    std::map<WeightKey, SVec> parts;
    split_by_key(parent_vec, parts);
    for (const auto& [k, xv] : parts) {
      auto qt = qmap_.find(k);
      if (qt == qmap_.end()) continue;  // weight fully inside the radical
      SVec y = qt->second.apply(xv);
      for (const auto& [r, val] : y) out.emplace(ModIndex{k, r}, val);
    }
    return out;
  }

protected:
  SparseMatrix compute_action(const BasisSymbol& s, WeightKey src) const override {
    WeightKey tgt = target_key(s, src);
    auto qt = qmap_.find(tgt);
    if (qt == qmap_.end()) return SparseMatrix(0, dim(src));
    const SparseMatrix& p = parent_->action(s, src);
    return matmul(qt->second, matmul(p, smap_.at(src)));
  }

private:
  ModulePtr parent_;
  SliceMap rad_;
  std::map<WeightKey, std::vector<std::string>> labels_;
  std::map<WeightKey, SparseMatrix> qmap_, smap_;
  std::vector<WeightKey> keys_;
};

class SliceModule : public TruncatedModule {
public:
  SliceModule(ModulePtr parent, const SliceMap& slice)
      : TruncatedModule(parent->basis(), parent->trunc(), parent->axis()),
        parent_(std::move(parent)) {
    set_k_scalars(parent_->k_scalars());
    auto [l1, l2] = parent_->weight_base();
    set_lambda(l1, l2);
    set_has_d(parent_->has_d_action());
    set_top_generated(parent_->top_generated());
    set_level_dir(deduce_dir(*parent_));
    for (const auto& [k, sub] : slice) {
      if (sub.dim() == 0) continue;
      std::vector<int> picked;
      for (const auto& row : sub.basis()) {
        if (row.size() != 1 || row.begin()->second != Rational(1))
          throw std::invalid_argument(
              "restrict_to_slice: slice is not spanned by coordinate vectors");
        picked.push_back(row.begin()->first);
      }
      std::vector<std::string> names;
      const auto& pl = parent_->labels(k);
      for (int i : picked) names.push_back(pl[static_cast<size_t>(i)]);
      labels_.emplace(k, std::move(names));
      old_index_.emplace(k, std::move(picked));
      keys_.push_back(k);
    }
  }

  std::vector<WeightKey> weights() const override { return keys_; }
  const std::vector<std::string>& labels(WeightKey k) const override {
    auto it = labels_.find(k);
    return it == labels_.end() ? no_labels() : it->second;
  }
  bool supports(const BasisSymbol& s) const override { return parent_->supports(s); }

protected:
  SparseMatrix compute_action(const BasisSymbol& s, WeightKey src) const override {
    WeightKey tgt = target_key(s, src);
    auto ti = old_index_.find(tgt);
    SparseMatrix out(dim(tgt), dim(src));
    if (ti == old_index_.end()) return out;
    const SparseMatrix& p = parent_->action(s, src);
    std::map<int, int> tpos;
    for (size_t i = 0; i < ti->second.size(); ++i)
      tpos.emplace(ti->second[static_cast<size_t>(i)], static_cast<int>(i));
    const auto& spick = old_index_.at(src);
    for (size_t c = 0; c < spick.size(); ++c) {
      for (int r = 0; r < p.rows(); ++r) {
        Rational v = svec_get(p.row(r), spick[c]);
        if (v.is_zero()) continue;
        auto rp = tpos.find(r);
        // components outside the slice are truncation artifacts; dropped
        if (rp != tpos.end()) out.set(rp->second, static_cast<int>(c), v);
      }
    }
    return out;
  }

private:
  ModulePtr parent_;
  std::map<WeightKey, std::vector<std::string>> labels_;
  std::map<WeightKey, std::vector<int>> old_index_;
  std::vector<WeightKey> keys_;
};

}  // namespace

ModulePtr irreducible_quotient(ModulePtr mod, const SliceMap& rad) {
  return std::make_shared<QuotientModule>(std::move(mod), rad);
}

ModVec project_to_quotient(const TruncatedModule& quotient_mod, const ModVec& parent_vec) {
  const auto* q = dynamic_cast<const QuotientModule*>(&quotient_mod);
  if (!q) throw std::invalid_argument("project_to_quotient: not a quotient module");
  return q->project(parent_vec);
}

ModulePtr restrict_to_slice(ModulePtr mod, const SliceMap& slice) {
  return std::make_shared<SliceModule>(std::move(mod), slice);
}

bool is_ghw_vector(const TruncatedModule& mod, const ModVec& v, const BasisPair& candidate) {
  if (mod.axis() == TruncatedModule::Axis::B1)
    throw std::invalid_argument("is_ghw_vector: module carries no b2-direction action");
  if (!is_zbasis(candidate))
    throw std::invalid_argument("is_ghw_vector: candidate pair is not a Z-basis");
  const Truncation& t = mod.trunc();
  const long span = 2L * (t.raising_bound + t.depth) + 2;
  for (long i = 0; i <= span; ++i) {
    for (long j = 0; j <= span; ++j) {
      if (i == 0 && j == 0) continue;
      Vec2 m = i * candidate.b1 + j * candidate.b2;
      if (m.is_zero()) continue;
      Vec2 c = coords(m, mod.basis());
      if (std::abs(c.x1) > t.raising_bound || std::abs(c.x2) > t.depth) continue;
      for (SymKind kd : {SymKind::E, SymKind::T}) {
        LieElement g;
        add_term(g, BasisSymbol{kd, m, 0}, Rational(1));
        if (!act(mod, g, v).empty()) return false;
      }
    }
  }
  return true;
}

std::optional<int> annihilation_bound(const TruncatedModule& mod, const ModVec& v) {
  const Truncation& t = mod.trunc();
  const int p_max = std::min(t.depth, t.raising_bound);
  for (int p = 1; p <= p_max; ++p) {
    bool ok = true;
    for (long i = p; i <= t.raising_bound && ok; ++i) {
      for (long j = p; j <= t.depth && ok; ++j) {
        Vec2 m = i * mod.basis().b1 + j * mod.basis().b2;
        for (SymKind kd : {SymKind::E, SymKind::T}) {
          LieElement g;
          add_term(g, BasisSymbol{kd, m, 0}, Rational(1));
          if (!act(mod, g, v).empty()) {
            ok = false;
            break;
          }
        }
      }
    }
    if (ok) return p;
  }
  return std::nullopt;
}

}  // namespace hvr2
