#include "hvr2/experiments.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>

namespace hvr2 {

namespace {

void require_strictly_increasing(const std::vector<int>& sweep, const char* who) {
  for (std::size_t i = 1; i < sweep.size(); ++i)
    if (sweep[i] <= sweep[i - 1])
      throw std::invalid_argument(std::string(who) + ": settings must be strictly increasing");
}

// Smallest setting from which all later tables equal the final one.
int plateau_start(const std::vector<int>& settings,
                  const std::vector<std::map<WeightKey, int>>& tables) {
  std::size_t i = tables.size() - 1;
  while (i > 0 && tables[i - 1] == tables.back()) --i;
  return settings[i];
}

bool last_three_agree(const std::vector<std::map<WeightKey, int>>& tables) {
  const std::size_t n = tables.size();
  return n >= 3 && tables[n - 1] == tables[n - 2] && tables[n - 2] == tables[n - 3];
}

// True when the value at some key present in every table strictly increases
// across the whole sweep.
bool some_key_strictly_grows(const std::vector<std::map<WeightKey, int>>& tables) {
  if (tables.size() < 2) return false;
  for (const auto& [k, v0] : tables.front()) {
    bool grows = true;
    int prev = v0;
    for (std::size_t i = 1; i < tables.size(); ++i) {
      auto it = tables[i].find(k);
      if (it == tables[i].end() || it->second <= prev) {
        grows = false;
        break;
      }
      prev = it->second;
    }
    if (grows) return true;
  }
  return false;
}

bool closure_is_full(const TruncatedModule& mod, const std::vector<ModVec>& seeds) {
  SliceMap cl = generated_submodule(mod, seeds);
  for (WeightKey k : mod.weights()) {
    auto it = cl.find(k);
    const int d = it == cl.end() ? 0 : it->second.dim();
    if (d != mod.dim(k)) return false;
  }
  return true;
}

// Observed x-span of every row of a module's retained weights.
struct RowSpans {
  std::map<long, std::pair<long, long>> spans;  // y -> [lo, hi]
  long y_min = 0;

  explicit RowSpans(const TruncatedModule& mod) {
    for (WeightKey k : mod.weights()) {
      y_min = std::min(y_min, k.y);
      auto it = spans.find(k.y);
      if (it == spans.end())
        spans.emplace(k.y, std::make_pair(k.x, k.x));
      else {
        it->second.first = std::min(it->second.first, k.x);
        it->second.second = std::max(it->second.second, k.x);
      }
    }
  }

  // True when the key is inside the region the truncation plausibly
  // represents: rows between the deepest retained row and the top, within
  // the row's observed span. Rows that died entirely count as genuine.
  bool contains(WeightKey k) const {
    if (k.y < y_min) return false;
    auto it = spans.find(k.y);
    if (it == spans.end()) return true;
    return k.x >= it->second.first && k.x <= it->second.second;
  }
};

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Stabilized: return "stabilized";
    case Verdict::Growing: return "growing";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

SweepReport stabilization_experiment(const RhoSpec& rho, const BasisPair& b, int levels,
                                     const std::vector<int>& sweep) {
  if (levels < 1)
    throw std::invalid_argument("stabilization probe: need at least one level below the top");
  if (sweep.size() < 3)
    throw std::invalid_argument("stabilization probe: need at least three window settings");
  require_strictly_increasing(sweep, "stabilization probe");

  SweepReport rep;
  rep.parameter = "window";
  rep.settings = sweep;
  for (int n : sweep) {
    ModulePtr raw = highest_weight_raw(rho, b, Truncation::make(levels, n));
    std::map<WeightKey, int> dims = radical_quotient_dims(*raw);
    std::map<WeightKey, int> below;
    for (const auto& [k, d] : dims)
      if (k.y < 0) below[k] = d;
    rep.tables.push_back(std::move(below));
  }

  if (last_three_agree(rep.tables)) {
    rep.verdict = Verdict::Stabilized;
    rep.stabilized_at = plateau_start(rep.settings, rep.tables);
  } else if (some_key_strictly_grows(rep.tables)) {
    rep.verdict = Verdict::Growing;
  }
  return rep;
}

SweepReport growth_experiment(const std::array<Rational, 4>& c, char epsilon,
                              const BasisPair& b, const std::vector<int>& sweep) {
  if (c[0] == Rational(0) && c[1] == Rational(0))
    throw std::invalid_argument(
        "growth probe: case mismatch — both central levels along b1 vanish, so the "
        "module falls to the Laurent-module case");
  if (sweep.size() < 2)
    throw std::invalid_argument("growth probe: need at least two window settings");
  require_strictly_increasing(sweep, "growth probe");

  SweepReport rep;
  rep.parameter = "window";
  rep.settings = sweep;
  for (int n : sweep) {
    ModulePtr base = verma_H(c, epsilon, b, n);
    ModulePtr ext = extend_to_L0(base, {Rational(0), Rational(0)}, b);
    ModulePtr ind = induce(b, ext, Truncation::make(1, n));
    std::map<WeightKey, int> dims = radical_quotient_dims(*ind);
    std::map<WeightKey, int> row;
    for (const auto& [k, d] : dims)
      if (k.y == -1) row[k] = d;
    rep.tables.push_back(std::move(row));

    // Exact rank, modulo the radical, of the family E(k b1 - b2) t^{-k b1}
    // applied to the top vector, k = 1..n. The radical at a first-row
    // weight is the joint kernel of the retained raisings (the top row
    // itself carries no radical), so applying the stacked raising matrices
    // embeds the quotient into the image space, and the rank there is the
    // rank modulo the radical.
    const WeightKey home{0, -1};
    std::vector<std::pair<BasisSymbol, WeightKey>> constraints;  // symbol, target
    for (const BasisSymbol& g : ind->raising_generators(1)) {
      const WeightKey tgt = ind->target_key(g, home);
      if (ind->dim(tgt) == 0) continue;
      constraints.emplace_back(g, tgt);
    }
    using ImageCoord = std::pair<std::size_t, int>;  // constraint number, row index
    const ModVec top = unit_vector(WeightKey{0, 0}, 0);
    std::vector<std::map<ImageCoord, Rational>> images;
    for (int k = 1; k <= n; ++k) {
      LieElement lower{{BasisSymbol::mkT(-k * b.b1), Rational(1)}};
      LieElement cross{{BasisSymbol::mkE(k * b.b1 - b.b2), Rational(1)}};
      ModVec w = act(*ind, cross, act(*ind, lower, top));
      for (const auto& [mi, val] : w)
        if (mi.first != home)
          throw std::logic_error("growth probe: witness vector left its weight space");
      auto& img = images.emplace_back();
      for (std::size_t ci = 0; ci < constraints.size(); ++ci) {
        LieElement g{{constraints[ci].first, Rational(1)}};
        for (const auto& [mi, val] : act(*ind, g, w)) img[{ci, mi.second}] = val;
      }
    }
    // flatten the (constraint, index) grid to columns and take the rank
    std::map<ImageCoord, int> colmap;
    for (const auto& img : images)
      for (const auto& [coord, val] : img) colmap.emplace(coord, 0);
    int next = 0;
    for (auto& [coord, col] : colmap) col = next++;
    RankAccumulator acc(next);
    for (const auto& img : images) {
      SVec r;
      for (const auto& [coord, val] : img) r[colmap.at(coord)] = val;
      acc.add_row(std::move(r));
    }
    rep.witness_ranks.push_back(acc.rank());
  }

  std::vector<int> totals;
  for (const auto& t : rep.tables) {
    int s = 0;
    for (const auto& [k, d] : t) s += d;
    totals.push_back(s);
  }
  bool nondecreasing = true, strict_end = totals.back() > totals.front();
  for (std::size_t i = 1; i < totals.size(); ++i)
    if (totals[i] < totals[i - 1]) nondecreasing = false;
  if (nondecreasing && strict_end)
    rep.verdict = Verdict::Growing;
  else if (last_three_agree(rep.tables)) {
    rep.verdict = Verdict::Stabilized;
    rep.stabilized_at = plateau_start(rep.settings, rep.tables);
  }
  return rep;
}

bool heisenberg_irreducibility_probe(const TruncatedModule& mod, const Rational& a) {
  if (mod.levels()[0] != a)
    throw std::invalid_argument("irreducibility probe: declared level does not match the module");
  if (mod.top_generated()) {
    SliceMap rad = radical(mod);
    for (const auto& [k, s] : rad)
      if (s.dim() != 0) return false;
    std::vector<ModVec> seeds;
    for (WeightKey k : mod.weights())
      if (mod.level_of(k) == 0)
        for (int i = 0; i < mod.dim(k); ++i) seeds.push_back(unit_vector(k, i));
    return closure_is_full(mod, seeds);
  }
  std::vector<ModVec> seeds;
  for (int i = 0; i < mod.dim(WeightKey{0, 0}); ++i) seeds.push_back(unit_vector({0, 0}, i));
  if (seeds.empty()) return false;
  return closure_is_full(mod, seeds);
}

SupportReport support_closure_check(const std::map<WeightKey, int>& dims, int margin) {
  if (margin < 0) throw std::invalid_argument("support check: margin must be nonnegative");
  std::map<long, std::pair<long, long>> spans;  // y -> [lo, hi]
  for (const auto& [k, d] : dims) {
    auto it = spans.find(k.y);
    if (it == spans.end())
      spans.emplace(k.y, std::make_pair(k.x, k.x));
    else {
      it->second.first = std::min(it->second.first, k.x);
      it->second.second = std::max(it->second.second, k.x);
    }
  }

  auto interior = [&](WeightKey k) {
    auto it = spans.find(k.y);
    if (it == spans.end()) return false;
    return k.x >= it->second.first + margin && k.x <= it->second.second - margin;
  };
  auto dim_at = [&](WeightKey k) -> std::optional<int> {
    auto it = spans.find(k.y);
    if (it == spans.end() || k.x < it->second.first || k.x > it->second.second)
      return std::nullopt;
    auto dit = dims.find(k);
    return dit == dims.end() ? 0 : dit->second;
  };

  SupportReport rep;
  for (const auto& [y, span] : spans) {
    for (long x = span.first + margin; x <= span.second - margin; ++x) {
      const WeightKey k{x, y};
      const int d = *dim_at(k);
      for (WeightKey nb : {WeightKey{x - 1, y}, WeightKey{x, y - 1}}) {
        if (!interior(nb)) continue;
        auto nd = dim_at(nb);
        if (nd && d > 0 && *nd == 0) rep.support_gaps.emplace_back(k, nb);
      }
      for (WeightKey nb : {WeightKey{x + 1, y}, WeightKey{x, y + 1}}) {
        if (!interior(nb)) continue;
        auto nd = dim_at(nb);
        if (nd && d == 0 && *nd > 0) rep.complement_gaps.emplace_back(k, nb);
      }
    }
  }
  rep.ok = rep.support_gaps.empty() && rep.complement_gaps.empty();
  return rep;
}

SupportReport support_properties_check(const TruncatedModule& mod, int margin) {
  std::map<WeightKey, int> dims;
  for (WeightKey k : mod.weights()) dims[k] = mod.dim(k);
  return support_closure_check(dims, margin);
}

DecompositionReport decomposition_check(const RhoSpec& rho, const BasisPair& b,
                                        const Truncation& trunc, int interior_margin) {
  long table_max = 0;
  if (rho.kind() == RhoSpec::Kind::Table) {
    for (const auto& [k, v] : rho.table_E()) table_max = std::max(table_max, std::abs(k));
    for (const auto& [k, v] : rho.table_t()) table_max = std::max(table_max, std::abs(k));
  }
  const int probe = std::max(trunc.window, static_cast<int>(2 * table_max));
  const ClassifyResult cls = classify_T_rho(rho, HSubalgebra::Full, b, probe);
  if (cls.r < 1)
    throw std::invalid_argument(
        "decomposition check: the acting degrees must generate a nonzero subgroup");

  long span_max = 1;
  for (long s : cls.support) span_max = std::max(span_max, std::abs(s));
  DecompositionReport rep;
  rep.r = cls.r;
  rep.interior_margin =
      interior_margin >= 0 ? interior_margin
                           : static_cast<int>(span_max * (trunc.depth + 1));

  ModulePtr hat = hat_V(rho, b, trunc);
  for (WeightKey k : hat->weights()) rep.cover_dims[k] = hat->dim(k);

  std::vector<SliceMap> slices;
  for (long i = 0; i < cls.r; ++i) {
    slices.push_back(generated_submodule(*hat, {unit_vector(WeightKey{i, 0}, 0)}));
    std::map<WeightKey, int> tab;
    for (const auto& [k, s] : slices.back())
      if (s.dim() > 0) tab[k] = s.dim();
    rep.slice_dims.push_back(std::move(tab));
  }

  const long lo = -trunc.window + rep.interior_margin;
  const long hi = trunc.window - rep.interior_margin;
  auto slice_dim = [&](std::size_t i, WeightKey k) {
    auto it = rep.slice_dims[i].find(k);
    return it == rep.slice_dims[i].end() ? 0 : it->second;
  };

  for (WeightKey k : hat->weights()) {
    const int ambient = hat->dim(k);
    for (std::size_t i = 0; i < slices.size(); ++i) {
      auto ii = slices[i].find(k);
      if (ii == slices[i].end()) continue;
      for (std::size_t j = i + 1; j < slices.size(); ++j) {
        auto jj = slices[j].find(k);
        if (jj == slices[j].end()) continue;
        const int d = ii->second.intersect(jj->second).dim();
        if (d > 0) {
          rep.intersections_trivial = false;
          rep.notes.push_back("closures " + std::to_string(i) + " and " + std::to_string(j) +
                              " share a " + std::to_string(d) + "-dimensional space at " +
                              k.str());
        }
      }
    }
    if (k.x >= lo && k.x <= hi) {
      int sum = 0;
      for (std::size_t i = 0; i < slices.size(); ++i) sum += slice_dim(i, k);
      if (sum != ambient) {
        rep.dims_additive = false;
        rep.notes.push_back("closure dimensions sum to " + std::to_string(sum) +
                            " instead of " + std::to_string(ambient) + " at " + k.str());
      }
    }
  }

  for (std::size_t i = 0; i < slices.size(); ++i) {
    for (std::size_t j = i + 1; j < slices.size(); ++j) {
      const long shift = static_cast<long>(j) - static_cast<long>(i);
      for (WeightKey k : hat->weights()) {
        const WeightKey ks{k.x + shift, k.y};
        if (k.x < lo || k.x > hi || ks.x < lo || ks.x > hi) continue;
        if (slice_dim(i, k) != slice_dim(j, ks)) {
          rep.tables_match = false;
          rep.notes.push_back("closure " + std::to_string(i) + " at " + k.str() +
                              " disagrees with closure " + std::to_string(j) + " at " +
                              ks.str());
        }
      }
    }
  }
  return rep;
}

GhwScanResult ghw_scan(const TruncatedModule& mod, const std::vector<BasisPair>& candidates) {
  GhwScanResult out;
  const RowSpans hull(mod);
  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    const BasisPair& cand = candidates[ci];
    if (!is_zbasis(cand))
      throw std::invalid_argument("generating-vector scan: candidate is not a lattice basis");
    const std::array<BasisSymbol, 3> syms = {BasisSymbol::mkE(cand.b1),
                                             BasisSymbol::mkE(cand.b2),
                                             BasisSymbol::mkT(cand.b1)};
    bool supported = true;
    for (const BasisSymbol& s : syms)
      if (!mod.supports(s)) supported = false;
    if (!supported) {
      out.rejected.push_back(ci);
      continue;
    }
    for (WeightKey k : mod.weights()) {
      const int n = mod.dim(k);
      bool edge = false;
      RankAccumulator acc(n);
      for (const BasisSymbol& s : syms) {
        const WeightKey tgt = mod.target_key(s, k);
        if (mod.level_of(tgt) < 0) continue;  // genuinely above the top row
        if (!hull.contains(tgt)) {
          edge = true;  // constraint lost to the truncation edge
          break;
        }
        const SparseMatrix& m = mod.action(s, k);
        for (int r = 0; r < m.rows(); ++r)
          if (!m.row(r).empty()) acc.add_row(m.row(r));
      }
      if (edge) continue;
      const int kdim = n - acc.rank();
      if (kdim > 0) out.hits.push_back({ci, k, kdim});
    }
  }
  return out;
}

}  // namespace hvr2
