#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hvr2/algebra.hpp"
#include "hvr2/lattice.hpp"
#include "hvr2/linalg.hpp"
#include "hvr2/rational.hpp"

namespace hvr2 {

// Weight-space index inside one module: offset coordinates with respect to
// the module's basis pair, x along b1 and y along b2. Modules graded along a
// single direction keep the unused coordinate at zero.
struct WeightKey {
  long x = 0, y = 0;
  friend bool operator==(WeightKey a, WeightKey b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(WeightKey a, WeightKey b) { return !(a == b); }
  friend bool operator<(WeightKey a, WeightKey b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  }
  std::string str() const { return "(" + std::to_string(x) + "," + std::to_string(y) + ")"; }
};

// Finite computation region: b2-levels 0..-depth, b1-coordinates in
// [-window, window], and a separate larger cap on the b1-coordinate of
// raising generators used when computing radicals, so every raising step
// between two retained weights is available. Components produced outside
// the region are dropped (a documented lossy projection).
struct Truncation {
  int depth = 0;
  int window = 0;
  int raising_bound = 0;

  // raising_bound < 0 selects the default 2 * window.
  static Truncation make(int depth, int window, int raising_bound = -1);
};

// Weight as base plus lattice offset; two weights are the same iff the
// componentwise sums agree.
struct Weight {
  Rational base1, base2;
  Vec2 offset;
  std::pair<Rational, Rational> total() const {
    return {base1 + Rational(offset.x1), base2 + Rational(offset.x2)};
  }
  friend bool operator==(const Weight& a, const Weight& b) {
    return a.total() == b.total();
  }
};

// Element of a module: sparse coefficients over (weight key, basis index).
using ModIndex = std::pair<WeightKey, int>;
using ModVec = std::map<ModIndex, Rational>;

// Immutable truncated weight module with exact rational action matrices.
// Concrete constructions implement basis enumeration and the raw action of
// a single graded symbol; matrices are memoized per (symbol, source weight)
// under a lock, so finished modules can be queried concurrently.
class TruncatedModule {
public:
  // Grading shape: a 2D lattice of offsets (levels along b2), a single
  // grading along b1, or a bare integer grading where the b1-offset is not
  // a module grading at all (level along b2, x identically 0).
  enum class Axis { B1, B2, LevelOnly };

  virtual ~TruncatedModule() = default;

  const BasisPair& basis() const { return basis_; }
  const Truncation& trunc() const { return trunc_; }
  Axis axis() const { return axis_; }

  // K1..K4 scalars; index 0 unused.
  const std::array<Rational, 5>& k_scalars() const { return kscal_; }
  // Level tuple (f(b1), h(b1), f(b2), h(b2)) values.
  std::array<Rational, 4> levels() const;

  bool has_d_action() const { return has_d_; }
  std::pair<Rational, Rational> weight_base() const { return {lambda1_, lambda2_}; }
  // Eigenvalues of d1, d2 on the given weight space: base plus the standard
  // coordinates of the offset x*b1 + y*b2.
  std::pair<Rational, Rational> d_eigen(WeightKey k) const;
  Weight weight_of(WeightKey k) const;

  // True when the whole module is generated by its level-0 row; required by
  // the radical recursion.
  bool top_generated() const { return top_generated_; }

  virtual std::vector<WeightKey> weights() const = 0;  // sorted, nonempty spaces
  virtual const std::vector<std::string>& labels(WeightKey k) const = 0;
  int dim(WeightKey k) const { return static_cast<int>(labels(k).size()); }

  virtual bool supports(const BasisSymbol& s) const = 0;

  // Depth below the top row along the grading direction; nonnegative for
  // retained weights of top-generated modules.
  long level_of(WeightKey k) const;
  // Where the action of a graded symbol sends this weight space.
  WeightKey target_key(const BasisSymbol& s, WeightKey src) const;

  // Memoized matrix of one symbol: dim(target) x dim(src). K and d symbols
  // give diagonal matrices; graded symbols defer to the construction.
  const SparseMatrix& action(const BasisSymbol& s, WeightKey src) const;

  // Raising generators that lower the depth by `dist`, capped by the
  // truncation's raising bound; used by the radical recursion and closures.
  virtual std::vector<BasisSymbol> raising_generators(int dist) const;
  // Default generator set for submodule closures: every supported graded
  // symbol whose degree stays inside the action region.
  virtual std::vector<BasisSymbol> closure_generators() const;

protected:
  TruncatedModule(BasisPair b, Truncation t, Axis axis) : basis_(b), trunc_(t), axis_(axis) {}

  virtual SparseMatrix compute_action(const BasisSymbol& s, WeightKey src) const = 0;

  // shared setup helpers for concrete classes
  void set_k_scalars_from_levels(const std::array<Rational, 4>& c);
  void set_k_scalars(const std::array<Rational, 5>& k) { kscal_ = k; }
  void set_lambda(Rational l1, Rational l2) {
    lambda1_ = std::move(l1);
    lambda2_ = std::move(l2);
  }
  void set_has_d(bool v) { has_d_ = v; }
  void set_top_generated(bool v) { top_generated_ = v; }
  void set_level_dir(int dir) { level_dir_ = dir; }  // +1: module extends downward

  BasisPair basis_;
  Truncation trunc_;
  Axis axis_;
  std::array<Rational, 5> kscal_{};
  Rational lambda1_, lambda2_;
  bool has_d_ = false;
  bool top_generated_ = false;
  int level_dir_ = +1;

  static const std::vector<std::string>& no_labels();

private:
  mutable std::recursive_mutex mu_;
  mutable std::map<std::pair<BasisSymbol, WeightKey>, SparseMatrix> cache_;
};

using ModulePtr = std::shared_ptr<const TruncatedModule>;

// Applies an element of the algebra to a module vector; throws on symbols
// the module does not carry an action for.
ModVec act(const TruncatedModule& mod, const LieElement& x, const ModVec& v);

ModVec unit_vector(WeightKey k, int idx);

// One subspace per weight; absent key means the zero subspace.
using SliceMap = std::map<WeightKey, Subspace>;

// Smallest per-weight family containing the seeds and closed under the
// module's closure generators (within the truncation region).
SliceMap generated_submodule(const TruncatedModule& mod, const std::vector<ModVec>& seeds);

// Maximal graded submodule meeting the top row trivially, computed level by
// level: a vector lies in the radical iff every retained raising generator
// maps it into the radical one step up. Sound within the truncation
// because any raising word factors through its first letter and
// raising-stable graded families with zero top part are automatically
// action-stable away from the window boundary.
SliceMap radical(const TruncatedModule& mod);

std::map<WeightKey, int> quotient_dims(const TruncatedModule& mod, const SliceMap& rad);

// Quotient dimensions dim - radical dim per weight, with a rank-only fast
// path at the deepest retained level (no kernel vectors are produced there,
// and feeding rows stops early once the rank saturates the active columns).
// Same values as quotient_dims(mod, radical(mod)).
std::map<WeightKey, int> radical_quotient_dims(const TruncatedModule& mod);

// Weights whose quotient by the given family is nonzero; with an empty
// family, the support of the module itself.
std::vector<WeightKey> support(const TruncatedModule& mod, const SliceMap& rad = {});

// Quotient by a per-weight family (typically the radical); coordinates are
// the non-pivot labels of each weight space. The result keeps a handle on
// the parent and conjugates its matrices on demand.
ModulePtr irreducible_quotient(ModulePtr mod, const SliceMap& rad);

// Projection of a parent vector into quotient coordinates.
ModVec project_to_quotient(const TruncatedModule& quotient_mod, const ModVec& parent_vec);

// Submodule carried by coordinate subspaces (each slice spanned by unit
// vectors), re-packaged as a module in its own right. Slices that mix
// coordinates are rejected.
ModulePtr restrict_to_slice(ModulePtr mod, const SliceMap& slice);

// True iff v is killed by E(m) and t^m for every retained nonzero m in the
// nonnegative cone spanned by the candidate pair.
bool is_ghw_vector(const TruncatedModule& mod, const ModVec& v, const BasisPair& candidate);

// Smallest p >= 1 such that every retained degree i*b1 + j*b2 with
// i, j >= p kills v on both families; nullopt when no retained p works.
std::optional<int> annihilation_bound(const TruncatedModule& mod, const ModVec& v);

// Quotient map data for one weight: ambient -> ambient minus radical.
SparseMatrix quotient_map(const Subspace& rad, int ambient);
SparseMatrix section_map(const Subspace& rad, int ambient);
SparseMatrix matmul(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace hvr2
