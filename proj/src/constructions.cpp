#include "hvr2/constructions.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

namespace hvr2 {
namespace {

int eps_dir(char epsilon) {
  if (epsilon == '+') return +1;
  if (epsilon == '-') return -1;
  throw std::invalid_argument("epsilon must be '+' or '-'");
}

void require_zbasis(const BasisPair& b, const char* who) {
  if (!is_zbasis(b))
    throw std::invalid_argument(std::string(who) + ": basis pair is not a Z-basis");
}

// Partitions of n (parts descending), listed in descending lexicographic
// order; n = 0 gives the single empty partition.
void gen_partitions(int n, int max_part, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(n, max_part); p >= 1; --p) {
    cur.push_back(p);
    gen_partitions(n - p, p, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  gen_partitions(n, n == 0 ? 1 : n, cur, out);
  return out;
}

std::vector<int> with_part(const std::vector<int>& parts, int q) {
  std::vector<int> out = parts;
  out.insert(std::upper_bound(out.begin(), out.end(), q, std::greater<int>()), q);
  return out;
}

std::vector<int> without_part(const std::vector<int>& parts, int q) {
  std::vector<int> out = parts;
  out.erase(std::find(out.begin(), out.end(), q));
  return out;
}

int part_mult(const std::vector<int>& parts, int q) {
  return static_cast<int>(std::count(parts.begin(), parts.end(), q));
}

// Letters printed by ascending b1-multiple, E before t at equal multiple
// (the straightening order restricted to one direction).
std::string monomial_label(const std::vector<int>& e_parts, const std::vector<int>& t_parts,
                           int dir) {
  std::vector<std::pair<long, int>> letters;  // (b1-multiple, family)
  for (int q : e_parts) letters.emplace_back(-static_cast<long>(dir) * q, 0);
  for (int q : t_parts) letters.emplace_back(-static_cast<long>(dir) * q, 1);
  std::sort(letters.begin(), letters.end());
  if (letters.empty()) return "v";
  std::string s;
  for (auto [k, fam] : letters)
    s += std::string(fam == 0 ? "E[" : "t[") + std::to_string(k) + "]";
  return s + "v";
}

// ---------------------------------------------------------------------------

class LaurentModule : public TruncatedModule {
public:
  LaurentModule(RhoSpec rho, HSubalgebra alg, const BasisPair& b, int window)
      : TruncatedModule(b, Truncation::make(0, window), Axis::B1),
        rho_(std::move(rho)),
        alg_(alg) {
    rho_.validate(b);
    if (alg_ == HSubalgebra::Full)
      set_k_scalars_from_levels({Rational(0), Rational(0), rho_.f_b2(b), rho_.h_b2(b)});
    for (long n = -window; n <= window; ++n) {
      WeightKey k{n, 0};
      keys_.push_back(k);
      labels_.emplace(k, std::vector<std::string>{"t[" + std::to_string(n) + "]"});
    }
  }

  std::vector<WeightKey> weights() const override { return keys_; }

  const std::vector<std::string>& labels(WeightKey k) const override {
    auto it = labels_.find(k);
    return it == labels_.end() ? no_labels() : it->second;
  }

  bool supports(const BasisSymbol& s) const override {
    if (s.kind == SymKind::K) return alg_ == HSubalgebra::Full;
    if (s.kind == SymKind::D) return false;
    auto mult = multiple_of(s.m, basis_.b1);
    if (!mult || *mult == 0) return false;
    return s.kind == SymKind::E ? alg_ != HSubalgebra::TOnly : alg_ != HSubalgebra::EOnly;
  }

protected:
  SparseMatrix compute_action(const BasisSymbol& s, WeightKey src) const override {
    WeightKey tgt = target_key(s, src);
    SparseMatrix m(dim(tgt), dim(src));
    if (m.rows() == 0 || m.cols() == 0) return m;
    long k = *multiple_of(s.m, basis_.b1);
    Rational v = s.kind == SymKind::E ? rho_.rho_E(k) : rho_.rho_t(k);
    if (!v.is_zero()) m.set(0, 0, v);
    return m;
  }

private:
  RhoSpec rho_;
  HSubalgebra alg_;
  std::vector<WeightKey> keys_;
  std::map<WeightKey, std::vector<std::string>> labels_;
};

// ---------------------------------------------------------------------------

class FockModule : public TruncatedModule {
public:
  FockModule(char epsilon, Rational a, const BasisPair& b, int depth)
      : TruncatedModule(b, Truncation::make(depth, depth), Axis::B1),
        a_(std::move(a)),
        dir_(eps_dir(epsilon)) {
    set_level_dir(dir_);
    set_k_scalars_from_levels({a_, Rational(0), Rational(0), Rational(0)});
    set_top_generated(true);
    for (int n = 0; n <= depth; ++n) {
      WeightKey k{-static_cast<long>(dir_) * n, 0};
      std::vector<std::vector<int>> parts = partitions(n);
      std::vector<std::string> names;
      for (size_t i = 0; i < parts.size(); ++i) {
        index_[k].emplace(parts[i], static_cast<int>(i));
        names.push_back(monomial_label(parts[i], {}, dir_));
      }
      vecs_.emplace(k, std::move(parts));
      labels_.emplace(k, std::move(names));
      keys_.push_back(k);
    }
    std::sort(keys_.begin(), keys_.end());
  }

  std::vector<WeightKey> weights() const override { return keys_; }

  const std::vector<std::string>& labels(WeightKey k) const override {
    auto it = labels_.find(k);
    return it == labels_.end() ? no_labels() : it->second;
  }

  bool supports(const BasisSymbol& s) const override {
    if (s.kind == SymKind::K) return true;
    if (s.kind != SymKind::E) return false;
    auto mult = multiple_of(s.m, basis_.b1);
    return mult && *mult != 0;
  }

protected:
  SparseMatrix compute_action(const BasisSymbol& s, WeightKey src) const override {
    WeightKey tgt = target_key(s, src);
    SparseMatrix m(dim(tgt), dim(src));
    if (m.rows() == 0 || m.cols() == 0) return m;
    long k = *multiple_of(s.m, basis_.b1);
    int q = static_cast<int>(std::labs(k));
    bool lowering = dir_ > 0 ? k < 0 : k > 0;
    const auto& src_list = vecs_.at(src);
    const auto& tidx = index_.at(tgt);
    for (size_t c = 0; c < src_list.size(); ++c) {
      const std::vector<int>& alpha = src_list[c];
      if (lowering) {
        m.set(tidx.at(with_part(alpha, q)), static_cast<int>(c), Rational(1));
      } else {
        int mult = part_mult(alpha, q);
        if (mult == 0) continue;
        m.add_to(tidx.at(without_part(alpha, q)), static_cast<int>(c),
                 Rational(k) * a_ * Rational(mult));
      }
    }
    return m;
  }

private:
  Rational a_;
  int dir_;
  std::vector<WeightKey> keys_;
  std::map<WeightKey, std::vector<std::vector<int>>> vecs_;
  std::map<WeightKey, std::map<std::vector<int>, int>> index_;
  std::map<WeightKey, std::vector<std::string>> labels_;
};

// ---------------------------------------------------------------------------

class VermaHModule : public TruncatedModule {
public:
  using Mono2 = std::pair<std::vector<int>, std::vector<int>>;  // E-parts, t-parts

  VermaHModule(std::array<Rational, 4> c, char epsilon, const BasisPair& b, int depth)
      : TruncatedModule(b, Truncation::make(depth, depth), Axis::B1),
        c_(std::move(c)),
        dir_(eps_dir(epsilon)) {
    set_level_dir(dir_);
    set_k_scalars_from_levels(c_);
    set_top_generated(true);
    for (int n = 0; n <= depth; ++n) {
      WeightKey k{-static_cast<long>(dir_) * n, 0};
      std::vector<Mono2> list;
      for (int e = n; e >= 0; --e)
        for (const auto& alpha : partitions(e))
          for (const auto& beta : partitions(n - e)) list.emplace_back(alpha, beta);
      std::vector<std::string> names;
      for (size_t i = 0; i < list.size(); ++i) {
        index_[k].emplace(list[i], static_cast<int>(i));
        names.push_back(monomial_label(list[i].first, list[i].second, dir_));
      }
      vecs_.emplace(k, std::move(list));
      labels_.emplace(k, std::move(names));
      keys_.push_back(k);
    }
    std::sort(keys_.begin(), keys_.end());
  }

  std::vector<WeightKey> weights() const override { return keys_; }

  const std::vector<std::string>& labels(WeightKey k) const override {
    auto it = labels_.find(k);
    return it == labels_.end() ? no_labels() : it->second;
  }

  bool supports(const BasisSymbol& s) const override {
    if (s.kind == SymKind::K) return true;
    if (!s.is_graded()) return false;
    auto mult = multiple_of(s.m, basis_.b1);
    return mult && *mult != 0;
  }

protected:
  SparseMatrix compute_action(const BasisSymbol& s, WeightKey src) const override {
    WeightKey tgt = target_key(s, src);
    SparseMatrix m(dim(tgt), dim(src));
    if (m.rows() == 0 || m.cols() == 0) return m;
    long k = *multiple_of(s.m, basis_.b1);
    int q = static_cast<int>(std::labs(k));
    bool lowering = dir_ > 0 ? k < 0 : k > 0;
    const auto& src_list = vecs_.at(src);
    const auto& tidx = index_.at(tgt);
    for (size_t col = 0; col < src_list.size(); ++col) {
      const auto& [alpha, beta] = src_list[col];
      const int ci = static_cast<int>(col);
      if (lowering) {
        Mono2 next = s.kind == SymKind::E ? Mono2{with_part(alpha, q), beta}
                                          : Mono2{alpha, with_part(beta, q)};
        m.set(tidx.at(next), ci, Rational(1));
        continue;
      }
      // one-sided pairing: the opposite family differentiates, with the
      // central levels as the pairing values
      int me = part_mult(alpha, q);
      int mt = part_mult(beta, q);
      if (s.kind == SymKind::E) {
        if (me > 0 && !c_[0].is_zero())
          m.add_to(tidx.at({without_part(alpha, q), beta}), ci,
                   Rational(k) * c_[0] * Rational(me));
        if (mt > 0 && !c_[1].is_zero())
          m.add_to(tidx.at({alpha, without_part(beta, q)}), ci,
                   Rational(k) * c_[1] * Rational(mt));
      } else {
        if (me > 0 && !c_[1].is_zero())
          m.add_to(tidx.at({without_part(alpha, q), beta}), ci,
                   Rational(k) * c_[1] * Rational(me));
      }
    }
    return m;
  }

private:
  std::array<Rational, 4> c_;
  int dir_;
  std::vector<WeightKey> keys_;
  std::map<WeightKey, std::vector<Mono2>> vecs_;
  std::map<WeightKey, std::map<Mono2, int>> index_;
  std::map<WeightKey, std::vector<std::string>> labels_;
};

// ---------------------------------------------------------------------------

class TensorModule : public TruncatedModule {
public:
  using Entry = std::pair<long, std::vector<int>>;  // Laurent exponent, E-parts

  TensorModule(RhoSpec rho, char epsilon, Rational c1, const BasisPair& b, int depth,
               int window)
      : TruncatedModule(b, Truncation::make(depth, window), Axis::B1),
        rho_(std::move(rho)),
        c1_(std::move(c1)),
        dir_(eps_dir(epsilon)) {
    rho_.validate(b);
    set_level_dir(dir_);
    set_k_scalars_from_levels({c1_, Rational(0), Rational(0), Rational(0)});
    // exponent set: additive closure of the t-support from 0, inside the window
    std::set<long> steps;
    for (long k = -window; k <= window; ++k)
      if (k != 0 && !rho_.rho_t(k).is_zero()) steps.insert(k);
    std::deque<long> todo{0};
    exps_.insert(0);
    while (!todo.empty()) {
      long s = todo.front();
      todo.pop_front();
      for (long k : steps) {
        long s2 = s + k;
        if (std::labs(s2) <= window && exps_.insert(s2).second) todo.push_back(s2);
      }
    }
    // basis: exponent times a Fock monomial, indexed by the combined grade
    std::map<WeightKey, std::vector<Entry>> build;
    for (long s : exps_)
      for (int n = 0; n <= depth; ++n) {
        WeightKey k{s - static_cast<long>(dir_) * n, 0};
        for (const auto& alpha : partitions(n)) build[k].emplace_back(s, alpha);
      }
    for (auto& [k, list] : build) {
      std::vector<std::string> names;
      for (size_t i = 0; i < list.size(); ++i) {
        index_[k].emplace(list[i], static_cast<int>(i));
        names.push_back("t[" + std::to_string(list[i].first) + "](x)" +
                        monomial_label(list[i].second, {}, dir_));
      }
      vecs_.emplace(k, std::move(list));
      labels_.emplace(k, std::move(names));
      keys_.push_back(k);
    }
  }

  std::vector<WeightKey> weights() const override { return keys_; }

  const std::vector<std::string>& labels(WeightKey k) const override {
    auto it = labels_.find(k);
    return it == labels_.end() ? no_labels() : it->second;
  }

  bool supports(const BasisSymbol& s) const override {
    if (s.kind == SymKind::K) return true;
    if (!s.is_graded()) return false;
    auto mult = multiple_of(s.m, basis_.b1);
    return mult && *mult != 0;
  }

  const std::set<long>& exponents() const { return exps_; }

protected:
  SparseMatrix compute_action(const BasisSymbol& s, WeightKey src) const override {
    WeightKey tgt = target_key(s, src);
    SparseMatrix m(dim(tgt), dim(src));
    if (m.rows() == 0 || m.cols() == 0) return m;
    long k = *multiple_of(s.m, basis_.b1);
    const auto& src_list = vecs_.at(src);
    const auto& tidx = index_.at(tgt);
    if (s.kind == SymKind::T) {
      Rational v = rho_.rho_t(k);
      if (v.is_zero()) return m;
      for (size_t c = 0; c < src_list.size(); ++c) {
        const auto& [e, alpha] = src_list[c];
        if (!exps_.count(e + k)) continue;  // outside the retained exponents
        m.set(tidx.at({e + k, alpha}), static_cast<int>(c), v);
      }
      return m;
    }
    int q = static_cast<int>(std::labs(k));
    bool lowering = dir_ > 0 ? k < 0 : k > 0;
    for (size_t c = 0; c < src_list.size(); ++c) {
      const auto& [e, alpha] = src_list[c];
      if (lowering) {
        auto it = tidx.find({e, with_part(alpha, q)});
        if (it != tidx.end()) m.set(it->second, static_cast<int>(c), Rational(1));
      } else {
        int mult = part_mult(alpha, q);
        if (mult == 0) continue;
        m.add_to(tidx.at({e, without_part(alpha, q)}), static_cast<int>(c),
                 Rational(k) * c1_ * Rational(mult));
      }
    }
    return m;
  }

private:
  RhoSpec rho_;
  Rational c1_;
  int dir_;
  std::set<long> exps_;
  std::vector<WeightKey> keys_;
  std::map<WeightKey, std::vector<Entry>> vecs_;
  std::map<WeightKey, std::map<Entry, int>> index_;
  std::map<WeightKey, std::vector<std::string>> labels_;
};

// ---------------------------------------------------------------------------

class ExtendedModule : public TruncatedModule {
public:
  ExtendedModule(ModulePtr parent, std::pair<Rational, Rational> lambda, const BasisPair& b)
      : TruncatedModule(parent->basis(), parent->trunc(), parent->axis()),
        parent_(std::move(parent)) {
    if (parent_->axis() != Axis::B1)
      throw std::invalid_argument("extend_to_L0: base module must be graded along b1");
    if (!(parent_->basis() == b))
      throw std::invalid_argument("extend_to_L0: basis mismatch");
    set_k_scalars(parent_->k_scalars());
    set_lambda(std::move(lambda.first), std::move(lambda.second));
    set_has_d(true);
    set_top_generated(parent_->top_generated());
    // recover the grading direction from the parent's level convention
    set_level_dir(static_cast<int>(-parent_->level_of(WeightKey{1, 0})));
  }

  std::vector<WeightKey> weights() const override { return parent_->weights(); }
  const std::vector<std::string>& labels(WeightKey k) const override {
    return parent_->labels(k);
  }
  bool supports(const BasisSymbol& s) const override {
    return s.kind == SymKind::D ? true : parent_->supports(s);
  }
  std::vector<BasisSymbol> raising_generators(int dist) const override {
    return parent_->raising_generators(dist);
  }
  std::vector<BasisSymbol> closure_generators() const override {
    return parent_->closure_generators();
  }

protected:
  SparseMatrix compute_action(const BasisSymbol& s, WeightKey src) const override {
    return parent_->action(s, src);
  }

private:
  ModulePtr parent_;
};

// ---------------------------------------------------------------------------

// Shared induction engine. Basis vectors are sorted words in the lowering
// letters (b2-levels -1..-depth, b1-multiples within a window) applied to
// a base-row vector. The base row is either a whole level-zero module (2D
// weight lattice) or a single line acted on through rho values (weights
// indexed by level only, since the level-zero action returns to the same
// space). Actions move the generator through the word letter by letter,
// paying the commutator each time.
//
// Words at the deepest level are capped at the configured window N; words at
// shallower levels get progressively wider caps, chosen so that every raising
// image of an in-basis word is itself in-basis. A word at level l has at most
// l letters, so its b1-coordinates sum to at most l*cap(l) in absolute value,
// and one raising step adds at most raising_bound; hence
// cap(l-1) = l*cap(l) + raising_bound makes the raising recursion lossless.
// Without this, images dropped at the window edge perturb the radical rows
// and the per-level quotient dimensions never settle as the window grows.
class InducedModule : public TruncatedModule {
public:
  using Key3 = std::tuple<Monomial, long, int>;  // word, base grade, base index

  InducedModule(const BasisPair& b, ModulePtr v0, const Truncation& t)
      : TruncatedModule(b, t, Axis::B2), v0_(std::move(v0)), str_(b) {
    if (v0_->axis() != Axis::B1)
      throw std::invalid_argument("induce: base module must be graded along b1");
    if (!v0_->has_d_action())
      throw std::invalid_argument("induce: base module must carry the derivation action");
    if (!(v0_->basis() == b)) throw std::invalid_argument("induce: basis mismatch");
    set_k_scalars(v0_->k_scalars());
    auto [l1, l2] = v0_->weight_base();
    set_lambda(std::move(l1), std::move(l2));
    set_has_d(true);
    set_top_generated(true);
    build();
  }

  InducedModule(const RhoSpec& rho, const BasisPair& b, const Truncation& t)
      : TruncatedModule(b, t, Axis::LevelOnly), rho_(rho), str_(b) {
    rho_->validate(b);
    set_k_scalars_from_levels({Rational(0), Rational(0), rho_->f_b2(b), rho_->h_b2(b)});
    set_top_generated(true);
    build();
  }

  std::vector<WeightKey> weights() const override { return keys_; }

  const std::vector<std::string>& labels(WeightKey k) const override {
    auto it = labels_.find(k);
    return it == labels_.end() ? no_labels() : it->second;
  }

  bool supports(const BasisSymbol& s) const override {
    if (s.kind == SymKind::K) return true;
    if (s.kind == SymKind::D) return has_d_action();
    return s.is_graded();
  }

protected:
  SparseMatrix compute_action(const BasisSymbol& s, WeightKey src) const override {
    WeightKey tgt = target_key(s, src);
    SparseMatrix m(dim(tgt), dim(src));
    if (m.rows() == 0 || m.cols() == 0) return m;
    const auto& cols = vecs_.at(src);
    const auto& tindex = index_.at(tgt);
    for (size_t c = 0; c < cols.size(); ++c) {
      const auto& [mu, j, idx] = cols[c];
      for (const auto& [k3, coeff] : engine(s, mu, j, idx)) {
        auto it = tindex.find(k3);
        if (it == tindex.end())
          throw std::logic_error("induced action left the enumerated basis at " + tgt.str());
        m.add_to(it->second, static_cast<int>(c), coeff);
      }
    }
    return m;
  }

private:
  void add_entry(WeightKey k, Key3 key3, std::string label) {
    auto& list = vecs_[k];
    index_[k].emplace(key3, static_cast<int>(list.size()));
    list.push_back(std::move(key3));
    labels_[k].push_back(std::move(label));
  }

  static std::string word_label(const Monomial& mu) {
    std::string s;
    for (const auto& l : mu) s += l.str();
    return s;
  }

  int letter_level(const BasisSymbol& s) const {
    return static_cast<int>(-coords(s.m, basis_).x2);
  }

  // A word is retained when every letter's b1-coordinate fits the cap for
  // the word's total level.
  bool word_ok(const Monomial& w) const {
    int lvl = 0;
    for (const auto& l : w) lvl += letter_level(l);
    if (lvl < 1 || lvl > trunc_.depth) return false;
    long cap = caps_[static_cast<size_t>(lvl)];
    for (const auto& l : w)
      if (std::labs(coords(l.m, basis_).x1) > cap) return false;
    return true;
  }

  void dfs_words(size_t start, int remaining, long cap, Monomial& cur,
                 std::vector<Monomial>& out) const {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (size_t i = start; i < letters_.size(); ++i) {
      int lv = letter_level(letters_[i]);
      if (lv > remaining) break;  // letters are listed by ascending level
      if (std::labs(coords(letters_[i].m, basis_).x1) > cap) continue;
      cur.push_back(letters_[i]);
      dfs_words(i, remaining - lv, cap, cur, out);
      cur.pop_back();
    }
  }

  void build() {
    caps_.assign(static_cast<size_t>(trunc_.depth) + 1, 0);
    if (trunc_.depth >= 1) {
      caps_[static_cast<size_t>(trunc_.depth)] = trunc_.window;
      for (int lvl = trunc_.depth - 1; lvl >= 1; --lvl) {
        caps_[static_cast<size_t>(lvl)] =
            (lvl + 1) * caps_[static_cast<size_t>(lvl + 1)] + trunc_.raising_bound;
        if (caps_[static_cast<size_t>(lvl)] > 1000000)
          throw std::invalid_argument(
              "induced module: truncation too deep for the nested window schedule");
      }
    }
    for (int lvl = 1; lvl <= trunc_.depth; ++lvl)
      for (long a = -caps_[static_cast<size_t>(lvl)]; a <= caps_[static_cast<size_t>(lvl)];
           ++a) {
        Vec2 m = a * basis_.b1 + static_cast<long>(-lvl) * basis_.b2;
        letters_.push_back(BasisSymbol::mkE(m));
        letters_.push_back(BasisSymbol::mkT(m));
      }
    if (rho_) {
      add_entry({0, 0}, Key3{{}, 0, 0}, "v");
    } else {
      for (WeightKey vk : v0_->weights()) {
        const auto& ls = v0_->labels(vk);
        for (size_t i = 0; i < ls.size(); ++i)
          add_entry({vk.x, 0}, Key3{{}, vk.x, static_cast<int>(i)}, ls[i]);
      }
    }
    for (int lvl = 1; lvl <= trunc_.depth; ++lvl) {
      std::vector<Monomial> words;
      Monomial cur;
      dfs_words(0, lvl, caps_[static_cast<size_t>(lvl)], cur, words);
      for (const Monomial& mu : words) {
        long xmu = 0;
        for (const auto& l : mu) xmu += coords(l.m, basis_).x1;
        if (rho_) {
          add_entry({0, -lvl}, Key3{mu, 0, 0}, word_label(mu) + "(x)v");
        } else {
          for (WeightKey vk : v0_->weights()) {
            const auto& ls = v0_->labels(vk);
            for (size_t i = 0; i < ls.size(); ++i)
              add_entry({xmu + vk.x, -lvl}, Key3{mu, vk.x, static_cast<int>(i)},
                        word_label(mu) + "(x)" + ls[i]);
          }
        }
      }
    }
    for (const auto& [k, list] : vecs_) keys_.push_back(k);
  }

  using Terms = std::map<Key3, Rational>;

  Terms engine(const BasisSymbol& g, const Monomial& mu, long j, int idx) const {
    const bool memoize = mu.size() <= 1;
    std::tuple<BasisSymbol, Monomial, long, int> ekey{g, mu, j, idx};
    if (memoize) {
      auto found = engine_memo_.find(ekey);
      if (found != engine_memo_.end()) return found->second;
    }
    Terms out;
    auto add3 = [&out](Key3 k3, const Rational& c) {
      if (c.is_zero()) return;
      auto it = out.find(k3);
      if (it == out.end()) {
        out.emplace(std::move(k3), c);
      } else {
        it->second += c;
        if (it->second.is_zero()) out.erase(it);
      }
    };
    Vec2 gc = coords(g.m, basis_);
    if (mu.empty()) {
      if (gc.x2 == 0) {
        if (rho_) {
          add3(Key3{{}, 0, 0}, g.kind == SymKind::E ? rho_->rho_E(gc.x1) : rho_->rho_t(gc.x1));
        } else {
          if (!v0_->supports(g))
            throw std::invalid_argument("unknown generator for the base module: " + g.str());
          WeightKey vsrc{j, 0};
          WeightKey vt = v0_->target_key(g, vsrc);
          if (v0_->dim(vsrc) > 0 && v0_->dim(vt) > 0) {
            const SparseMatrix& vm = v0_->action(g, vsrc);
            for (int r = 0; r < vm.rows(); ++r) {
              Rational e = svec_get(vm.row(r), idx);
              if (!e.is_zero()) add3(Key3{{}, vt.x, r}, e);
            }
          }
        }
      } else if (gc.x2 < 0) {
        if (word_ok(Monomial{g})) add3(Key3{Monomial{g}, j, idx}, Rational(1));
      }
      // raising letters annihilate the base row
    } else {
      BasisSymbol u = mu.front();
      Monomial rest(mu.begin() + 1, mu.end());
      for (const auto& [k3, c] : engine(g, rest, j, idx)) {
        const auto& [nu, j2, i2] = k3;
        Monomial w;
        w.reserve(nu.size() + 1);
        w.push_back(u);
        w.insert(w.end(), nu.begin(), nu.end());
        for (const auto& [w2, cw] : str_.straighten(w)) {
          if (!word_ok(w2)) continue;
          add3(Key3{w2, j2, i2}, c * cw);
        }
      }
      for (const auto& [sym, cb] : bracket(g, u)) {
        if (sym.kind == SymKind::K) {
          add3(Key3{rest, j, idx}, cb * k_scalars()[static_cast<size_t>(sym.idx)]);
        } else if (sym.is_graded()) {
          for (const auto& [k3, c] : engine(sym, rest, j, idx)) add3(k3, cb * c);
        }
      }
    }
    if (memoize) return engine_memo_.emplace(std::move(ekey), std::move(out)).first->second;
    return out;
  }

  ModulePtr v0_;
  std::optional<RhoSpec> rho_;
  mutable Straightener str_;
  mutable std::map<std::tuple<BasisSymbol, Monomial, long, int>, Terms> engine_memo_;
  std::vector<long> caps_;  // per-level letter window, index = word level
  std::vector<BasisSymbol> letters_;
  std::vector<WeightKey> keys_;
  std::map<WeightKey, std::vector<Key3>> vecs_;
  std::map<WeightKey, std::map<Key3, int>> index_;
  std::map<WeightKey, std::vector<std::string>> labels_;
};

// ---------------------------------------------------------------------------

// Tensor with Laurent powers: every weight space of the first factor is
// replicated at each exponent k, graded generators shift k by their
// b1-coordinate, and the derivations separate the exponent and the level.
class HatModule : public TruncatedModule {
public:
  HatModule(ModulePtr vq, const BasisPair& b, const Truncation& t)
      : TruncatedModule(b, t, Axis::B2), vq_(std::move(vq)) {
    if (vq_->axis() != Axis::LevelOnly)
      throw std::invalid_argument("hat_V: first factor must be level-graded");
    set_k_scalars(vq_->k_scalars());
    set_has_d(true);
    set_top_generated(true);
    for (long k = -t.window; k <= t.window; ++k)
      for (WeightKey vk : vq_->weights()) {
        WeightKey key{k, vk.y};
        keys_.push_back(key);
        std::vector<std::string> names;
        for (const auto& l : vq_->labels(vk))
          names.push_back(l + "(x)t[" + std::to_string(k) + "]");
        labels_.emplace(key, std::move(names));
      }
    std::sort(keys_.begin(), keys_.end());
  }

  std::vector<WeightKey> weights() const override { return keys_; }

  const std::vector<std::string>& labels(WeightKey k) const override {
    auto it = labels_.find(k);
    return it == labels_.end() ? no_labels() : it->second;
  }

  bool supports(const BasisSymbol& s) const override {
    if (s.kind == SymKind::K) return true;
    if (s.kind == SymKind::D) return true;
    return vq_->supports(s);
  }

protected:
  SparseMatrix compute_action(const BasisSymbol& s, WeightKey src) const override {
    WeightKey tgt = target_key(s, src);
    if (dim(tgt) == 0 || dim(src) == 0) return SparseMatrix(dim(tgt), dim(src));
    return vq_->action(s, WeightKey{0, src.y});
  }

private:
  ModulePtr vq_;
  std::vector<WeightKey> keys_;
  std::map<WeightKey, std::vector<std::string>> labels_;
};

}  // namespace

// ---------------------------------------------------------------------------

ModulePtr laurent_T(const RhoSpec& rho, HSubalgebra alg, const BasisPair& b, int window) {
  require_zbasis(b, "laurent_T");
  if (window < 0) throw std::invalid_argument("laurent_T: negative window");
  return std::make_shared<LaurentModule>(rho, alg, b, window);
}

ClassifyResult classify_T_rho(const RhoSpec& rho, HSubalgebra alg, const BasisPair& b,
                              int window) {
  require_zbasis(b, "classify_T_rho");
  rho.validate(b);
  if (window < 0) throw std::invalid_argument("classify_T_rho: negative window");
  if (rho.kind() == RhoSpec::Kind::Table) {
    long table_max = 0;
    if (alg != HSubalgebra::TOnly)
      for (const auto& [k, v] : rho.table_E())
        if (!v.is_zero()) table_max = std::max(table_max, std::labs(k));
    if (alg != HSubalgebra::EOnly)
      for (const auto& [k, v] : rho.table_t())
        if (!v.is_zero()) table_max = std::max(table_max, std::labs(k));
    if (2 * table_max > window)
      throw std::invalid_argument(
          "classify_T_rho: window must contain twice the table support");
  }
  ClassifyResult res;
  for (long k = -window; k <= window; ++k) {
    if (k == 0) continue;
    bool on = alg != HSubalgebra::TOnly && !rho.rho_E(k).is_zero();
    if (!on) on = alg != HSubalgebra::EOnly && !rho.rho_t(k).is_zero();
    if (on) res.support.push_back(k);
  }
  if (res.support.empty()) {
    // Nothing acts, so every line is invariant; only the one-dimensional
    // window-zero module is irreducible.
    res.r = 0;
    res.irreducible = (window == 0);
    return res;
  }
  long g = 0;
  bool pos = false, neg = false;
  for (long k : res.support) {
    g = std::gcd(g, std::labs(k));
    (k > 0 ? pos : neg) = true;
  }
  res.r = g;
  res.irreducible = pos && neg;
  return res;
}

ModulePtr fock(char epsilon, const Rational& a, const BasisPair& b, int depth) {
  require_zbasis(b, "fock");
  if (depth < 0) throw std::invalid_argument("fock: negative depth");
  return std::make_shared<FockModule>(epsilon, a, b, depth);
}

ModulePtr verma_H(const std::array<Rational, 4>& c, char epsilon, const BasisPair& b,
                  int depth) {
  require_zbasis(b, "verma_H");
  if (depth < 0) throw std::invalid_argument("verma_H: negative depth");
  return std::make_shared<VermaHModule>(c, epsilon, b, depth);
}

ModulePtr tensor_M_rho(const RhoSpec& rho, char epsilon, const Rational& c1,
                       const BasisPair& b, int depth, int window) {
  require_zbasis(b, "tensor_M_rho");
  if (depth < 0 || window < 0)
    throw std::invalid_argument("tensor_M_rho: negative truncation");
  if (c1.is_zero())
    throw std::invalid_argument(
        "tensor_M_rho: case mismatch — this construction requires c1 != 0 "
        "(c1 = 0 falls to the Laurent-module case)");
  bool e_zero = true;
  if (rho.kind() == RhoSpec::Kind::Table) {
    for (const auto& [k, v] : rho.table_E())
      if (!v.is_zero()) e_zero = false;
  } else {
    e_zero = rho.g1().is_zero();
  }
  if (!e_zero)
    throw std::invalid_argument(
        "tensor_M_rho: case mismatch — rho must act through the t-family only");
  return std::make_shared<TensorModule>(rho, epsilon, c1, b, depth, window);
}

ModulePtr extend_to_L0(ModulePtr h_mod, std::pair<Rational, Rational> lambda,
                       const BasisPair& b) {
  require_zbasis(b, "extend_to_L0");
  return std::make_shared<ExtendedModule>(std::move(h_mod), std::move(lambda), b);
}

ModulePtr induce(const BasisPair& b, ModulePtr v0_mod, const Truncation& trunc) {
  require_zbasis(b, "induce");
  return std::make_shared<InducedModule>(b, std::move(v0_mod), trunc);
}

ModulePtr highest_weight_raw(const RhoSpec& rho, const BasisPair& b, const Truncation& trunc) {
  require_zbasis(b, "highest_weight_V_rho");
  return std::make_shared<InducedModule>(rho, b, trunc);
}

ModulePtr irreducible_quotient(ModulePtr mod) {
  SliceMap rad = radical(*mod);
  return irreducible_quotient(std::move(mod), rad);
}

ModulePtr highest_weight_V_rho(const RhoSpec& rho, const BasisPair& b,
                               const Truncation& trunc) {
  return irreducible_quotient(highest_weight_raw(rho, b, trunc));
}

ModulePtr hat_V(const RhoSpec& rho, const BasisPair& b, const Truncation& trunc,
                std::optional<long> i) {
  ModulePtr vq = highest_weight_V_rho(rho, b, trunc);
  auto hat = std::make_shared<HatModule>(std::move(vq), b, trunc);
  if (!i) return hat;
  long probe = trunc.window;
  if (rho.kind() == RhoSpec::Kind::Table) {
    long mx = 0;
    for (const auto& [k, v] : rho.table_E())
      if (!v.is_zero()) mx = std::max(mx, std::labs(k));
    for (const auto& [k, v] : rho.table_t())
      if (!v.is_zero()) mx = std::max(mx, std::labs(k));
    probe = std::max(probe, 2 * mx);
  }
  ClassifyResult cls = classify_T_rho(rho, HSubalgebra::Full, b, probe);
  long ie = *i;
  if (cls.r >= 1) ie = ((ie % cls.r) + cls.r) % cls.r;
  if (std::labs(ie) > trunc.window)
    throw std::invalid_argument("hat_V: tensor index outside the window");
  SliceMap w = generated_submodule(*hat, {unit_vector({ie, 0}, 0)});
  return restrict_to_slice(hat, w);
}

}  // namespace hvr2
