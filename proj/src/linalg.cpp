#include "hvr2/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace hvr2 {

void svec_axpy(SVec& y, const Rational& c, const SVec& x) {
  if (c.is_zero()) return;
  for (const auto& [i, v] : x) {
    auto it = y.find(i);
    if (it == y.end()) {
      y.emplace(i, c * v);
    } else {
      it->second += c * v;
      if (it->second.is_zero()) y.erase(it);
    }
  }
}

bool svec_is_zero(const SVec& v) { return v.empty(); }

Rational svec_get(const SVec& v, int i) {
  auto it = v.find(i);
  return it == v.end() ? Rational(0) : it->second;
}

SparseMatrix::SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_(rows) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("SparseMatrix: negative shape");
}

SparseMatrix SparseMatrix::from_rows(std::vector<SVec> rows, int cols) {
  SparseMatrix m(static_cast<int>(rows.size()), cols);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].empty() && rows[r].rbegin()->first >= cols)
      throw std::invalid_argument("SparseMatrix: entry beyond column count");
    m.row_[r] = std::move(rows[r]);
  }
  return m;
}

int SparseMatrix::nnz() const {
  int n = 0;
  for (const auto& r : row_) n += static_cast<int>(r.size());
  return n;
}

Rational SparseMatrix::get(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw std::out_of_range("SparseMatrix::get");
  return svec_get(row_[r], c);
}

void SparseMatrix::set(int r, int c, const Rational& v) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw std::out_of_range("SparseMatrix::set");
  if (v.is_zero())
    row_[r].erase(c);
  else
    row_[r][c] = v;
}

void SparseMatrix::add_to(int r, int c, const Rational& v) {
  if (v.is_zero()) return;
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw std::out_of_range("SparseMatrix::add_to");
  auto it = row_[r].find(c);
  if (it == row_[r].end()) {
    row_[r].emplace(c, v);
  } else {
    it->second += v;
    if (it->second.is_zero()) row_[r].erase(it);
  }
}

SVec SparseMatrix::apply(const SVec& x) const {
  SVec y;
  for (int r = 0; r < rows_; ++r) {
    Rational acc(0);
    const SVec& rw = row_[r];
    // iterate the sparser of the two
    if (rw.size() <= x.size()) {
      for (const auto& [c, v] : rw) acc += v * svec_get(x, c);
    } else {
      for (const auto& [c, v] : x) acc += v * svec_get(rw, c);
    }
    if (!acc.is_zero()) y.emplace(r, acc);
  }
  return y;
}

SparseMatrix SparseMatrix::vstack(const SparseMatrix& other) const {
  if (cols_ != other.cols_) throw std::invalid_argument("vstack: column mismatch");
  SparseMatrix m(rows_ + other.rows_, cols_);
  for (int r = 0; r < rows_; ++r) m.row_[r] = row_[r];
  for (int r = 0; r < other.rows_; ++r) m.row_[rows_ + r] = other.row_[r];
  return m;
}

namespace {

constexpr int kDenseColumnLimit = 64;

RrefResult rref_sparse(const SparseMatrix& m) {
  std::vector<SVec> work;
  work.reserve(m.rows());
  for (int r = 0; r < m.rows(); ++r) work.push_back(m.row(r));

  std::vector<SVec> done;
  std::vector<int> pivots;
  for (int col = 0; col < m.cols(); ++col) {
    // first remaining row with a nonzero entry in this column
    size_t hit = work.size();
    for (size_t r = 0; r < work.size(); ++r) {
      if (work[r].count(col)) { hit = r; break; }
    }
    if (hit == work.size()) continue;
    SVec piv = std::move(work[hit]);
    work.erase(work.begin() + static_cast<long>(hit));
    Rational inv = Rational(1) / piv.at(col);
    if (inv != Rational(1)) {
      for (auto& [c, v] : piv) v *= inv;
    }
    for (auto& r : work) {
      auto it = r.find(col);
      if (it != r.end()) {
        Rational f = -it->second;
        svec_axpy(r, f, piv);
      }
    }
    for (auto& r : done) {
      auto it = r.find(col);
      if (it != r.end()) {
        Rational f = -it->second;
        svec_axpy(r, f, piv);
      }
    }
    done.push_back(std::move(piv));
    pivots.push_back(col);
  }
  return {SparseMatrix::from_rows(std::move(done), m.cols()), std::move(pivots)};
}

RrefResult rref_dense(const SparseMatrix& m) {
  const int nr = m.rows(), nc = m.cols();
  std::vector<std::vector<Rational>> a(nr, std::vector<Rational>(nc, Rational(0)));
  for (int r = 0; r < nr; ++r)
    for (const auto& [c, v] : m.row(r)) a[r][c] = v;

  std::vector<int> pivots;
  int top = 0;
  for (int col = 0; col < nc && top < nr; ++col) {
    int hit = -1;
    for (int r = top; r < nr; ++r) {
      if (!a[r][col].is_zero()) { hit = r; break; }
    }
    if (hit < 0) continue;
    std::swap(a[top], a[hit]);
    Rational inv = Rational(1) / a[top][col];
    for (int c = col; c < nc; ++c) a[top][c] *= inv;
    for (int r = 0; r < nr; ++r) {
      if (r == top || a[r][col].is_zero()) continue;
      Rational f = a[r][col];
      for (int c = col; c < nc; ++c) a[r][c] -= f * a[top][c];
    }
    pivots.push_back(col);
    ++top;
  }
  std::vector<SVec> rows(pivots.size());
  for (size_t r = 0; r < pivots.size(); ++r)
    for (int c = 0; c < nc; ++c)
      if (!a[r][c].is_zero()) rows[r].emplace(c, a[r][c]);
  return {SparseMatrix::from_rows(std::move(rows), nc), std::move(pivots)};
}

}  // namespace

RrefResult rref(const SparseMatrix& m) {
  return m.cols() < kDenseColumnLimit ? rref_dense(m) : rref_sparse(m);
}

int rank(const SparseMatrix& m) { return static_cast<int>(rref(m).pivot_cols.size()); }

std::vector<SVec> kernel_basis(const SparseMatrix& m) {
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int p : r.pivot_cols) is_pivot[p] = true;
  std::vector<SVec> out;
  for (int f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    SVec v;
    v.emplace(f, Rational(1));
    for (size_t i = 0; i < r.pivot_cols.size(); ++i) {
      Rational e = svec_get(r.mat.row(static_cast<int>(i)), f);
      if (!e.is_zero()) v.emplace(r.pivot_cols[i], -e);
    }
    out.push_back(std::move(v));
  }
  return out;
}

Subspace Subspace::from_vectors(int ambient, const std::vector<SVec>& gens) {
  for (const auto& g : gens)
    if (!g.empty() && g.rbegin()->first >= ambient)
      throw std::invalid_argument("Subspace: generator outside ambient space");
  RrefResult r = rref(SparseMatrix::from_rows(gens, ambient));
  Subspace s(ambient);
  s.pivots_ = r.pivot_cols;
  s.rows_.reserve(r.pivot_cols.size());
  for (int i = 0; i < r.mat.rows(); ++i) s.rows_.push_back(r.mat.row(i));
  return s;
}

SVec Subspace::reduce(SVec v) const {
  for (size_t i = 0; i < rows_.size(); ++i) {
    auto it = v.find(pivots_[i]);
    if (it != v.end()) {
      Rational f = -it->second;
      svec_axpy(v, f, rows_[i]);
    }
  }
  return v;
}

bool Subspace::contains_subspace(const Subspace& o) const {
  for (const auto& r : o.rows_)
    if (!contains(r)) return false;
  return true;
}

Subspace Subspace::sum(const Subspace& o) const {
  if (ambient_ != o.ambient_) throw std::invalid_argument("Subspace::sum: ambient mismatch");
  std::vector<SVec> gens = rows_;
  gens.insert(gens.end(), o.rows_.begin(), o.rows_.end());
  return from_vectors(ambient_, gens);
}

bool RankAccumulator::add_row(SVec row) {
  while (!row.empty()) {
    const int p = row.begin()->first;
    if (p >= cols_) throw std::invalid_argument("RankAccumulator: column out of range");
    auto it = rows_.find(p);
    if (it == rows_.end()) {
      const Rational lead = row.begin()->second;
      for (auto& [c, v] : row) v /= lead;
      rows_.emplace(p, std::move(row));
      return true;
    }
    const Rational coeff = -row.begin()->second;
    svec_axpy(row, coeff, it->second);
  }
  return false;
}

Subspace Subspace::intersect(const Subspace& o) const {
  if (ambient_ != o.ambient_)
    throw std::invalid_argument("Subspace::intersect: ambient mismatch");
  // Columns of M are our basis vectors followed by o's negated basis; a
  // kernel element (alpha, beta) means sum_i alpha_i u_i = sum_j beta_j w_j.
  const int ca = dim(), cb = o.dim();
  SparseMatrix m(ambient_, ca + cb);
  for (int j = 0; j < ca; ++j)
    for (const auto& [i, v] : rows_[j]) m.set(i, j, v);
  for (int j = 0; j < cb; ++j)
    for (const auto& [i, v] : o.rows_[j]) m.set(i, ca + j, -v);
  std::vector<SVec> gens;
  for (const SVec& k : kernel_basis(m)) {
    SVec v;
    for (const auto& [j, c] : k) {
      if (j >= ca) break;
      svec_axpy(v, c, rows_[j]);
    }
    if (!v.empty()) gens.push_back(std::move(v));
  }
  return from_vectors(ambient_, gens);
}

}  // namespace hvr2
