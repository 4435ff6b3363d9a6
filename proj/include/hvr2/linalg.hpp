#pragma once

#include <map>
#include <vector>

#include "hvr2/rational.hpp"

namespace hvr2 {

// Sparse vector: index -> nonzero coefficient. Absent index means zero.
using SVec = std::map<int, Rational>;

// y += c * x
void svec_axpy(SVec& y, const Rational& c, const SVec& x);
bool svec_is_zero(const SVec& v);
Rational svec_get(const SVec& v, int i);

// Rectangular matrix over the rationals, stored row-major with sparse rows.
// Only nonzero entries are kept.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols);
  static SparseMatrix from_rows(std::vector<SVec> rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const;

  Rational get(int r, int c) const;
  void set(int r, int c, const Rational& v);  // storing zero erases the entry
  void add_to(int r, int c, const Rational& v);

  const SVec& row(int r) const { return row_[r]; }

  // Matrix-vector product; x is indexed by column.
  SVec apply(const SVec& x) const;

  // Rows of `other` appended below this matrix (column counts must agree).
  SparseMatrix vstack(const SparseMatrix& other) const;

  bool operator==(const SparseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && row_ == o.row_;
  }

private:
  int rows_ = 0, cols_ = 0;
  std::vector<SVec> row_;
};

struct RrefResult {
  SparseMatrix mat;             // reduced row echelon form, zero rows dropped
  std::vector<int> pivot_cols;  // ascending, one per retained row
};

// Gauss-Jordan elimination scanning columns left to right; the pivot for a
// column is the first remaining row with a nonzero entry there. Small
// matrices (fewer than 64 columns) run on a dense working copy; the result
// is identical either way, so the crossover is not observable.
RrefResult rref(const SparseMatrix& m);

int rank(const SparseMatrix& m);

// Basis of the right null space {x : m x = 0}, one vector per free column,
// ordered by free-column index. The basis is the canonical one read off the
// RREF (unit entry at the free column).
std::vector<SVec> kernel_basis(const SparseMatrix& m);

// Incremental Gaussian elimination: rows are fed one at a time and reduced
// against the retained echelon rows (forward elimination only, which keeps
// them sparse); the rank is available at any point, so callers can stop
// feeding rows once it saturates.
class RankAccumulator {
public:
  explicit RankAccumulator(int cols) : cols_(cols) {}

  bool add_row(SVec row);  // true iff the rank grew
  int rank() const { return static_cast<int>(rows_.size()); }
  int cols() const { return cols_; }

private:
  int cols_;
  std::map<int, SVec> rows_;  // pivot column -> row, scaled to pivot 1
};

// Linear subspace of Q^ambient, stored as an RREF row basis. Construction
// canonicalizes, so two subspaces are equal iff their stored rows are equal.
class Subspace {
public:
  explicit Subspace(int ambient) : ambient_(ambient) {}
  static Subspace from_vectors(int ambient, const std::vector<SVec>& gens);

  int ambient() const { return ambient_; }
  int dim() const { return static_cast<int>(rows_.size()); }
  const std::vector<SVec>& basis() const { return rows_; }
  const std::vector<int>& pivots() const { return pivots_; }

  // Residue of v after eliminating all pivot coordinates; zero iff v lies in
  // the subspace.
  SVec reduce(SVec v) const;
  bool contains(const SVec& v) const { return svec_is_zero(reduce(std::move(v))); }
  bool contains_subspace(const Subspace& o) const;

  Subspace sum(const Subspace& o) const;
  Subspace intersect(const Subspace& o) const;

  bool operator==(const Subspace& o) const {
    return ambient_ == o.ambient_ && rows_ == o.rows_;
  }

private:
  int ambient_;
  std::vector<SVec> rows_;
  std::vector<int> pivots_;
};

}  // namespace hvr2
