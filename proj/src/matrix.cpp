#include "pcc/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace pcc {

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  if (rows.empty()) return {};
  RatMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw DomainError("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
  if (cols_ != o.rows_) throw DomainError("matrix shape mismatch");
  RatMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
    }
  return r;
}

RatVector RatMatrix::operator*(const RatVector& v) const {
  if (cols_ != v.size()) throw DomainError("matrix-vector shape mismatch");
  RatVector r(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
  return r;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RatMatrix RatMatrix::select_rows(const std::vector<std::size_t>& idx) const {
  RatMatrix r(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(idx[i], j);
  return r;
}

RatMatrix RatMatrix::select_cols(std::size_t first, std::size_t count) const {
  RatMatrix r(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) r(i, j) = (*this)(i, first + j);
  return r;
}

RatMatrix RatMatrix::hconcat(const RatMatrix& o) const {
  if (rows_ != o.rows_) throw DomainError("hconcat row mismatch");
  RatMatrix r(rows_, cols_ + o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < o.cols_; ++j) r(i, cols_ + j) = o(i, j);
  }
  return r;
}

namespace {

// Row echelon over Q; returns rank and accumulates the determinant sign/product.
std::size_t eliminate(RatMatrix& a, Rational* det) {
  std::size_t rank = 0;
  if (det) *det = 1;
  for (std::size_t col = 0; col < a.cols() && rank < a.rows(); ++col) {
    std::size_t piv = rank;
    while (piv < a.rows() && a(piv, col) == 0) ++piv;
    if (piv == a.rows()) {
      if (det) *det = 0;
      continue;
    }
    if (piv != rank) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(rank, j));
      if (det) *det = -*det;
    }
    if (det) *det *= a(rank, col);
    for (std::size_t i = rank + 1; i < a.rows(); ++i) {
      if (a(i, col) == 0) continue;
      Rational f = a(i, col) / a(rank, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

}  // namespace

Rational RatMatrix::determinant() const {
  if (rows_ != cols_) throw DomainError("determinant of non-square matrix");
  if (rows_ == 0) return 1;
  RatMatrix a = *this;
  Rational det;
  std::size_t rk = eliminate(a, &det);
  return rk < rows_ ? Rational(0) : det;
}

std::size_t RatMatrix::rank() const {
  RatMatrix a = *this;
  return eliminate(a, nullptr);
}

RatMatrix RatMatrix::inverse() const {
  if (rows_ != cols_) throw DomainError("inverse of non-square matrix");
  std::size_t n = rows_;
  RatMatrix a = hconcat(identity(n));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a(piv, col) == 0) ++piv;
    if (piv == n) throw DomainError("matrix is singular");
    if (piv != col)
      for (std::size_t j = 0; j < 2 * n; ++j) std::swap(a(piv, j), a(col, j));
    Rational inv = 1 / a(col, col);
    for (std::size_t j = 0; j < 2 * n; ++j) a(col, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a(i, col) == 0) continue;
      Rational f = a(i, col);
      for (std::size_t j = 0; j < 2 * n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return a.select_cols(n, n);
}

bool RatMatrix::p_integral(long p) const {
  return std::all_of(data_.begin(), data_.end(), [p](const Rational& q) { return is_p_integral(q, p); });
}

Valuation RatMatrix::min_valuation(long p) const {
  Valuation best = Valuation::infinite();
  for (const auto& q : data_) {
    Valuation v = valuation(q, p);
    if (v < best) best = v;
  }
  return best;
}

std::optional<std::vector<std::size_t>> RatMatrix::unit_minor(long p) const {
  std::size_t d = cols_;
  if (d > rows_) return std::nullopt;
  std::vector<std::size_t> idx(d);
  // Enumerate row subsets in lexicographic order.
  std::vector<bool> mask(rows_, false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(d), true);
  do {
    std::size_t k = 0;
    for (std::size_t i = 0; i < rows_; ++i)
      if (mask[i]) idx[k++] = i;
    Rational det = select_rows(idx).determinant();
    if (det != 0 && valuation(det, p) == Valuation::finite(0)) return idx;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return std::nullopt;
}

std::size_t RatMatrix::rank_mod_p(long p) const {
  std::vector<std::vector<std::int64_t>> a(rows_, std::vector<std::int64_t>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) a[i][j] = reduce_mod((*this)(i, j), p, p);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
    std::size_t piv = rank;
    while (piv < rows_ && a[piv][col] == 0) ++piv;
    if (piv == rows_) continue;
    std::swap(a[piv], a[rank]);
    std::int64_t inv = mod_inverse(a[rank][col], p);
    for (std::size_t i = rank + 1; i < rows_; ++i) {
      std::int64_t f = mul_mod(a[i][col], inv, p);
      for (std::size_t j = col; j < cols_; ++j) a[i][j] = mod_norm(a[i][j] - f * a[rank][j], p);
    }
    ++rank;
  }
  return rank;
}

std::string RatMatrix::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
  }
  os << ']';
  return os.str();
}

RatVector scale(const RatVector& v, const Rational& c) {
  RatVector r(v);
  for (auto& x : r) x *= c;
  return r;
}

Valuation vector_valuation(const RatVector& v, long p) {
  Valuation best = Valuation::infinite();
  for (const auto& x : v) {
    Valuation w = valuation(x, p);
    if (w < best) best = w;
  }
  return best;
}

Residues reduce_vector(const RatVector& v, long p, std::int64_t modulus) {
  Residues r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = reduce_mod(v[i], p, modulus);
  return r;
}

RatMatrix column_hermite(const RatMatrix& m, long p) {
  RatMatrix h = m;
  std::size_t d = h.rows();
  if (h.cols() != d) throw DomainError("column_hermite expects a square matrix");
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t best = d;
    Valuation bv = Valuation::infinite();
    for (std::size_t j = i; j < d; ++j) {
      Valuation v = valuation(h(i, j), p);
      if (v < bv) {
        bv = v;
        best = j;
      }
    }
    if (best == d) throw DomainError("column_hermite: singular matrix");
    if (best != i)
      for (std::size_t r = 0; r < d; ++r) std::swap(h(r, i), h(r, best));
    Rational unit = h(i, i) / rat_pow(Rational(p), bv.value());
    for (std::size_t r = 0; r < d; ++r) h(r, i) /= unit;
    for (std::size_t j = i + 1; j < d; ++j) {
      if (h(i, j) == 0) continue;
      Rational f = h(i, j) / h(i, i);
      for (std::size_t r = 0; r < d; ++r) h(r, j) -= f * h(r, i);
    }
  }
  return h;
}

}  // namespace pcc
