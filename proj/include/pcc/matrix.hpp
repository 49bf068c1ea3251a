#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pcc/arith.hpp"

namespace pcc {

using RatVector = std::vector<Rational>;
using Residues = std::vector<std::int64_t>;

/// Dense row-major matrix of exact rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static RatMatrix identity(std::size_t n);
  static RatMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RatMatrix operator*(const RatMatrix& o) const;
  RatVector operator*(const RatVector& v) const;
  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

  RatMatrix transpose() const;
  RatMatrix select_rows(const std::vector<std::size_t>& idx) const;
  RatMatrix select_cols(std::size_t first, std::size_t count) const;
  RatMatrix hconcat(const RatMatrix& o) const;

  Rational determinant() const;
  std::size_t rank() const;
  /// Throws DomainError when singular.
  RatMatrix inverse() const;

  bool p_integral(long p) const;
  /// Minimum valuation over entries; infinite for the zero matrix.
  Valuation min_valuation(long p) const;
  /// Row indices of a d x d minor that is a p-adic unit, if one exists.
  std::optional<std::vector<std::size_t>> unit_minor(long p) const;
  /// Columns independent modulo p (for p-integral matrices).
  std::size_t rank_mod_p(long p) const;

  std::string str() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

RatVector scale(const RatVector& v, const Rational& c);
Valuation vector_valuation(const RatVector& v, long p);
Residues reduce_vector(const RatVector& v, long p, std::int64_t modulus);

/// Column operations over Z_(p) bringing a square p-integral matrix into lower
/// triangular form with diagonal entries p^{a_i}; the column lattice is preserved.
RatMatrix column_hermite(const RatMatrix& m, long p);

}  // namespace pcc
