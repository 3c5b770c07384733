#pragma once

// Exact dense linear algebra over prime fields GF(p), 2 <= p <= 97.
//
// Matrices are row-major value types. Every routine is a pure function of its
// inputs; Gaussian elimination always takes the first nonzero entry at or below
// the current row as pivot, so pivot choices (and everything derived from
// them) are deterministic.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relstab/error.hpp"

namespace relstab {

using Scalar = std::uint8_t;

// Largest supported row or column count.
inline constexpr std::size_t kMaxMatrixDim = 4096;

class FieldSpec {
 public:
  explicit FieldSpec(unsigned p);

  unsigned p() const noexcept { return p_; }

  Scalar reduce(long long v) const noexcept {
    long long r = v % static_cast<long long>(p_);
    return static_cast<Scalar>(r < 0 ? r + p_ : r);
  }
  Scalar add(Scalar a, Scalar b) const noexcept {
    unsigned s = unsigned(a) + b;
    return static_cast<Scalar>(s >= p_ ? s - p_ : s);
  }
  Scalar sub(Scalar a, Scalar b) const noexcept {
    return static_cast<Scalar>(a >= b ? a - b : a + p_ - b);
  }
  Scalar neg(Scalar a) const noexcept { return static_cast<Scalar>(a == 0 ? 0 : p_ - a); }
  Scalar mul(Scalar a, Scalar b) const noexcept {
    return static_cast<Scalar>((unsigned(a) * b) % p_);
  }
  Scalar inv(Scalar a) const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  unsigned p_;
};

class Matrix {
 public:
  // Zero matrix of the given shape.
  Matrix(FieldSpec field, std::size_t rows, std::size_t cols);

  static Matrix identity(FieldSpec field, std::size_t n);
  static Matrix from_rows(FieldSpec field,
                          std::initializer_list<std::initializer_list<long long>> rows);
  // Row-major values, reduced mod p.
  static Matrix from_values(FieldSpec field, std::size_t rows, std::size_t cols,
                            std::span<const long long> values);
  static Matrix column_vector(FieldSpec field, std::span<const Scalar> entries);

  FieldSpec field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Scalar operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  Scalar& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

  std::span<const Scalar> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<Scalar> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  const std::vector<Scalar>& data() const noexcept { return data_; }

  std::vector<Scalar> column(std::size_t c) const;
  Matrix transpose() const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
  Matrix select_columns(std::span<const std::size_t> cols) const;
  Matrix select_rows(std::span<const std::size_t> rows) const;
  Matrix scaled(Scalar c) const;

  bool is_zero() const noexcept;
  bool is_identity() const noexcept;
  bool is_square() const noexcept { return rows_ == cols_; }

  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.data_ == b.data_;
  }

  // Rows separated by ';', entries by ' '. Used in reports and error messages.
  std::string to_string() const;

 private:
  FieldSpec field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> data_;
};

Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
Matrix hstack(FieldSpec field, std::size_t rows, std::span<const Matrix> parts);

struct RrefResult {
  Matrix reduced;
  std::size_t rank;
  std::vector<std::size_t> pivots;
};

RrefResult rref(const Matrix& a);
std::size_t rank(const Matrix& a);

// Some X with A X = B, or nullopt when the system is inconsistent.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

// Columns form a basis of {x : A x = 0}, one per free column of rref(A).
Matrix kernel_basis(const Matrix& a);

std::optional<Matrix> inverse(const Matrix& a);

// (A (x) B)[i*B.rows + k, j*B.cols + l] = A[i,j] * B[k,l].
Matrix kron(const Matrix& a, const Matrix& b);
Matrix block_diag(const Matrix& a, const Matrix& b);

// The pivot columns of A: an independent subset spanning the column space.
Matrix column_basis(const Matrix& a);

// Indices j such that the columns of S together with e_j span the whole space.
std::vector<std::size_t> complement_coordinates(const Matrix& span_columns);

// L with L * A = I for A of full column rank.
Matrix left_inverse(const Matrix& a);

// Row-major flattening into a single column, and back.
std::vector<Scalar> flatten(const Matrix& a);
Matrix unflatten(FieldSpec field, std::size_t rows, std::size_t cols,
                 std::span<const Scalar> values);

// Incrementally maintained subspace of GF(p)^n in reduced echelon form. Not
// subject to the matrix dimension cap; used for span bookkeeping of long
// vectorised homomorphisms.
class Subspace {
 public:
  Subspace(FieldSpec field, std::size_t ambient);

  // Returns true when v was not already in the span.
  bool insert(std::span<const Scalar> v);
  bool contains(std::span<const Scalar> v) const;
  std::size_t dim() const noexcept { return basis_.size(); }
  std::size_t ambient() const noexcept { return ambient_; }
  FieldSpec field() const noexcept { return field_; }

  // Basis vectors in echelon form (pivot positions increasing).
  const std::vector<std::vector<Scalar>>& basis() const noexcept { return basis_; }
  // Pivot position of each basis vector.
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

 private:
  std::vector<Scalar> reduce(std::span<const Scalar> v) const;

  FieldSpec field_;
  std::size_t ambient_;
  std::vector<std::vector<Scalar>> basis_;
  std::vector<std::size_t> pivots_;
};

// Columns spanning {x : v . x = 0 for every v in rows}.
Matrix kernel_of_rows(const Subspace& rows);

}  // namespace relstab
