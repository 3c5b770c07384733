#include "relstab/linalg.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace relstab {

namespace {

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void check_shape(std::size_t rows, std::size_t cols) {
  if (rows > kMaxMatrixDim || cols > kMaxMatrixDim)
    throw DimensionError("matrix " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " exceeds the supported size " + std::to_string(kMaxMatrixDim));
}

void check_same_field(const Matrix& a, const Matrix& b, const char* what) {
  if (a.field() != b.field())
    throw DimensionError(std::string(what) + ": field mismatch (GF(" +
                         std::to_string(a.field().p()) + ") vs GF(" +
                         std::to_string(b.field().p()) + "))");
}

// In-place reduced row echelon form over GF(2) on bit-packed rows.
std::vector<std::size_t> rref_gf2(std::vector<Scalar>& data, std::size_t rows, std::size_t cols) {
  const std::size_t words = (cols + 63) / 64;
  std::vector<std::uint64_t> bits(rows * words, 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (data[r * cols + c]) bits[r * words + c / 64] |= std::uint64_t{1} << (c % 64);

  std::vector<std::size_t> pivots;
  std::size_t prow = 0;
  for (std::size_t c = 0; c < cols && prow < rows; ++c) {
    const std::size_t w = c / 64;
    const std::uint64_t mask = std::uint64_t{1} << (c % 64);
    std::size_t sel = rows;
    for (std::size_t r = prow; r < rows; ++r)
      if (bits[r * words + w] & mask) {
        sel = r;
        break;
      }
    if (sel == rows) continue;
    if (sel != prow)
      std::swap_ranges(bits.begin() + sel * words, bits.begin() + (sel + 1) * words,
                       bits.begin() + prow * words);
    const std::uint64_t* prow_bits = bits.data() + prow * words;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == prow) continue;
      std::uint64_t* row_bits = bits.data() + r * words;
      if (row_bits[w] & mask)
        for (std::size_t k = w; k < words; ++k) row_bits[k] ^= prow_bits[k];
    }
    pivots.push_back(c);
    ++prow;
  }
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      data[r * cols + c] = (bits[r * words + c / 64] >> (c % 64)) & 1u;
  return pivots;
}

std::vector<std::size_t> rref_generic(FieldSpec f, std::vector<Scalar>& data, std::size_t rows,
                                      std::size_t cols) {
  const unsigned p = f.p();
  std::vector<std::size_t> pivots;
  std::size_t prow = 0;
  for (std::size_t c = 0; c < cols && prow < rows; ++c) {
    std::size_t sel = rows;
    for (std::size_t r = prow; r < rows; ++r)
      if (data[r * cols + c] != 0) {
        sel = r;
        break;
      }
    if (sel == rows) continue;
    if (sel != prow)
      std::swap_ranges(data.begin() + sel * cols, data.begin() + (sel + 1) * cols,
                       data.begin() + prow * cols);
    Scalar* pr = data.data() + prow * cols;
    const Scalar s = f.inv(pr[c]);
    for (std::size_t k = c; k < cols; ++k) pr[k] = f.mul(pr[k], s);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == prow) continue;
      Scalar* row = data.data() + r * cols;
      const Scalar factor = row[c];
      if (factor == 0) continue;
      const unsigned m = p - factor;
      for (std::size_t k = c; k < cols; ++k)
        if (pr[k]) row[k] = static_cast<Scalar>((row[k] + m * pr[k]) % p);
    }
    pivots.push_back(c);
    ++prow;
  }
  return pivots;
}

std::vector<std::size_t> rref_in_place(FieldSpec f, std::vector<Scalar>& data, std::size_t rows,
                                       std::size_t cols) {
  if (f.p() == 2) return rref_gf2(data, rows, cols);
  return rref_generic(f, data, rows, cols);
}

}  // namespace

FieldSpec::FieldSpec(unsigned p) : p_(p) {
  if (p < 2 || p > 97 || !is_prime(p))
    throw DimensionError("field characteristic must be a prime in [2, 97], got " +
                         std::to_string(p));
}

Scalar FieldSpec::inv(Scalar a) const {
  if (a % p_ == 0) throw DimensionError("division by zero in GF(" + std::to_string(p_) + ")");
  // a^(p-2) by square-and-multiply.
  unsigned result = 1, base = a % p_, e = p_ - 2;
  while (e) {
    if (e & 1u) result = result * base % p_;
    base = base * base % p_;
    e >>= 1u;
  }
  return static_cast<Scalar>(result);
}

Matrix::Matrix(FieldSpec field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols) {
  check_shape(rows, cols);
  data_.assign(rows * cols, 0);
}

Matrix Matrix::identity(FieldSpec field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(FieldSpec field,
                         std::initializer_list<std::initializer_list<long long>> rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr ? rows.begin()->size() : 0;
  Matrix m(field, nr, nc);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != nc) throw DimensionError("from_rows: ragged row lengths");
    std::size_t c = 0;
    for (long long v : row) m(r, c++) = field.reduce(v);
    ++r;
  }
  return m;
}

Matrix Matrix::from_values(FieldSpec field, std::size_t rows, std::size_t cols,
                           std::span<const long long> values) {
  if (values.size() != rows * cols)
    throw DimensionError("from_values: expected " + std::to_string(rows * cols) +
                         " entries, got " + std::to_string(values.size()));
  Matrix m(field, rows, cols);
  for (std::size_t i = 0; i < values.size(); ++i) m.data_[i] = field.reduce(values[i]);
  return m;
}

Matrix Matrix::column_vector(FieldSpec field, std::span<const Scalar> entries) {
  Matrix m(field, entries.size(), 1);
  std::copy(entries.begin(), entries.end(), m.data_.begin());
  return m;
}

std::vector<Scalar> Matrix::column(std::size_t c) const {
  std::vector<Scalar> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("block: out of range");
  Matrix b(field_, nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    std::copy_n(data_.begin() + (r0 + r) * cols_ + c0, nc, b.data_.begin() + r * nc);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DimensionError("set_block: out of range");
  check_same_field(*this, b, "set_block");
  for (std::size_t r = 0; r < b.rows_; ++r)
    std::copy_n(b.data_.begin() + r * b.cols_, b.cols_, data_.begin() + (r0 + r) * cols_ + c0);
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
  Matrix m(field_, rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < cols.size(); ++j) m(r, j) = (*this)(r, cols[j]);
  return m;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix m(field_, rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy_n(data_.begin() + rows[i] * cols_, cols_, m.data_.begin() + i * cols_);
  return m;
}

Matrix Matrix::scaled(Scalar c) const {
  Matrix m = *this;
  for (auto& v : m.data_) v = field_.mul(v, c);
  return m;
}

bool Matrix::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](Scalar v) { return v == 0; });
}

bool Matrix::is_identity() const noexcept {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if ((*this)(r, c) != (r == c ? 1 : 0)) return false;
  return true;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  check_same_field(*this, rhs, "multiply");
  if (cols_ != rhs.rows_)
    throw DimensionError("multiply: shape " + std::to_string(rows_) + "x" +
                         std::to_string(cols_) + " times " + std::to_string(rhs.rows_) + "x" +
                         std::to_string(rhs.cols_));
  const unsigned p = field_.p();
  Matrix out(field_, rows_, rhs.cols_);
  if (p == 2 && rhs.cols_ >= 32) {
    const std::size_t words = (rhs.cols_ + 63) / 64;
    std::vector<std::uint64_t> b(rhs.rows_ * words, 0), acc(words);
    for (std::size_t k = 0; k < rhs.rows_; ++k)
      for (std::size_t j = 0; j < rhs.cols_; ++j)
        if (rhs.data_[k * rhs.cols_ + j]) b[k * words + j / 64] |= std::uint64_t{1} << (j % 64);
    for (std::size_t i = 0; i < rows_; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      for (std::size_t k = 0; k < cols_; ++k)
        if (data_[i * cols_ + k])
          for (std::size_t w = 0; w < words; ++w) acc[w] ^= b[k * words + w];
      Scalar* orow = out.data_.data() + i * rhs.cols_;
      for (std::size_t j = 0; j < rhs.cols_; ++j) orow[j] = (acc[j / 64] >> (j % 64)) & 1u;
    }
    return out;
  }
  std::vector<std::uint32_t> acc(rhs.cols_);
  // Entries are < 97, so 4096 products of them fit comfortably in 32 bits.
  for (std::size_t i = 0; i < rows_; ++i) {
    std::fill(acc.begin(), acc.end(), 0u);
    for (std::size_t k = 0; k < cols_; ++k) {
      const std::uint32_t a = data_[i * cols_ + k];
      if (!a) continue;
      const Scalar* brow = rhs.data_.data() + k * rhs.cols_;
      for (std::size_t j = 0; j < rhs.cols_; ++j) acc[j] += a * brow[j];
    }
    Scalar* orow = out.data_.data() + i * rhs.cols_;
    for (std::size_t j = 0; j < rhs.cols_; ++j) orow[j] = static_cast<Scalar>(acc[j] % p);
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  check_same_field(*this, rhs, "add");
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("add: shape mismatch");
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_.add(data_[i], rhs.data_[i]);
  return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
  check_same_field(*this, rhs, "subtract");
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("subtract: shape mismatch");
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_.sub(data_[i], rhs.data_[i]);
  return out;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r) os << "; ";
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c) os << ' ';
      os << unsigned((*this)(r, c));
    }
  }
  return os.str();
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  check_same_field(a, b, "hstack");
  if (a.rows() != b.rows()) throw DimensionError("hstack: row counts differ");
  Matrix m(a.field(), a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  check_same_field(a, b, "vstack");
  if (a.cols() != b.cols()) throw DimensionError("vstack: column counts differ");
  Matrix m(a.field(), a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

Matrix hstack(FieldSpec field, std::size_t rows, std::span<const Matrix> parts) {
  std::size_t total = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw DimensionError("hstack: row counts differ");
    total += p.cols();
  }
  Matrix m(field, rows, total);
  std::size_t c = 0;
  for (const auto& p : parts) {
    m.set_block(0, c, p);
    c += p.cols();
  }
  return m;
}

RrefResult rref(const Matrix& a) {
  Matrix r = a;
  std::vector<Scalar> data = r.data();
  auto pivots = rref_in_place(a.field(), data, a.rows(), a.cols());
  Matrix reduced(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    std::copy_n(data.begin() + i * a.cols(), a.cols(), reduced.row(i).begin());
  const std::size_t rk = pivots.size();
  return {std::move(reduced), rk, std::move(pivots)};
}

std::size_t rank(const Matrix& a) {
  std::vector<Scalar> data = a.data();
  return rref_in_place(a.field(), data, a.rows(), a.cols()).size();
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  check_same_field(a, b, "solve");
  if (a.rows() != b.rows())
    throw DimensionError("solve: A has " + std::to_string(a.rows()) + " rows, B has " +
                         std::to_string(b.rows()));
  const auto res = rref(hstack(a, b));
  Matrix x(a.field(), a.cols(), b.cols());
  for (std::size_t i = 0; i < res.rank; ++i) {
    const std::size_t pc = res.pivots[i];
    if (pc >= a.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(pc, j) = res.reduced(i, a.cols() + j);
  }
  return x;
}

Matrix kernel_basis(const Matrix& a) {
  const auto res = rref(a);
  const FieldSpec f = a.field();
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto pc : res.pivots) is_pivot[pc] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix k(f, a.cols(), free_cols.size());
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    const std::size_t fc = free_cols[j];
    k(fc, j) = 1;
    for (std::size_t i = 0; i < res.rank; ++i) k(res.pivots[i], j) = f.neg(res.reduced(i, fc));
  }
  return k;
}

std::optional<Matrix> inverse(const Matrix& a) {
  if (!a.is_square()) throw DimensionError("inverse: matrix is not square");
  const std::size_t n = a.rows();
  const auto res = rref(hstack(a, Matrix::identity(a.field(), n)));
  if (res.rank < n || (n > 0 && res.pivots[n - 1] >= n)) return std::nullopt;
  return res.reduced.block(0, n, n, n);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  check_same_field(a, b, "kron");
  Matrix out(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
  const FieldSpec f = a.field();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Scalar s = a(i, j);
      if (!s) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = f.mul(s, b(k, l));
    }
  return out;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  check_same_field(a, b, "block_diag");
  Matrix out(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), a.cols(), b);
  return out;
}

Matrix column_basis(const Matrix& a) { return a.select_columns(rref(a).pivots); }

std::vector<std::size_t> complement_coordinates(const Matrix& span_columns) {
  const std::size_t n = span_columns.rows();
  const auto res = rref(hstack(span_columns, Matrix::identity(span_columns.field(), n)));
  std::vector<std::size_t> out;
  for (auto pc : res.pivots)
    if (pc >= span_columns.cols()) out.push_back(pc - span_columns.cols());
  return out;
}

Matrix left_inverse(const Matrix& a) {
  // Solve A^T L^T = I; a solution exists exactly when A has full column rank.
  auto lt = solve(a.transpose(), Matrix::identity(a.field(), a.cols()));
  if (!lt) throw DimensionError("left_inverse: matrix does not have full column rank");
  return lt->transpose();
}

std::vector<Scalar> flatten(const Matrix& a) { return a.data(); }

Matrix unflatten(FieldSpec field, std::size_t rows, std::size_t cols,
                 std::span<const Scalar> values) {
  if (values.size() != rows * cols) throw DimensionError("unflatten: size mismatch");
  Matrix m(field, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    std::copy_n(values.begin() + r * cols, cols, m.row(r).begin());
  return m;
}

Subspace::Subspace(FieldSpec field, std::size_t ambient) : field_(field), ambient_(ambient) {}

std::vector<Scalar> Subspace::reduce(std::span<const Scalar> v) const {
  if (v.size() != ambient_) throw DimensionError("Subspace: vector length mismatch");
  std::vector<Scalar> w(v.begin(), v.end());
  const unsigned p = field_.p();
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const Scalar c = w[pivots_[i]];
    if (!c) continue;
    const unsigned m = p - c;
    const auto& b = basis_[i];
    for (std::size_t k = pivots_[i]; k < ambient_; ++k)
      if (b[k]) w[k] = static_cast<Scalar>((w[k] + m * b[k]) % p);
  }
  return w;
}

bool Subspace::contains(std::span<const Scalar> v) const {
  const auto w = reduce(v);
  return std::all_of(w.begin(), w.end(), [](Scalar s) { return s == 0; });
}

bool Subspace::insert(std::span<const Scalar> v) {
  auto w = reduce(v);
  std::size_t piv = ambient_;
  for (std::size_t k = 0; k < ambient_; ++k)
    if (w[k]) {
      piv = k;
      break;
    }
  if (piv == ambient_) return false;
  const Scalar s = field_.inv(w[piv]);
  for (std::size_t k = piv; k < ambient_; ++k) w[k] = field_.mul(w[k], s);
  const unsigned p = field_.p();
  for (auto& b : basis_) {
    const Scalar c = b[piv];
    if (!c) continue;
    const unsigned m = p - c;
    for (std::size_t k = piv; k < ambient_; ++k)
      if (w[k]) b[k] = static_cast<Scalar>((b[k] + m * w[k]) % p);
  }
  const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv) - pivots_.begin();
  pivots_.insert(pivots_.begin() + pos, piv);
  basis_.insert(basis_.begin() + pos, std::move(w));
  return true;
}

Matrix kernel_of_rows(const Subspace& rows) {
  const FieldSpec f = rows.field();
  const std::size_t n = rows.ambient();
  const auto& basis = rows.basis();
  std::vector<bool> is_pivot(n, false);
  std::vector<std::size_t> pivots;
  for (const auto& b : basis) {
    const auto it = std::find_if(b.begin(), b.end(), [](Scalar s) { return s != 0; });
    pivots.push_back(static_cast<std::size_t>(it - b.begin()));
    is_pivot[pivots.back()] = true;
  }
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix k(f, n, free_cols.size());
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    const std::size_t fc = free_cols[j];
    k(fc, j) = 1;
    for (std::size_t i = 0; i < basis.size(); ++i) k(pivots[i], j) = f.neg(basis[i][fc]);
  }
  return k;
}

}  // namespace relstab
