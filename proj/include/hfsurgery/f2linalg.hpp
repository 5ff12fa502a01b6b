#pragma once

// Dense bit-packed linear algebra over the two-element field.
//
// Matrices are stored row-major, one run of 64-bit words per row. Entry
// (i, j) is the coefficient of target basis element i in the image of source
// basis element j, so a matrix with `rows` rows and `cols` columns is a map
// from a `cols`-dimensional space to a `rows`-dimensional one. Addition is
// XOR and multiplication is AND. Zero-row and zero-column matrices are legal
// and behave as the zero map.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hfs {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BitMatrix {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitMatrix() = default;

  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * stride_, 0) {}

  static BitMatrix zero(std::size_t rows, std::size_t cols) { return BitMatrix(rows, cols); }

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  // Builds a matrix from 0/1 rows. `cols` is needed only when there are no
  // rows to infer it from.
  static BitMatrix from_rows(const std::vector<std::vector<int>>& rows, std::size_t cols = 0) {
    if (!rows.empty()) cols = rows.front().size();
    BitMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) {
        throw DimensionError("BitMatrix::from_rows: row " + std::to_string(i) + " has " +
                             std::to_string(rows[i].size()) + " entries, expected " +
                             std::to_string(cols));
      }
      for (std::size_t j = 0; j < cols; ++j) {
        if (rows[i][j] != 0 && rows[i][j] != 1) {
          throw DimensionError("BitMatrix::from_rows: entry (" + std::to_string(i) + "," +
                               std::to_string(j) + ") is not 0 or 1");
        }
        if (rows[i][j]) m.set(i, j);
      }
    }
    return m;
  }

  static BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    std::vector<std::vector<int>> v;
    for (const auto& r : rows) v.emplace_back(r);
    return from_rows(v);
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  bool get(std::size_t r, std::size_t c) const {
    return (data_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool v = true) {
    Word& w = data_[r * stride_ + c / kWordBits];
    const Word bit = Word{1} << (c % kWordBits);
    w = v ? (w | bit) : (w & ~bit);
  }
  void flip(std::size_t r, std::size_t c) {
    data_[r * stride_ + c / kWordBits] ^= Word{1} << (c % kWordBits);
  }

  std::span<const Word> row_words(std::size_t r) const {
    return {data_.data() + r * stride_, stride_};
  }
  std::span<Word> row_words(std::size_t r) { return {data_.data() + r * stride_, stride_}; }

  // row[dst] ^= row[src]
  void xor_row(std::size_t dst, std::size_t src) {
    Word* d = data_.data() + dst * stride_;
    const Word* s = data_.data() + src * stride_;
    for (std::size_t w = 0; w < stride_; ++w) d[w] ^= s[w];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * stride_),
                     data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * stride_),
                     data_.begin() + static_cast<std::ptrdiff_t>(b * stride_));
  }

  bool row_is_zero(std::size_t r) const {
    for (Word w : row_words(r))
      if (w) return false;
    return true;
  }

  std::size_t count_ones() const {
    std::size_t n = 0;
    for (Word w : data_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  BitMatrix transpose() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for_each_set_bit(r, [&](std::size_t c) { t.set(c, r); });
    return t;
  }

  // Adds `block` into this matrix with its top-left corner at (r0, c0).
  void add_block(std::size_t r0, std::size_t c0, const BitMatrix& block) {
    if (r0 + block.rows_ > rows_ || c0 + block.cols_ > cols_) {
      throw DimensionError("BitMatrix::add_block: block does not fit");
    }
    for (std::size_t r = 0; r < block.rows_; ++r)
      block.for_each_set_bit(r, [&](std::size_t c) { flip(r0 + r, c0 + c); });
  }

  BitMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("BitMatrix::block: out of range");
    BitMatrix b(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c)
        if (get(r0 + r, c0 + c)) b.set(r, c);
    return b;
  }

  BitMatrix select(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const {
    BitMatrix b(row_idx.size(), col_idx.size());
    for (std::size_t r = 0; r < row_idx.size(); ++r)
      for (std::size_t c = 0; c < col_idx.size(); ++c)
        if (get(row_idx[r], col_idx[c])) b.set(r, c);
    return b;
  }

  std::vector<std::vector<int>> to_rows() const {
    std::vector<std::vector<int>> out(rows_, std::vector<int>(cols_, 0));
    for (std::size_t r = 0; r < rows_; ++r)
      for_each_set_bit(r, [&](std::size_t c) { out[r][c] = 1; });
    return out;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t r = 0; r < rows_; ++r) {
      os << (r ? ",[" : "[");
      for (std::size_t c = 0; c < cols_; ++c) os << (c ? "," : "") << (get(r, c) ? 1 : 0);
      os << ']';
    }
    os << ']';
    return os.str();
  }

  template <typename F>
  void for_each_set_bit(std::size_t r, F&& f) const {
    const Word* p = data_.data() + r * stride_;
    for (std::size_t w = 0; w < stride_; ++w) {
      Word bits = p[w];
      while (bits) {
        f(w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  friend bool operator==(const BitMatrix& a, const BitMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  static std::size_t words_for(std::size_t cols) { return (cols + kWordBits - 1) / kWordBits; }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> data_;
};

inline std::string shape_string(const BitMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

inline BitMatrix multiply(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("multiply: shapes " + shape_string(a) + " and " + shape_string(b) +
                         " are not composable");
  }
  BitMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = c.row_words(i);
    a.for_each_set_bit(i, [&](std::size_t k) {
      auto src = b.row_words(k);
      for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
    });
  }
  return c;
}

inline BitMatrix add(const BitMatrix& a, const BitMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("add: shapes " + shape_string(a) + " and " + shape_string(b) + " differ");
  }
  BitMatrix c = a;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = c.row_words(r);
    auto src = b.row_words(r);
    for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
  }
  return c;
}

inline bool is_zero(const BitMatrix& a) {
  for (std::size_t r = 0; r < a.rows(); ++r)
    if (!a.row_is_zero(r)) return false;
  return true;
}

// Kronecker product; row (i*p + k), column (j*q + l) holds a(i,j)*b(k,l).
inline BitMatrix kronecker(const BitMatrix& a, const BitMatrix& b) {
  BitMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    a.for_each_set_bit(i, [&](std::size_t j) { out.add_block(i * b.rows(), j * b.cols(), b); });
  return out;
}

inline BitMatrix hstack(const BitMatrix& a, const BitMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("hstack: row counts differ");
  BitMatrix out(a.rows(), a.cols() + b.cols());
  out.add_block(0, 0, a);
  out.add_block(0, a.cols(), b);
  return out;
}

struct RrefResult {
  BitMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of row i, for i < rank
  BitMatrix transform;              // transform * m == reduced
};

// Gauss-Jordan elimination. Pivots are chosen in the leftmost column that has
// one, using the topmost available row.
inline RrefResult rref(const BitMatrix& m) {
  RrefResult res{m, {}, BitMatrix::identity(m.rows())};
  BitMatrix& r = res.reduced;
  BitMatrix& t = res.transform;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < r.cols() && pivot_row < r.rows(); ++col) {
    std::size_t found = pivot_row;
    while (found < r.rows() && !r.get(found, col)) ++found;
    if (found == r.rows()) continue;
    r.swap_rows(found, pivot_row);
    t.swap_rows(found, pivot_row);
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (i != pivot_row && r.get(i, col)) {
        r.xor_row(i, pivot_row);
        t.xor_row(i, pivot_row);
      }
    }
    res.pivots.push_back(col);
    ++pivot_row;
  }
  return res;
}

inline std::size_t rank(const BitMatrix& m) {
  BitMatrix r = m;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < r.cols() && pivot_row < r.rows(); ++col) {
    std::size_t found = pivot_row;
    while (found < r.rows() && !r.get(found, col)) ++found;
    if (found == r.rows()) continue;
    r.swap_rows(found, pivot_row);
    for (std::size_t i = pivot_row + 1; i < r.rows(); ++i)
      if (r.get(i, col)) r.xor_row(i, pivot_row);
    ++pivot_row;
  }
  return pivot_row;
}

// Columns of the result form a basis of ker m, one per free column of rref(m).
inline BitMatrix kernel_basis(const BitMatrix& m) {
  const RrefResult rr = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : rr.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);

  BitMatrix basis(m.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const std::size_t f = free_cols[k];
    basis.set(f, k);
    for (std::size_t i = 0; i < rr.pivots.size(); ++i)
      if (rr.reduced.get(i, f)) basis.set(rr.pivots[i], k);
  }
  return basis;
}

inline bool column_space_equal(const BitMatrix& a, const BitMatrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("column_space_equal: ambient dimensions " + std::to_string(a.rows()) +
                         " and " + std::to_string(b.rows()) + " differ");
  }
  const std::size_t ra = rank(a);
  return ra == rank(b) && ra == rank(hstack(a, b));
}

// Returns the inverse of a square invertible matrix; throws otherwise.
inline BitMatrix inverse(const BitMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("inverse: matrix is not square");
  RrefResult rr = rref(m);
  if (rr.pivots.size() != m.rows()) throw DimensionError("inverse: matrix is singular");
  return std::move(rr.transform);
}

}  // namespace hfs
