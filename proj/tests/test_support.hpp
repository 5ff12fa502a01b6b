#pragma once

// Test-only oracles and generators. Nothing here calls into the
// elimination code it is used to check.

#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "hfsurgery/chain.hpp"
#include "hfsurgery/f2linalg.hpp"
#include "hfsurgery/knotsys.hpp"

namespace hfs::testing {

using Dense = std::vector<std::vector<int>>;

// Plain Gaussian elimination on an int matrix, one entry at a time.
inline std::size_t naive_rank(Dense a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (a[i][c] % 2) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i != r && a[i][c] % 2) {
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = (a[i][j] + a[r][j]) % 2;
      }
    }
    ++r;
  }
  return r;
}

inline Dense naive_multiply(const Dense& a, const Dense& b, std::size_t b_cols) {
  Dense c(a.size(), std::vector<int>(b_cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b_cols; ++j) c[i][j] ^= a[i][k] & b[k][j];
  return c;
}

inline BitMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, unsigned density_pct = 50) {
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (rng() % 100 < density_pct) m.set(r, c);
  return m;
}

// Invertible matrix as a product of random elementary row additions.
inline BitMatrix random_invertible(std::mt19937_64& rng, std::size_t n) {
  BitMatrix m = BitMatrix::identity(n);
  if (n < 2) return m;
  for (std::size_t step = 0; step < 4 * n; ++step) {
    const std::size_t a = rng() % n, b = rng() % n;
    if (a != b) m.xor_row(a, b);
  }
  for (std::size_t step = 0; step < n; ++step) m.swap_rows(rng() % n, rng() % n);
  return m;
}

// Unpacked Gauss-Jordan on [m | I]; m must be invertible.
inline BitMatrix naive_inverse(const BitMatrix& m) {
  const std::size_t n = m.rows();
  Dense a = m.to_rows();
  for (std::size_t i = 0; i < n; ++i) {
    a[i].resize(2 * n, 0);
    a[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (!a[piv][c]) ++piv;
    std::swap(a[piv], a[c]);
    for (std::size_t i = 0; i < n; ++i)
      if (i != c && a[i][c])
        for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] ^= a[c][j];
  }
  BitMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a[i][n + j]) inv.set(i, j);
  return inv;
}

struct KnownGraded {
  ChainComplex complex;
  std::map<Grade, std::size_t> homology;
};

// Direct sum of acyclic pairs and free generators in grades 0..top, hidden by
// a random change of basis in every grade. Homology is known by construction.
inline KnownGraded random_graded_complex(std::uint64_t seed, std::size_t max_generators = 40) {
  std::mt19937_64 rng(seed);
  const int top = static_cast<int>(rng() % 4) + 1;
  std::map<Grade, std::size_t> pairs, free;
  std::size_t budget = max_generators;
  for (Grade k = 0; k <= top; ++k) {
    free[k] = budget ? rng() % std::min<std::size_t>(budget, 5) : 0;
    budget -= free[k];
  }
  for (Grade k = 1; k <= top; ++k) {
    pairs[k] = budget >= 2 ? rng() % (std::min<std::size_t>(budget, 12) / 2 + 1) : 0;
    budget -= 2 * pairs[k];
  }
  std::map<Grade, std::size_t> dims;
  for (Grade k = 0; k <= top; ++k) dims[k] = free[k] + pairs[k] + pairs[k + 1];

  // Grade k basis: [targets of d_{k+1} | sources of d_k | free].
  std::map<Grade, BitMatrix> change, inv;
  for (Grade k = 0; k <= top; ++k) {
    change[k] = random_invertible(rng, dims[k]);
    inv[k] = naive_inverse(change[k]);
  }
  std::map<Grade, BitMatrix> diffs;
  for (Grade k = 1; k <= top; ++k) {
    BitMatrix d(dims[k - 1], dims[k]);
    for (std::size_t i = 0; i < pairs[k]; ++i) d.set(i, pairs[k + 1] + i);
    diffs[k] = multiply(change[k - 1], multiply(d, inv[k]));
  }
  return {ChainComplex(GradedSpace::with_dims(dims), std::move(diffs)), free};
}

struct KnownUngraded {
  UngradedComplex complex;
  std::size_t homology;
};

inline KnownUngraded random_ungraded_complex(std::uint64_t seed, std::size_t max_generators = 40) {
  std::mt19937_64 rng(seed);
  const std::size_t n = rng() % (max_generators + 1);
  const std::size_t pairs = n ? rng() % (n / 2 + 1) : 0;
  BitMatrix d(n, n);
  for (std::size_t i = 0; i < pairs; ++i) d.set(2 * i + 1, 2 * i);
  const BitMatrix b = random_invertible(rng, n);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("u" + std::to_string(i));
  return {UngradedComplex(std::move(labels), multiply(b, multiply(d, naive_inverse(b)))), n - 2 * pairs};
}

// Zero-differential graded complex with the given dims in grade 0.
inline ChainComplex flat_space(std::size_t n, const std::string& prefix) {
  return ChainComplex(GradedSpace::with_dims({{0, n}}, prefix));
}

// Validated homology-level knot systems with every dimension <= max_dim;
// infeasible dimension triples are redrawn.
inline std::vector<KnotSystem> knot_corpus(std::size_t count, std::size_t max_dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<KnotSystem> out;
  while (out.size() < count) {
    const KnotDims d{rng() % (max_dim + 1), rng() % (max_dim + 1), rng() % (max_dim + 1)};
    try {
      forced_rank(d);
    } catch (const std::invalid_argument&) {
      continue;
    }
    out.push_back(random_valid(rng(), d));
  }
  return out;
}

}  // namespace hfs::testing
