#pragma once

// Finite chain complexes over GF(2).
//
// Two kinds are provided. ChainComplex is graded, with d_k mapping grade k to
// grade k-1 (shape dim(k-1) x dim(k)). UngradedComplex is a single space with
// an endomorphism D satisfying D*D = 0; it carries complexes whose
// differential mixes summands and preserves no integer grading.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hfsurgery/f2linalg.hpp"

namespace hfs {

using Grade = int;

class InvalidComplexError : public std::runtime_error {
 public:
  InvalidComplexError(const std::string& what, std::string witness)
      : std::runtime_error(what), witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

class IllegalCancellationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_unique(const std::vector<std::string>& labels, const char* where) {
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw std::invalid_argument(std::string(where) + ": duplicate basis label '" + l + "'");
    }
  }
}

// Concatenates label lists, prefixing each part with its tag only if the
// plain concatenation would repeat a label.
inline std::vector<std::vector<std::string>> disjoint_labels(
    const std::vector<std::vector<std::string>>& parts, const std::vector<std::string>& tags) {
  std::set<std::string> seen;
  bool clash = false;
  for (const auto& part : parts)
    for (const auto& l : part) clash = clash || !seen.insert(l).second;
  if (!clash) return parts;
  std::vector<std::vector<std::string>> out = parts;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (auto& l : out[i]) l = tags[i] + "." + l;
  return out;
}

}  // namespace detail

class GradedSpace {
 public:
  GradedSpace() = default;

  explicit GradedSpace(std::map<Grade, std::vector<std::string>> labels) : labels_(std::move(labels)) {
    std::vector<std::string> all;
    for (const auto& [k, ls] : labels_) all.insert(all.end(), ls.begin(), ls.end());
    detail::require_unique(all, "GradedSpace");
  }

  // Space with generated labels "<prefix><grade>_<index>".
  static GradedSpace with_dims(const std::map<Grade, std::size_t>& dims, const std::string& prefix = "g") {
    std::map<Grade, std::vector<std::string>> labels;
    for (const auto& [k, n] : dims) {
      auto& ls = labels[k];
      for (std::size_t i = 0; i < n; ++i)
        ls.push_back(prefix + std::to_string(k) + "_" + std::to_string(i));
    }
    return GradedSpace(std::move(labels));
  }

  std::size_t dim(Grade k) const {
    auto it = labels_.find(k);
    return it == labels_.end() ? 0 : it->second.size();
  }

  std::size_t total_dim() const {
    std::size_t n = 0;
    for (const auto& [k, ls] : labels_) n += ls.size();
    return n;
  }

  std::vector<Grade> grades() const {
    std::vector<Grade> g;
    for (const auto& [k, ls] : labels_) g.push_back(k);
    return g;
  }

  std::map<Grade, std::size_t> dims() const {
    std::map<Grade, std::size_t> d;
    for (const auto& [k, ls] : labels_) d[k] = ls.size();
    return d;
  }

  const std::vector<std::string>& labels(Grade k) const {
    static const std::vector<std::string> kEmpty;
    auto it = labels_.find(k);
    return it == labels_.end() ? kEmpty : it->second;
  }

  const std::map<Grade, std::vector<std::string>>& all_labels() const { return labels_; }

  friend bool operator==(const GradedSpace&, const GradedSpace&) = default;

 private:
  std::map<Grade, std::vector<std::string>> labels_;
};

class ChainComplex {
 public:
  ChainComplex() = default;

  ChainComplex(GradedSpace space, std::map<Grade, BitMatrix> differentials)
      : space_(std::move(space)), diffs_(std::move(differentials)) {
    for (const auto& [k, d] : diffs_) {
      if (d.rows() != space_.dim(k - 1) || d.cols() != space_.dim(k)) {
        throw DimensionError("ChainComplex: d_" + std::to_string(k) + " has shape " + shape_string(d) +
                             ", expected " + std::to_string(space_.dim(k - 1)) + "x" +
                             std::to_string(space_.dim(k)));
      }
    }
  }

  // Complex with zero differential.
  explicit ChainComplex(GradedSpace space) : space_(std::move(space)) {}

  const GradedSpace& space() const { return space_; }
  std::size_t dim(Grade k) const { return space_.dim(k); }
  std::size_t total_dim() const { return space_.total_dim(); }
  std::vector<Grade> grades() const { return space_.grades(); }

  // d_k : grade k -> grade k-1; the zero map when not stored.
  BitMatrix differential(Grade k) const {
    auto it = diffs_.find(k);
    return it == diffs_.end() ? BitMatrix(space_.dim(k - 1), space_.dim(k)) : it->second;
  }

  const std::map<Grade, BitMatrix>& stored_differentials() const { return diffs_; }

  friend bool operator==(const ChainComplex& a, const ChainComplex& b) {
    if (!(a.space_ == b.space_)) return false;
    std::set<Grade> ks;
    for (const auto& [k, d] : a.diffs_) ks.insert(k);
    for (const auto& [k, d] : b.diffs_) ks.insert(k);
    for (Grade k : ks)
      if (!(a.differential(k) == b.differential(k))) return false;
    return true;
  }

 private:
  GradedSpace space_;
  std::map<Grade, BitMatrix> diffs_;
};

// Degree-`shift` map: blocks[k] sends source grade k to target grade k+shift.
class ChainMap {
 public:
  ChainMap() = default;

  ChainMap(ChainComplex source, ChainComplex target, int shift, std::map<Grade, BitMatrix> blocks)
      : source_(std::move(source)), target_(std::move(target)), shift_(shift), blocks_(std::move(blocks)) {
    for (const auto& [k, f] : blocks_) {
      if (f.rows() != target_.dim(k + shift_) || f.cols() != source_.dim(k)) {
        throw DimensionError("ChainMap: block at grade " + std::to_string(k) + " has shape " +
                             shape_string(f) + ", expected " + std::to_string(target_.dim(k + shift_)) +
                             "x" + std::to_string(source_.dim(k)));
      }
    }
  }

  const ChainComplex& source() const { return source_; }
  const ChainComplex& target() const { return target_; }
  int shift() const { return shift_; }

  BitMatrix block(Grade k) const {
    auto it = blocks_.find(k);
    return it == blocks_.end() ? BitMatrix(target_.dim(k + shift_), source_.dim(k)) : it->second;
  }

 private:
  ChainComplex source_;
  ChainComplex target_;
  int shift_ = 0;
  std::map<Grade, BitMatrix> blocks_;
};

class UngradedComplex {
 public:
  UngradedComplex() = default;

  UngradedComplex(std::vector<std::string> labels, BitMatrix d) : labels_(std::move(labels)), d_(std::move(d)) {
    if (d_.rows() != labels_.size() || d_.cols() != labels_.size()) {
      throw DimensionError("UngradedComplex: differential has shape " + shape_string(d_) + " for " +
                           std::to_string(labels_.size()) + " generators");
    }
    detail::require_unique(labels_, "UngradedComplex");
  }

  explicit UngradedComplex(std::vector<std::string> labels)
      : UngradedComplex(labels, BitMatrix(labels.size(), labels.size())) {}

  std::size_t dim() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const BitMatrix& differential() const { return d_; }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }

  friend bool operator==(const UngradedComplex&, const UngradedComplex&) = default;

 private:
  std::vector<std::string> labels_;
  BitMatrix d_;
};

// ---------------------------------------------------------------------------
// Validity and homology

inline bool validate_complex(const ChainComplex& c) {
  for (Grade k : c.grades()) {
    if (!is_zero(multiply(c.differential(k - 1), c.differential(k)))) return false;
  }
  return true;
}

// First generator a with D(D(a)) != 0.
inline std::optional<std::size_t> square_witness(const UngradedComplex& c) {
  const BitMatrix sq = multiply(c.differential(), c.differential()).transpose();
  for (std::size_t a = 0; a < sq.rows(); ++a)
    if (!sq.row_is_zero(a)) return a;
  return std::nullopt;
}

inline bool is_valid(const UngradedComplex& c) { return !square_witness(c).has_value(); }

inline std::map<Grade, std::size_t> homology_dims(const ChainComplex& c) {
  if (!validate_complex(c)) throw InvalidComplexError("homology_dims: d^2 != 0", "");
  std::map<Grade, std::size_t> h;
  for (Grade k : c.grades()) {
    h[k] = c.dim(k) - rank(c.differential(k)) - rank(c.differential(k + 1));
  }
  return h;
}

inline std::size_t total_homology(const ChainComplex& c) {
  std::size_t n = 0;
  for (const auto& [k, h] : homology_dims(c)) n += h;
  return n;
}

inline std::size_t ungraded_homology(const UngradedComplex& c) {
  if (auto w = square_witness(c)) {
    throw InvalidComplexError("ungraded_homology: D^2 != 0", c.labels()[*w]);
  }
  return c.dim() - 2 * rank(c.differential());
}

// ---------------------------------------------------------------------------
// Maps

inline bool is_chain_map(const ChainMap& f) {
  for (Grade k : f.source().grades()) {
    const BitMatrix lhs = multiply(f.target().differential(k + f.shift()), f.block(k));
    const BitMatrix rhs = multiply(f.block(k - 1), f.source().differential(k));
    if (!(lhs == rhs)) return false;
  }
  return true;
}

inline bool is_chain_map(const UngradedComplex& source, const UngradedComplex& target, const BitMatrix& f) {
  if (f.rows() != target.dim() || f.cols() != source.dim()) {
    throw DimensionError("is_chain_map: map shape " + shape_string(f) + " does not match " +
                         std::to_string(source.dim()) + " -> " + std::to_string(target.dim()));
  }
  return multiply(target.differential(), f) == multiply(f, source.differential());
}

inline ChainMap identity_map(const ChainComplex& c) {
  std::map<Grade, BitMatrix> blocks;
  for (Grade k : c.grades()) blocks[k] = BitMatrix::identity(c.dim(k));
  return ChainMap(c, c, 0, std::move(blocks));
}

inline ChainMap map_sum(const std::vector<ChainMap>& fs) {
  if (fs.empty()) throw std::invalid_argument("map_sum: no maps");
  const ChainMap& first = fs.front();
  std::map<Grade, BitMatrix> blocks;
  for (Grade k : first.source().grades()) blocks[k] = first.block(k);
  for (std::size_t i = 1; i < fs.size(); ++i) {
    const ChainMap& f = fs[i];
    if (!(f.source() == first.source()) || !(f.target() == first.target()) || f.shift() != first.shift()) {
      throw DimensionError("map_sum: maps have different sources, targets or shifts");
    }
    for (Grade k : first.source().grades()) blocks[k] = add(blocks[k], f.block(k));
  }
  return ChainMap(first.source(), first.target(), first.shift(), std::move(blocks));
}

inline BitMatrix map_sum(const std::vector<BitMatrix>& fs) {
  if (fs.empty()) throw std::invalid_argument("map_sum: no maps");
  BitMatrix acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = add(acc, fs[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// Flattening graded objects into ungraded ones. Generators are ordered by
// ascending grade, then by position within the grade.

struct FlatLayout {
  std::map<Grade, std::size_t> offset;
  std::vector<Grade> grade_of;
};

inline FlatLayout flat_layout(const GradedSpace& s) {
  FlatLayout lay;
  std::size_t off = 0;
  for (const auto& [k, ls] : s.all_labels()) {
    lay.offset[k] = off;
    off += ls.size();
    lay.grade_of.insert(lay.grade_of.end(), ls.size(), k);
  }
  return lay;
}

inline UngradedComplex flatten(const ChainComplex& c) {
  const FlatLayout lay = flat_layout(c.space());
  std::vector<std::string> labels;
  for (const auto& [k, ls] : c.space().all_labels()) labels.insert(labels.end(), ls.begin(), ls.end());
  BitMatrix d(labels.size(), labels.size());
  for (Grade k : c.grades()) {
    auto below = lay.offset.find(k - 1);
    if (below == lay.offset.end()) continue;
    d.add_block(below->second, lay.offset.at(k), c.differential(k));
  }
  return UngradedComplex(std::move(labels), std::move(d));
}

inline BitMatrix flatten(const ChainMap& f) {
  const FlatLayout src = flat_layout(f.source().space());
  const FlatLayout tgt = flat_layout(f.target().space());
  BitMatrix m(f.target().total_dim(), f.source().total_dim());
  for (Grade k : f.source().grades()) {
    auto t = tgt.offset.find(k + f.shift());
    if (t == tgt.offset.end()) continue;
    m.add_block(t->second, src.offset.at(k), f.block(k));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Cones, sums and tensor products

// Source grades are raised by 1 + shift so that f lowers cone degree by one;
// D(a, b) = (d a, f a + d b).
inline ChainComplex mapping_cone(const ChainMap& f) {
  if (!is_chain_map(f)) throw std::invalid_argument("mapping_cone: input is not a chain map");
  const int lift = 1 + f.shift();
  const ChainComplex& src = f.source();
  const ChainComplex& tgt = f.target();

  std::set<Grade> grades;
  for (Grade k : src.grades()) grades.insert(k + lift);
  for (Grade k : tgt.grades()) grades.insert(k);

  std::vector<std::string> src_all, tgt_all;
  for (const auto& [k, ls] : src.space().all_labels()) src_all.insert(src_all.end(), ls.begin(), ls.end());
  for (const auto& [k, ls] : tgt.space().all_labels()) tgt_all.insert(tgt_all.end(), ls.begin(), ls.end());
  const auto renamed = detail::disjoint_labels({src_all, tgt_all}, {"src", "tgt"});
  const bool prefixed = renamed[0] != src_all;

  auto rename = [&](const std::string& l, const char* tag) { return prefixed ? std::string(tag) + "." + l : l; };

  std::map<Grade, std::vector<std::string>> labels;
  for (Grade g : grades) {
    auto& ls = labels[g];
    for (const auto& l : src.space().labels(g - lift)) ls.push_back(rename(l, "src"));
    for (const auto& l : tgt.space().labels(g)) ls.push_back(rename(l, "tgt"));
  }

  std::map<Grade, BitMatrix> diffs;
  for (Grade g : grades) {
    const std::size_t s_hi = src.dim(g - lift), t_hi = tgt.dim(g);
    const std::size_t s_lo = src.dim(g - 1 - lift), t_lo = tgt.dim(g - 1);
    BitMatrix d(s_lo + t_lo, s_hi + t_hi);
    d.add_block(0, 0, src.differential(g - lift));
    d.add_block(s_lo, 0, f.block(g - lift));
    d.add_block(s_lo, s_hi, tgt.differential(g));
    diffs[g] = std::move(d);
  }
  return ChainComplex(GradedSpace(std::move(labels)), std::move(diffs));
}

// Cone of an ungraded chain map f: source -> target, on source (+) target.
inline UngradedComplex mapping_cone(const UngradedComplex& source, const UngradedComplex& target,
                                    const BitMatrix& f) {
  if (!is_chain_map(source, target, f)) throw std::invalid_argument("mapping_cone: input is not a chain map");
  const auto renamed = detail::disjoint_labels({source.labels(), target.labels()}, {"src", "tgt"});
  std::vector<std::string> labels = renamed[0];
  labels.insert(labels.end(), renamed[1].begin(), renamed[1].end());
  BitMatrix d(labels.size(), labels.size());
  d.add_block(0, 0, source.differential());
  d.add_block(source.dim(), 0, f);
  d.add_block(source.dim(), source.dim(), target.differential());
  return UngradedComplex(std::move(labels), std::move(d));
}

inline ChainComplex direct_sum(const std::vector<ChainComplex>& cs) {
  std::vector<std::vector<std::string>> parts;
  std::vector<std::string> tags;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    std::vector<std::string> all;
    for (const auto& [k, ls] : cs[i].space().all_labels()) all.insert(all.end(), ls.begin(), ls.end());
    parts.push_back(std::move(all));
    tags.push_back(std::to_string(i));
  }
  const auto renamed = detail::disjoint_labels(parts, tags);

  std::set<Grade> grades;
  for (const auto& c : cs)
    for (Grade k : c.grades()) grades.insert(k);

  std::map<Grade, std::vector<std::string>> labels;
  for (Grade g : grades) labels[g];
  for (std::size_t i = 0; i < cs.size(); ++i) {
    std::size_t pos = 0;
    for (const auto& [k, ls] : cs[i].space().all_labels()) {
      for (std::size_t j = 0; j < ls.size(); ++j) labels[k].push_back(renamed[i][pos++]);
    }
  }
  GradedSpace space(std::move(labels));

  std::map<Grade, BitMatrix> diffs;
  for (Grade g : grades) {
    BitMatrix d(space.dim(g - 1), space.dim(g));
    std::size_t r0 = 0, c0 = 0;
    for (const auto& c : cs) {
      d.add_block(r0, c0, c.differential(g));
      r0 += c.dim(g - 1);
      c0 += c.dim(g);
    }
    diffs[g] = std::move(d);
  }
  return ChainComplex(std::move(space), std::move(diffs));
}

inline UngradedComplex direct_sum(const std::vector<UngradedComplex>& cs) {
  std::vector<std::vector<std::string>> parts;
  std::vector<std::string> tags;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    parts.push_back(cs[i].labels());
    tags.push_back(std::to_string(i));
  }
  std::vector<std::string> labels;
  for (const auto& p : detail::disjoint_labels(parts, tags)) labels.insert(labels.end(), p.begin(), p.end());
  BitMatrix d(labels.size(), labels.size());
  std::size_t off = 0;
  for (const auto& c : cs) {
    d.add_block(off, off, c.differential());
    off += c.dim();
  }
  return UngradedComplex(std::move(labels), std::move(d));
}

namespace detail {

// Offsets of the (i, j) summands inside each total grade of a graded tensor product.
struct TensorLayout {
  std::map<Grade, std::vector<std::pair<Grade, Grade>>> pieces;
  std::map<std::pair<Grade, Grade>, std::size_t> offset;
};

inline TensorLayout tensor_layout(const ChainComplex& a, const ChainComplex& b) {
  TensorLayout lay;
  for (Grade i : a.grades())
    for (Grade j : b.grades()) lay.pieces[i + j].emplace_back(i, j);
  for (auto& [g, ps] : lay.pieces) {
    std::sort(ps.begin(), ps.end());
    std::size_t off = 0;
    for (const auto& ij : ps) {
      lay.offset[ij] = off;
      off += a.dim(ij.first) * b.dim(ij.second);
    }
  }
  return lay;
}

inline std::string tensor_label(const std::string& x, const std::string& y) { return x + "⊗" + y; }

}  // namespace detail

// d(a (x) b) = da (x) b + a (x) db; no signs in characteristic 2.
inline ChainComplex tensor(const ChainComplex& a, const ChainComplex& b) {
  const detail::TensorLayout lay = detail::tensor_layout(a, b);
  std::map<Grade, std::vector<std::string>> labels;
  for (const auto& [g, ps] : lay.pieces) {
    auto& ls = labels[g];
    for (const auto& [i, j] : ps)
      for (const auto& x : a.space().labels(i))
        for (const auto& y : b.space().labels(j)) ls.push_back(detail::tensor_label(x, y));
  }
  GradedSpace space(std::move(labels));

  std::map<Grade, BitMatrix> diffs;
  for (const auto& [g, ps] : lay.pieces) {
    if (!lay.pieces.count(g - 1)) continue;
    BitMatrix d(space.dim(g - 1), space.dim(g));
    for (const auto& [i, j] : ps) {
      const std::size_t col = lay.offset.at({i, j});
      if (auto it = lay.offset.find({i - 1, j}); it != lay.offset.end()) {
        d.add_block(it->second, col, kronecker(a.differential(i), BitMatrix::identity(b.dim(j))));
      }
      if (auto it = lay.offset.find({i, j - 1}); it != lay.offset.end()) {
        d.add_block(it->second, col, kronecker(BitMatrix::identity(a.dim(i)), b.differential(j)));
      }
    }
    diffs[g] = std::move(d);
  }
  return ChainComplex(std::move(space), std::move(diffs));
}

inline UngradedComplex tensor(const UngradedComplex& a, const UngradedComplex& b) {
  std::vector<std::string> labels;
  labels.reserve(a.dim() * b.dim());
  for (const auto& x : a.labels())
    for (const auto& y : b.labels()) labels.push_back(detail::tensor_label(x, y));
  BitMatrix d = add(kronecker(a.differential(), BitMatrix::identity(b.dim())),
                    kronecker(BitMatrix::identity(a.dim()), b.differential()));
  return UngradedComplex(std::move(labels), std::move(d));
}

inline ChainMap tensor_map(const ChainMap& f, const ChainMap& g) {
  ChainComplex src = tensor(f.source(), g.source());
  ChainComplex tgt = tensor(f.target(), g.target());
  const detail::TensorLayout src_lay = detail::tensor_layout(f.source(), g.source());
  const detail::TensorLayout tgt_lay = detail::tensor_layout(f.target(), g.target());
  const int shift = f.shift() + g.shift();

  std::map<Grade, BitMatrix> blocks;
  for (const auto& [deg, ps] : src_lay.pieces) {
    BitMatrix m(tgt.dim(deg + shift), src.dim(deg));
    for (const auto& [i, j] : ps) {
      auto it = tgt_lay.offset.find({i + f.shift(), j + g.shift()});
      if (it == tgt_lay.offset.end()) continue;
      m.add_block(it->second, src_lay.offset.at({i, j}), kronecker(f.block(i), g.block(j)));
    }
    blocks[deg] = std::move(m);
  }
  return ChainMap(std::move(src), std::move(tgt), shift, std::move(blocks));
}

inline BitMatrix tensor_map(const BitMatrix& f, const BitMatrix& g) { return kronecker(f, g); }

// ---------------------------------------------------------------------------
// Elementary cancellation

struct CancelledPair {
  std::string source;
  std::string target;
  friend bool operator==(const CancelledPair&, const CancelledPair&) = default;
};

using ReductionTrace = std::vector<CancelledPair>;

namespace detail {

// Working state for repeated cancellation: a square differential where dead
// rows and columns are ignored rather than physically removed.
class Eliminator {
 public:
  explicit Eliminator(BitMatrix d) : d_(std::move(d)), alive_(d_.rows(), true), mask_(1, d_.cols()) {
    for (std::size_t c = 0; c < d_.cols(); ++c) mask_.set(0, c);
  }

  bool alive(std::size_t i) const { return alive_[i]; }
  bool entry(std::size_t target, std::size_t source) const { return d_.get(target, source); }

  // Cancels source x against target y, where D(x) has y-coefficient 1:
  // d'(a) = d(a) + <d a, y> d(x) on the surviving generators, which as a row
  // operation is row_r += row_y for every row r with D[r][x] = 1.
  void cancel(std::size_t x, std::size_t y) {
    for (std::size_t r = 0; r < d_.rows(); ++r) {
      if (alive_[r] && r != x && r != y && d_.get(r, x)) d_.xor_row(r, y);
    }
    kill(x);
    kill(y);
  }

  // First live off-diagonal unit entry in (target row, source column) order.
  std::optional<std::pair<std::size_t, std::size_t>> first_unit() const {
    const auto mask = mask_.row_words(0);
    for (std::size_t r = 0; r < d_.rows(); ++r) {
      if (!alive_[r]) continue;
      const auto row = d_.row_words(r);
      for (std::size_t w = 0; w < row.size(); ++w) {
        BitMatrix::Word bits = row[w] & mask[w];
        if (w == r / BitMatrix::kWordBits) bits &= ~(BitMatrix::Word{1} << (r % BitMatrix::kWordBits));
        if (bits) {
          const std::size_t c = w * BitMatrix::kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
          return std::make_pair(c, r);
        }
      }
    }
    return std::nullopt;
  }

  std::vector<std::size_t> survivors() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < alive_.size(); ++i)
      if (alive_[i]) s.push_back(i);
    return s;
  }

  BitMatrix restricted(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
    return d_.select(rows, cols);
  }

 private:
  void kill(std::size_t i) {
    alive_[i] = false;
    mask_.set(0, i, false);
  }

  BitMatrix d_;
  std::vector<bool> alive_;
  BitMatrix mask_;
};

inline UngradedComplex rebuild(const Eliminator& e, const std::vector<std::string>& labels) {
  const auto keep = e.survivors();
  std::vector<std::string> ls;
  for (std::size_t i : keep) ls.push_back(labels[i]);
  return UngradedComplex(std::move(ls), e.restricted(keep, keep));
}

inline ChainComplex rebuild(const Eliminator& e, const ChainComplex& original, const FlatLayout& lay,
                            const std::vector<std::string>& flat_labels) {
  std::map<Grade, std::vector<std::size_t>> by_grade;
  for (Grade k : original.grades()) by_grade[k];
  for (std::size_t i : e.survivors()) by_grade[lay.grade_of[i]].push_back(i);

  std::map<Grade, std::vector<std::string>> labels;
  for (const auto& [k, idx] : by_grade) {
    auto& ls = labels[k];
    for (std::size_t i : idx) ls.push_back(flat_labels[i]);
  }
  std::map<Grade, BitMatrix> diffs;
  for (const auto& [k, idx] : by_grade) {
    auto below = by_grade.find(k - 1);
    if (below == by_grade.end()) continue;
    diffs[k] = e.restricted(below->second, idx);
  }
  return ChainComplex(GradedSpace(std::move(labels)), std::move(diffs));
}

inline std::size_t require_label(const std::vector<std::string>& labels, const std::string& l) {
  auto it = std::find(labels.begin(), labels.end(), l);
  if (it == labels.end()) throw std::invalid_argument("cancel_pair: unknown generator '" + l + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace detail

// Removes generators x and y, where the differential of x has coefficient 1
// on y, correcting the remaining differential so homology is unchanged.
inline UngradedComplex cancel_pair(const UngradedComplex& c, const std::string& x, const std::string& y) {
  const std::size_t xi = detail::require_label(c.labels(), x);
  const std::size_t yi = detail::require_label(c.labels(), y);
  if (xi == yi || !c.differential().get(yi, xi)) {
    throw IllegalCancellationError("cancel_pair: differential of '" + x + "' has no '" + y + "' term");
  }
  detail::Eliminator e(c.differential());
  e.cancel(xi, yi);
  return detail::rebuild(e, c.labels());
}

inline ChainComplex cancel_pair(const ChainComplex& c, const std::string& x, const std::string& y) {
  const UngradedComplex flat = flatten(c);
  const std::size_t xi = detail::require_label(flat.labels(), x);
  const std::size_t yi = detail::require_label(flat.labels(), y);
  if (xi == yi || !flat.differential().get(yi, xi)) {
    throw IllegalCancellationError("cancel_pair: differential of '" + x + "' has no '" + y + "' term");
  }
  detail::Eliminator e(flat.differential());
  e.cancel(xi, yi);
  return detail::rebuild(e, c, flat_layout(c.space()), flat.labels());
}

// Cancels unit entries, always taking the first in (target, source) order,
// until the differential vanishes.
inline UngradedComplex reduce(const UngradedComplex& c, ReductionTrace* trace = nullptr) {
  if (auto w = square_witness(c)) throw InvalidComplexError("reduce: D^2 != 0", c.labels()[*w]);
  detail::Eliminator e(c.differential());
  while (auto unit = e.first_unit()) {
    if (trace) trace->push_back({c.labels()[unit->first], c.labels()[unit->second]});
    e.cancel(unit->first, unit->second);
  }
  return detail::rebuild(e, c.labels());
}

inline ChainComplex reduce(const ChainComplex& c, ReductionTrace* trace = nullptr) {
  if (!validate_complex(c)) throw InvalidComplexError("reduce: d^2 != 0", "");
  const UngradedComplex flat = flatten(c);
  detail::Eliminator e(flat.differential());
  while (auto unit = e.first_unit()) {
    if (trace) trace->push_back({flat.labels()[unit->first], flat.labels()[unit->second]});
    e.cancel(unit->first, unit->second);
  }
  return detail::rebuild(e, c, flat_layout(c.space()), flat.labels());
}

}  // namespace hfs
