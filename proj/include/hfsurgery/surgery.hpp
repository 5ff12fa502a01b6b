#pragma once

// Surgery complexes built from a knot system.
//
//  build_rational  the p/q complex: q copies of H_inf (grade 2), p+q copies
//                  of H_1 (grade 1), p copies of H_0 (grade 0), with
//                    phi^i    : H_inf(i) -> H_1(i)       i = 1..q
//                    phibar^i : H_inf(i) -> H_1(i+p)     i = 1..q
//                    psi^j    : H_1(j+q) -> H_0(j)       j = 1..p
//                    psibar^j : H_1(j)   -> H_0(j)       j = 1..p
//  build_zigzag    the integer-surgery zig-zag: a top row
//                    H_0 <-psi- H_1 -psibar-> H_0 <-psi- ... -psibar-> H_0
//                  with 2n-1 terms, and a bottom row
//                    H_1 <-phi- H_inf -phibar-> H_1
//                  whose ends feed the first H_0 by psibar and the last by psi.
//  build_splice    (L1 (x) L2) (+) (M1 (x) M2) with
//                    D = d + Phi1 (x) Phi2
//                          + Psi1_1 (x) Psi2_2 + Psi1_2 (x) Psi2_1 + Psi1_3 (x) Psi2_3.

#include <chrono>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hfsurgery/chain.hpp"
#include "hfsurgery/f2linalg.hpp"
#include "hfsurgery/knotsys.hpp"
#include "hfsurgery/lensmodel.hpp"

namespace hfs {

class SlopeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SurgerySlope {
  int p = 1;
  int q = 1;

  static SurgerySlope make(long long p, long long q) {
    if (p < 1 || q < 1) {
      throw SlopeError("slope " + std::to_string(p) + "/" + std::to_string(q) + ": p and q must be positive");
    }
    if (std::gcd(p, q) != 1) {
      throw SlopeError("slope " + std::to_string(p) + "/" + std::to_string(q) + ": p and q must be coprime");
    }
    return {static_cast<int>(p), static_cast<int>(q)};
  }
};

inline constexpr const char* kPsibarNote =
    "differential family H1(j) -> H0(j) is psibar^j; phibar has domain H_inf and cannot act on H1(j)";
inline constexpr const char* kArrowNote =
    "zig-zag bottom row is H1 <-phi- H_inf -phibar-> H1: H_inf is the source of both maps";
inline constexpr const char* kSpliceNote =
    "splice of the knot's bordered system with model(n); agreement with the rational complex is data, not assumed";

namespace detail {

inline void require_homology_level(const KnotSystem& ks, const char* where) {
  const ValidationReport r = validate(ks);
  if (const Check* bad = r.failed_check()) {
    throw ValidationError(std::string(where) + ": knot system '" + ks.name + "' fails " + bad->name +
                          (bad->witness.empty() ? "" : " (" + bad->witness + ")"));
  }
  if (!ks.homology_level()) {
    throw std::invalid_argument(std::string(where) + ": knot system '" + ks.name +
                                "' has nonzero differentials; use the splice method");
  }
}

inline void copy_labels(std::vector<std::string>& out, const std::string& tag, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out.push_back(tag + "." + std::to_string(k));
}

}  // namespace detail

inline ChainComplex build_rational(const KnotSystem& ks, SurgerySlope slope) {
  SurgerySlope::make(slope.p, slope.q);
  detail::require_homology_level(ks, "build_rational");
  const KnotDims d = ks.dims();
  const std::size_t p = static_cast<std::size_t>(slope.p), q = static_cast<std::size_t>(slope.q);

  std::map<Grade, std::vector<std::string>> labels{{2, {}}, {1, {}}, {0, {}}};
  for (std::size_t i = 1; i <= q; ++i) detail::copy_labels(labels[2], "Hinf(" + std::to_string(i) + ")", d.h_inf);
  for (std::size_t i = 1; i <= p + q; ++i) detail::copy_labels(labels[1], "H1(" + std::to_string(i) + ")", d.h_one);
  for (std::size_t j = 1; j <= p; ++j) detail::copy_labels(labels[0], "H0(" + std::to_string(j) + ")", d.h_zero);

  BitMatrix d2((p + q) * d.h_one, q * d.h_inf);
  for (std::size_t i = 1; i <= q; ++i) {
    d2.add_block((i - 1) * d.h_one, (i - 1) * d.h_inf, ks.phi);
    d2.add_block((i + p - 1) * d.h_one, (i - 1) * d.h_inf, ks.phibar);
  }
  BitMatrix d1(p * d.h_zero, (p + q) * d.h_one);
  for (std::size_t j = 1; j <= p; ++j) {
    d1.add_block((j - 1) * d.h_zero, (j + q - 1) * d.h_one, ks.psi);
    d1.add_block((j - 1) * d.h_zero, (j - 1) * d.h_one, ks.psibar);
  }

  ChainComplex c(GradedSpace(std::move(labels)), {{2, std::move(d2)}, {1, std::move(d1)}});
  if (!validate_complex(c)) throw InvalidComplexError("build_rational: d^2 != 0 on a validated input", "");
  return c;
}

inline ChainComplex build_zigzag(const KnotSystem& ks, int n) {
  if (n < 1) throw SlopeError("build_zigzag: n must be positive, got " + std::to_string(n));
  detail::require_homology_level(ks, "build_zigzag");
  const KnotDims d = ks.dims();
  const std::size_t m = static_cast<std::size_t>(n);

  // Grade 1 is laid out as the n-1 top-row H_1 terms, then the bottom-left
  // and bottom-right H_1.
  std::map<Grade, std::vector<std::string>> labels{{2, {}}, {1, {}}, {0, {}}};
  detail::copy_labels(labels[2], "Hinf", d.h_inf);
  for (std::size_t j = 1; j < m; ++j) detail::copy_labels(labels[1], "H1top(" + std::to_string(j) + ")", d.h_one);
  detail::copy_labels(labels[1], "H1left", d.h_one);
  detail::copy_labels(labels[1], "H1right", d.h_one);
  for (std::size_t j = 1; j <= m; ++j) detail::copy_labels(labels[0], "H0(" + std::to_string(j) + ")", d.h_zero);

  const std::size_t left = (m - 1) * d.h_one;
  const std::size_t right = m * d.h_one;

  BitMatrix d2((m + 1) * d.h_one, d.h_inf);
  d2.add_block(left, 0, ks.phi);
  d2.add_block(right, 0, ks.phibar);

  BitMatrix d1(m * d.h_zero, (m + 1) * d.h_one);
  for (std::size_t j = 1; j < m; ++j) {
    const std::size_t col = (j - 1) * d.h_one;
    d1.add_block((j - 1) * d.h_zero, col, ks.psi);
    d1.add_block(j * d.h_zero, col, ks.psibar);
  }
  d1.add_block(0, left, ks.psibar);
  d1.add_block((m - 1) * d.h_zero, right, ks.psi);

  ChainComplex c(GradedSpace(std::move(labels)), {{2, std::move(d2)}, {1, std::move(d1)}});
  if (!validate_complex(c)) throw InvalidComplexError("build_zigzag: d^2 != 0 on a validated input", "");
  return c;
}

// D^2 = 0 is checked, not assumed; a failure names a generator a with D(D(a)) != 0.
inline UngradedComplex build_splice(const BorderedSystem& b1, const BorderedSystem& b2) {
  for (const auto* b : {&b1, &b2}) {
    const ValidationReport r = check_bordered(*b);
    if (const Check* bad = r.failed_check()) {
      throw ValidationError("build_splice: bordered input fails " + bad->name + " (" + bad->witness + ")");
    }
  }
  const UngradedComplex L = tensor(b1.L, b2.L);
  const UngradedComplex M = tensor(b1.M, b2.M);
  const BitMatrix phi_bar = tensor_map(b1.phi, b2.phi);
  const BitMatrix psi_bar = map_sum(
      {tensor_map(b1.psi1, b2.psi2), tensor_map(b1.psi2, b2.psi1), tensor_map(b1.psi3, b2.psi3)});

  const auto renamed = detail::disjoint_labels({L.labels(), M.labels()}, {"L", "M"});
  std::vector<std::string> labels = renamed[0];
  labels.insert(labels.end(), renamed[1].begin(), renamed[1].end());

  BitMatrix D(labels.size(), labels.size());
  D.add_block(0, 0, L.differential());
  D.add_block(0, L.dim(), phi_bar);
  D.add_block(L.dim(), 0, psi_bar);
  D.add_block(L.dim(), L.dim(), M.differential());

  UngradedComplex c(std::move(labels), std::move(D));
  if (auto w = square_witness(c)) {
    throw InvalidComplexError("build_splice: D^2 != 0", c.labels()[*w]);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Reports

enum class Method { kRational, kZigzag, kSplice };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::kRational: return "rational";
    case Method::kZigzag: return "zigzag";
    case Method::kSplice: return "splice";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "rational") return Method::kRational;
  if (s == "zigzag") return Method::kZigzag;
  if (s == "splice") return Method::kSplice;
  throw std::invalid_argument("unknown method '" + s + "' (expected rational, zigzag or splice)");
}

struct HomologyReport {
  std::string input;
  Method method = Method::kRational;
  int p = 1;
  int q = 1;
  std::map<std::string, std::size_t> space_dims;
  std::map<std::string, std::size_t> homology_dims;
  std::size_t total = 0;
  std::vector<std::size_t> ranks;
  std::vector<std::string> notes;
  double elapsed_ms = 0.0;
};

namespace detail {

inline void fill_graded(HomologyReport& r, const ChainComplex& c) {
  for (const auto& [k, n] : c.space().dims()) r.space_dims[std::to_string(k)] = n;
  for (const auto& [k, h] : homology_dims(c)) {
    r.homology_dims[std::to_string(k)] = h;
    r.total += h;
  }
  for (Grade k : c.grades()) {
    if (c.stored_differentials().count(k)) r.ranks.push_back(rank(c.differential(k)));
  }
}

}  // namespace detail

inline HomologyReport surgery_report(const KnotSystem& ks, SurgerySlope slope, Method method) {
  const auto start = std::chrono::steady_clock::now();
  HomologyReport r;
  r.input = ks.name;
  r.method = method;
  r.p = slope.p;
  r.q = slope.q;
  switch (method) {
    case Method::kRational:
      detail::fill_graded(r, build_rational(ks, slope));
      r.notes.push_back(kPsibarNote);
      break;
    case Method::kZigzag:
      if (slope.q != 1) throw SlopeError("zigzag method requires q = 1");
      detail::fill_graded(r, build_zigzag(ks, slope.p));
      r.notes.push_back(kArrowNote);
      break;
    case Method::kSplice: {
      if (slope.q != 1) throw SlopeError("splice method requires q = 1");
      const UngradedComplex c = build_splice(bordered_from_knotsys(ks), build_model(slope.p).system);
      r.space_dims["all"] = c.dim();
      r.total = ungraded_homology(c);
      r.homology_dims["all"] = r.total;
      r.ranks.push_back(rank(c.differential()));
      r.notes.push_back(kSpliceNote);
      break;
    }
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// Timing is left out unless asked for so that reports are reproducible byte for byte.
inline nlohmann::ordered_json to_json(const HomologyReport& r, bool with_timing = false) {
  nlohmann::ordered_json j;
  j["input"] = r.input;
  j["method"] = to_string(r.method);
  j["p"] = r.p;
  j["q"] = r.q;
  j["space_dims"] = r.space_dims;
  j["homology_dims"] = r.homology_dims;
  j["total"] = r.total;
  j["ranks"] = r.ranks;
  j["notes"] = r.notes;
  if (with_timing) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

// All coprime (p, q) with p <= pmax, q <= qmax, in lexicographic order.
inline std::vector<HomologyReport> sweep(const KnotSystem& ks, int pmax, int qmax, Method method = Method::kRational) {
  std::vector<HomologyReport> rows;
  for (int p = 1; p <= pmax; ++p)
    for (int q = 1; q <= qmax; ++q)
      if (std::gcd(p, q) == 1) rows.push_back(surgery_report(ks, {p, q}, method));
  return rows;
}

// ---------------------------------------------------------------------------
// Rational formula versus the splice construction

struct ComparisonRow {
  int n = 0;
  std::size_t rational_total = 0;
  std::size_t splice_total = 0;
  std::size_t rational_dim = 0;
  std::size_t splice_dim = 0;
  ReductionTrace rational_trace;
  ReductionTrace splice_trace;

  long long difference() const {
    return static_cast<long long>(splice_total) - static_cast<long long>(rational_total);
  }
};

struct ComparisonReport {
  std::string input;
  std::vector<ComparisonRow> rows;
};

inline ComparisonRow compare_methods(const KnotSystem& ks, int n) {
  ComparisonRow row;
  row.n = n;
  const ChainComplex rational = build_rational(ks, SurgerySlope::make(n, 1));
  row.rational_dim = rational.total_dim();
  row.rational_total = reduce(rational, &row.rational_trace).total_dim();

  const UngradedComplex splice = build_splice(bordered_from_knotsys(ks), build_model(n).system);
  row.splice_dim = splice.dim();
  row.splice_total = reduce(splice, &row.splice_trace).dim();

  if (row.rational_total != total_homology(rational) || row.splice_total != ungraded_homology(splice)) {
    throw std::logic_error("compare_methods: reduction disagrees with rank computation");
  }
  return row;
}

inline ComparisonReport compare_table(const KnotSystem& ks, int nmax) {
  if (nmax < 1) throw SlopeError("compare: nmax must be positive");
  ComparisonReport rep{ks.name, {}};
  for (int n = 1; n <= nmax; ++n) rep.rows.push_back(compare_methods(ks, n));
  return rep;
}

inline nlohmann::ordered_json to_json(const ReductionTrace& t) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (const auto& c : t) a.push_back({c.source, c.target});
  return a;
}

inline nlohmann::ordered_json to_json(const ComparisonReport& rep) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : rep.rows) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["rational"] = r.rational_total;
    j["splice"] = r.splice_total;
    j["difference"] = r.difference();
    j["rational_dim"] = r.rational_dim;
    j["splice_dim"] = r.splice_dim;
    j["rational_trace"] = to_json(r.rational_trace);
    j["splice_trace"] = to_json(r.splice_trace);
    rows.push_back(std::move(j));
  }
  nlohmann::ordered_json j;
  j["input"] = rep.input;
  j["rows"] = std::move(rows);
  j["notes"] = {kPsibarNote, kSpliceNote};
  return j;
}

}  // namespace hfs
