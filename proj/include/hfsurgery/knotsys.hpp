#pragma once

// Knot systems: three groups H_inf, H_1, H_0 with maps
//   phi, phibar : H_inf -> H_1      psi, psibar : H_1 -> H_0,
// together with the checks they must pass, the derived bordered system
// (L = cone(phi), M = cone(psi), Psi_1, Psi_2, Psi_3, Phi), the JSON file
// format, two builtin datasets and a seeded generator of valid systems.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hfsurgery/chain.hpp"
#include "hfsurgery/f2linalg.hpp"

namespace hfs {

class ShapeError : public DimensionError {
 public:
  using DimensionError::DimensionError;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KnotDims {
  std::size_t h_inf = 0;
  std::size_t h_one = 0;
  std::size_t h_zero = 0;
  friend bool operator==(const KnotDims&, const KnotDims&) = default;
};

struct KnotSystem {
  std::string name;
  UngradedComplex c_inf;
  UngradedComplex c_one;
  UngradedComplex c_zero;
  BitMatrix phi;     // h_one x h_inf
  BitMatrix phibar;  // h_one x h_inf
  BitMatrix psi;     // h_zero x h_one
  BitMatrix psibar;  // h_zero x h_one

  KnotDims dims() const { return {c_inf.dim(), c_one.dim(), c_zero.dim()}; }

  bool homology_level() const {
    return is_zero(c_inf.differential()) && is_zero(c_one.differential()) && is_zero(c_zero.differential());
  }

  friend bool operator==(const KnotSystem&, const KnotSystem&) = default;
};

struct KnotDifferentials {
  BitMatrix d_inf, d_one, d_zero;
};

namespace detail {

inline std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
  return v;
}

inline void require_shape(const BitMatrix& m, std::size_t rows, std::size_t cols, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ShapeError(what + " has shape " + shape_string(m) + ", expected " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
}

}  // namespace detail

// Assembles a knot system, checking every shape. Absent differentials are zero.
inline KnotSystem make_knot_system(std::string name, KnotDims dims, BitMatrix phi, BitMatrix phibar, BitMatrix psi,
                                   BitMatrix psibar, const KnotDifferentials* diffs = nullptr) {
  detail::require_shape(phi, dims.h_one, dims.h_inf, "phi");
  detail::require_shape(phibar, dims.h_one, dims.h_inf, "phibar");
  detail::require_shape(psi, dims.h_zero, dims.h_one, "psi");
  detail::require_shape(psibar, dims.h_zero, dims.h_one, "psibar");
  BitMatrix d_inf(dims.h_inf, dims.h_inf), d_one(dims.h_one, dims.h_one), d_zero(dims.h_zero, dims.h_zero);
  if (diffs) {
    detail::require_shape(diffs->d_inf, dims.h_inf, dims.h_inf, "differential h_inf");
    detail::require_shape(diffs->d_one, dims.h_one, dims.h_one, "differential h_one");
    detail::require_shape(diffs->d_zero, dims.h_zero, dims.h_zero, "differential h_zero");
    d_inf = diffs->d_inf;
    d_one = diffs->d_one;
    d_zero = diffs->d_zero;
  }
  return KnotSystem{std::move(name),
                    UngradedComplex(detail::numbered("inf", dims.h_inf), std::move(d_inf)),
                    UngradedComplex(detail::numbered("one", dims.h_one), std::move(d_one)),
                    UngradedComplex(detail::numbered("zero", dims.h_zero), std::move(d_zero)),
                    std::move(phi),
                    std::move(phibar),
                    std::move(psi),
                    std::move(psibar)};
}

// ---------------------------------------------------------------------------
// Validation

struct Check {
  explicit Check(std::string n, bool ok = true, bool skip = false, std::string w = {})
      : name(std::move(n)), passed(ok), skipped(skip), witness(std::move(w)) {}

  std::string name;
  bool passed;
  bool skipped;
  std::string witness;  // empty when passed
};

struct ValidationReport {
  std::vector<Check> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  const Check* failed_check() const {
    for (const auto& c : checks)
      if (!c.passed) return &c;
    return nullptr;
  }

  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

inline nlohmann::json to_json(const ValidationReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json j = {{"name", c.name}, {"passed", c.passed}};
    if (c.skipped) j["skipped"] = true;
    if (!c.witness.empty()) j["witness"] = c.witness;
    checks.push_back(std::move(j));
  }
  return {{"passed", r.passed()}, {"checks", std::move(checks)}};
}

namespace detail {

inline Check zero_check(std::string name, const BitMatrix& m) {
  Check c(std::move(name));
  if (!is_zero(m)) {
    c.passed = false;
    c.witness = "nonzero composite " + m.to_string();
  }
  return c;
}

inline Check exactness_check(std::string name, const BitMatrix& in, const BitMatrix& out) {
  Check c(std::move(name));
  const BitMatrix ker = kernel_basis(out);
  if (!column_space_equal(in, ker)) {
    c.passed = false;
    c.witness = "rank of image " + std::to_string(rank(in)) + ", dimension of kernel " +
                std::to_string(ker.cols());
  }
  return c;
}

inline Check cone_check(std::string name, const UngradedComplex& src, const UngradedComplex& tgt, const BitMatrix& f,
                        std::size_t expected, bool prerequisites_ok) {
  Check c(std::move(name));
  if (!prerequisites_ok) {
    c.passed = false;
    c.witness = "cone undefined: complexes or chain-map checks failed";
    return c;
  }
  const std::size_t h = ungraded_homology(mapping_cone(src, tgt, f));
  if (h != expected) {
    c.passed = false;
    c.witness = "cone homology " + std::to_string(h) + ", expected " + std::to_string(expected);
  }
  return c;
}

}  // namespace detail

// Runs every hypothesis check. Mathematical failures are reported, not thrown.
inline ValidationReport validate(const KnotSystem& ks) {
  const KnotDims d = ks.dims();
  detail::require_shape(ks.phi, d.h_one, d.h_inf, "phi");
  detail::require_shape(ks.phibar, d.h_one, d.h_inf, "phibar");
  detail::require_shape(ks.psi, d.h_zero, d.h_one, "psi");
  detail::require_shape(ks.psibar, d.h_zero, d.h_one, "psibar");

  ValidationReport r;
  bool complexes_ok = true;
  for (const auto& [name, c] : {std::pair<const char*, const UngradedComplex*>{"h_inf", &ks.c_inf},
                                {"h_one", &ks.c_one},
                                {"h_zero", &ks.c_zero}}) {
    Check chk(std::string("d^2=0:") + name);
    if (auto w = square_witness(*c)) {
      chk.passed = false;
      chk.witness = "D^2 nonzero on generator " + c->labels()[*w];
      complexes_ok = false;
    }
    r.checks.push_back(std::move(chk));
  }

  bool maps_ok = complexes_ok;
  auto map_check = [&](const char* name, const UngradedComplex& s, const UngradedComplex& t, const BitMatrix& f) {
    Check chk(std::string("chain_map:") + name);
    if (!is_chain_map(s, t, f)) {
      chk.passed = false;
      chk.witness = "d f + f d = " + add(multiply(t.differential(), f), multiply(f, s.differential())).to_string();
      maps_ok = false;
    }
    r.checks.push_back(std::move(chk));
  };
  map_check("phi", ks.c_inf, ks.c_one, ks.phi);
  map_check("phibar", ks.c_inf, ks.c_one, ks.phibar);
  map_check("psi", ks.c_one, ks.c_zero, ks.psi);
  map_check("psibar", ks.c_one, ks.c_zero, ks.psibar);

  r.checks.push_back(detail::zero_check("composite:psibar*phi", multiply(ks.psibar, ks.phi)));
  r.checks.push_back(detail::zero_check("composite:psi*phibar", multiply(ks.psi, ks.phibar)));

  if (ks.homology_level()) {
    r.checks.push_back(detail::exactness_check("exact:im(phi)=ker(psibar)", ks.phi, ks.psibar));
    r.checks.push_back(detail::exactness_check("exact:im(phibar)=ker(psi)", ks.phibar, ks.psi));
  } else {
    r.checks.emplace_back("exact:im(phi)=ker(psibar)", true, true);
    r.checks.emplace_back("exact:im(phibar)=ker(psi)", true, true);
  }

  const std::size_t h_zero = complexes_ok ? ungraded_homology(ks.c_zero) : 0;
  const std::size_t h_inf = complexes_ok ? ungraded_homology(ks.c_inf) : 0;
  r.checks.push_back(detail::cone_check("cone:phi", ks.c_inf, ks.c_one, ks.phi, h_zero, maps_ok));
  r.checks.push_back(detail::cone_check("cone:phibar", ks.c_inf, ks.c_one, ks.phibar, h_zero, maps_ok));
  r.checks.push_back(detail::cone_check("cone:psi", ks.c_one, ks.c_zero, ks.psi, h_inf, maps_ok));
  r.checks.push_back(detail::cone_check("cone:psibar", ks.c_one, ks.c_zero, ks.psibar, h_inf, maps_ok));
  return r;
}

// ---------------------------------------------------------------------------
// Bordered systems

// (L, M, Psi_1, Psi_2, Psi_3 : L -> M, Phi : M -> L), all ungraded.
struct BorderedSystem {
  UngradedComplex L;
  UngradedComplex M;
  BitMatrix psi1;  // M.dim x L.dim
  BitMatrix psi2;
  BitMatrix psi3;
  BitMatrix phi;  // L.dim x M.dim
};

inline ValidationReport check_bordered(const BorderedSystem& b) {
  detail::require_shape(b.psi1, b.M.dim(), b.L.dim(), "Psi_1");
  detail::require_shape(b.psi2, b.M.dim(), b.L.dim(), "Psi_2");
  detail::require_shape(b.psi3, b.M.dim(), b.L.dim(), "Psi_3");
  detail::require_shape(b.phi, b.L.dim(), b.M.dim(), "Phi");

  ValidationReport r;
  auto square = [&](const char* name, const UngradedComplex& c) {
    Check chk(name);
    if (auto w = square_witness(c)) {
      chk.passed = false;
      chk.witness = "D^2 nonzero on generator " + c.labels()[*w];
    }
    r.checks.push_back(std::move(chk));
  };
  square("d^2=0:L", b.L);
  square("d^2=0:M", b.M);

  auto chain = [&](const char* name, const UngradedComplex& s, const UngradedComplex& t, const BitMatrix& f) {
    Check chk(std::string("chain_map:") + name);
    if (!is_chain_map(s, t, f)) {
      chk.passed = false;
      chk.witness = "d f + f d = " + add(multiply(t.differential(), f), multiply(f, s.differential())).to_string();
    }
    r.checks.push_back(std::move(chk));
  };
  chain("Psi_1", b.L, b.M, b.psi1);
  chain("Psi_2", b.L, b.M, b.psi2);
  chain("Psi_3", b.L, b.M, b.psi3);
  chain("Phi", b.M, b.L, b.phi);

  Check rel("relation:Psi_2*Phi*Psi_1=Psi_3");
  const BitMatrix diff = add(multiply(b.psi2, multiply(b.phi, b.psi1)), b.psi3);
  if (!is_zero(diff)) {
    rel.passed = false;
    rel.witness = "Psi_2*Phi*Psi_1 + Psi_3 = " + diff.to_string();
  }
  r.checks.push_back(std::move(rel));
  return r;
}

// L = cone(phi) on C_inf (+) C_1, M = cone(psi) on C_1 (+) C_0. Phi is the
// identity from the C_1 part of M to the C_1 part of L, Psi_1 is phibar from
// C_inf in L to C_1 in M, Psi_2 is psibar from C_1 in L to C_0 in M, and
// Psi_3 is defined as Psi_2 * Phi * Psi_1.
inline BorderedSystem bordered_from_knotsys(const KnotSystem& ks) {
  const ValidationReport report = validate(ks);
  if (const Check* bad = report.failed_check()) {
    throw ValidationError("bordered_from_knotsys: knot system '" + ks.name + "' fails " + bad->name);
  }
  const KnotDims d = ks.dims();
  BorderedSystem b;
  b.L = mapping_cone(ks.c_inf, ks.c_one, ks.phi);
  b.M = mapping_cone(ks.c_one, ks.c_zero, ks.psi);

  b.phi = BitMatrix(b.L.dim(), b.M.dim());
  b.phi.add_block(d.h_inf, 0, BitMatrix::identity(d.h_one));
  b.psi1 = BitMatrix(b.M.dim(), b.L.dim());
  b.psi1.add_block(0, 0, ks.phibar);
  b.psi2 = BitMatrix(b.M.dim(), b.L.dim());
  b.psi2.add_block(d.h_one, d.h_inf, ks.psibar);
  b.psi3 = multiply(b.psi2, multiply(b.phi, b.psi1));

  const ValidationReport derived = check_bordered(b);
  if (const Check* bad = derived.failed_check()) {
    throw ValidationError("bordered_from_knotsys: derived system fails " + bad->name + " (" + bad->witness + ")");
  }
  return b;
}

// ---------------------------------------------------------------------------
// File format

namespace detail {

inline BitMatrix parse_matrix(const nlohmann::json& j, const std::string& field, std::size_t rows, std::size_t cols) {
  if (!j.is_array()) throw ParseError(field + ": expected an array of rows");
  std::vector<std::vector<int>> data;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    if (!row.is_array()) throw ParseError(field + " row " + std::to_string(i) + ": expected an array");
    std::vector<int> r;
    for (std::size_t k = 0; k < row.size(); ++k) {
      const auto& e = row[k];
      if (!e.is_number_integer() || (e.get<long long>() != 0 && e.get<long long>() != 1)) {
        throw ParseError(field + " row " + std::to_string(i) + " entry " + std::to_string(k) +
                         ": expected 0 or 1, got " + e.dump());
      }
      r.push_back(e.get<int>());
    }
    if (!data.empty() && r.size() != data.front().size()) {
      throw ParseError(field + " row " + std::to_string(i) + ": has " + std::to_string(r.size()) +
                       " entries, row 0 has " + std::to_string(data.front().size()));
    }
    data.push_back(std::move(r));
  }
  const std::size_t got_cols = data.empty() ? cols : data.front().size();
  if (data.size() != rows || got_cols != cols) {
    throw ShapeError(field + " has shape " + std::to_string(data.size()) + "x" + std::to_string(got_cols) +
                     ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  return BitMatrix::from_rows(data, cols);
}

inline std::size_t parse_dim(const nlohmann::json& spaces, const char* key) {
  if (!spaces.contains(key)) throw ParseError(std::string("spaces.") + key + ": missing");
  const auto& v = spaces.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ParseError(std::string("spaces.") + key + ": expected a non-negative integer, got " + v.dump());
  }
  return v.get<std::size_t>();
}

inline const nlohmann::json& require_field(const nlohmann::json& j, const std::string& path, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(path + key + ": missing");
  return j.at(key);
}

}  // namespace detail

inline nlohmann::json to_json(const KnotSystem& ks) {
  const KnotDims d = ks.dims();
  nlohmann::json j;
  j["name"] = ks.name;
  j["spaces"] = {{"h_inf", d.h_inf}, {"h_one", d.h_one}, {"h_zero", d.h_zero}};
  j["maps"] = {{"phi", ks.phi.to_rows()},
               {"phibar", ks.phibar.to_rows()},
               {"psi", ks.psi.to_rows()},
               {"psibar", ks.psibar.to_rows()}};
  if (!ks.homology_level()) {
    j["differentials"] = {{"h_inf", ks.c_inf.differential().to_rows()},
                          {"h_one", ks.c_one.differential().to_rows()},
                          {"h_zero", ks.c_zero.differential().to_rows()}};
  }
  return j;
}

inline KnotSystem knot_system_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("top level: expected an object");
  const auto& name = detail::require_field(j, "", "name");
  if (!name.is_string()) throw ParseError("name: expected a string");
  const auto& spaces = detail::require_field(j, "", "spaces");
  const KnotDims d{detail::parse_dim(spaces, "h_inf"), detail::parse_dim(spaces, "h_one"),
                   detail::parse_dim(spaces, "h_zero")};
  const auto& maps = detail::require_field(j, "", "maps");
  auto map = [&](const char* key, std::size_t rows, std::size_t cols) {
    return detail::parse_matrix(detail::require_field(maps, "maps.", key), std::string("maps.") + key, rows, cols);
  };
  BitMatrix phi = map("phi", d.h_one, d.h_inf);
  BitMatrix phibar = map("phibar", d.h_one, d.h_inf);
  BitMatrix psi = map("psi", d.h_zero, d.h_one);
  BitMatrix psibar = map("psibar", d.h_zero, d.h_one);

  if (j.contains("differentials")) {
    const auto& dj = j.at("differentials");
    if (!dj.is_object()) throw ParseError("differentials: expected an object");
    auto diff = [&](const char* key, std::size_t n) {
      if (!dj.contains(key)) return BitMatrix(n, n);
      return detail::parse_matrix(dj.at(key), std::string("differentials.") + key, n, n);
    };
    const KnotDifferentials diffs{diff("h_inf", d.h_inf), diff("h_one", d.h_one), diff("h_zero", d.h_zero)};
    return make_knot_system(name.get<std::string>(), d, std::move(phi), std::move(phibar), std::move(psi),
                            std::move(psibar), &diffs);
  }
  return make_knot_system(name.get<std::string>(), d, std::move(phi), std::move(phibar), std::move(psi),
                          std::move(psibar));
}

inline KnotSystem parse_knot_system(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return knot_system_from_json(j);
}

inline KnotSystem load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_knot_system(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ShapeError& e) {
    throw ShapeError(path.string() + ": " + e.what());
  }
}

inline void save(const KnotSystem& ks, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << to_json(ks).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Datasets

inline std::vector<std::string> builtin_names() { return {"unknot-A", "unknot-B"}; }

inline KnotSystem builtin(const std::string& name) {
  if (name == "unknot-A") {
    return make_knot_system(name, {1, 1, 0}, BitMatrix::from_rows({{1}}), BitMatrix::from_rows({{1}}),
                            BitMatrix(0, 1), BitMatrix(0, 1));
  }
  if (name == "unknot-B") {
    return make_knot_system(name, {1, 1, 2}, BitMatrix(1, 1), BitMatrix(1, 1), BitMatrix::from_rows({{1}, {0}}),
                            BitMatrix::from_rows({{0}, {1}}));
  }
  throw std::invalid_argument("unknown builtin knot system '" + name + "'");
}

namespace detail {

inline BitMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (rng() & 1U) m.set(r, c);
  return m;
}

inline BitMatrix random_invertible(std::mt19937_64& rng, std::size_t n) {
  for (;;) {
    BitMatrix m = random_matrix(rng, n, n);
    if (rank(m) == n) return m;
  }
}

// phi includes the first r coordinates; psibar sends e_{r+i} to e_i and so
// kills exactly the image of phi.
inline std::pair<BitMatrix, BitMatrix> exact_pair(std::mt19937_64& rng, const KnotDims& d, std::size_t r) {
  BitMatrix f(d.h_one, d.h_inf), g(d.h_zero, d.h_one);
  for (std::size_t i = 0; i < r; ++i) f.set(i, i);
  for (std::size_t i = 0; i < d.h_one - r; ++i) g.set(i, r + i);
  const BitMatrix a = random_invertible(rng, d.h_inf);
  const BitMatrix b = random_invertible(rng, d.h_one);
  const BitMatrix c = random_invertible(rng, d.h_zero);
  return {multiply(b, multiply(f, a)), multiply(c, multiply(g, inverse(b)))};
}

}  // namespace detail

// Rank of phi forced by exactness and the cone conditions; throws with the
// violated constraint when no valid system of these dimensions exists.
inline std::size_t forced_rank(const KnotDims& d) {
  const long long a = static_cast<long long>(d.h_inf), b = static_cast<long long>(d.h_one),
                  c = static_cast<long long>(d.h_zero);
  if ((a + b - c) % 2 != 0) throw std::invalid_argument("infeasible dims: h_inf + h_one - h_zero must be even");
  const long long r = (a + b - c) / 2;
  if (r < 0) throw std::invalid_argument("infeasible dims: h_zero must not exceed h_inf + h_one");
  if (r > std::min(a, b)) throw std::invalid_argument("infeasible dims: (h_inf + h_one - h_zero)/2 exceeds min(h_inf, h_one)");
  if (b - r > c) throw std::invalid_argument("infeasible dims: h_one - rank(phi) exceeds h_zero");
  return static_cast<std::size_t>(r);
}

// Random homology-level system passing validate(). The pairs (phi, psibar)
// and (phibar, psi) are drawn independently.
inline KnotSystem random_valid(std::uint64_t seed, const KnotDims& d) {
  const std::size_t r = forced_rank(d);
  std::mt19937_64 rng(seed);
  auto [phi, psibar] = detail::exact_pair(rng, d, r);
  auto [phibar, psi] = detail::exact_pair(rng, d, r);
  const std::string name = "random-" + std::to_string(seed) + "-" + std::to_string(d.h_inf) + "," +
                           std::to_string(d.h_one) + "," + std::to_string(d.h_zero);
  return make_knot_system(name, d, std::move(phi), std::move(phibar), std::move(psi), std::move(psibar));
}

}  // namespace hfs
