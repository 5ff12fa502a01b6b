#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "hfsurgery/knotsys.hpp"
#include "test_support.hpp"

namespace hfs {
namespace {

BitMatrix m(std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<std::vector<int>> v;
  for (const auto& r : rows) v.emplace_back(r);
  return BitMatrix::from_rows(v);
}

// unknot-A plus an acyclic pair inf1 -> inf2 in C_inf.
KnotSystem chain_level_system() {
  BitMatrix d_inf(3, 3);
  d_inf.set(2, 1);
  const KnotDifferentials diffs{d_inf, BitMatrix(1, 1), BitMatrix(0, 0)};
  return make_knot_system("chain-level", {3, 1, 0}, m({{1, 0, 0}}), m({{1, 0, 0}}), BitMatrix(0, 1), BitMatrix(0, 1),
                          &diffs);
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hfsurgery_knotsys_" + name + ".json");
}

TEST(Validate, BuiltinsPass) {
  for (const auto& name : builtin_names()) {
    const ValidationReport r = validate(builtin(name));
    EXPECT_TRUE(r.passed()) << name << " fails " << (r.failed_check() ? r.failed_check()->name : "");
    EXPECT_EQ(r.checks.size(), 15u);
  }
}

TEST(Validate, ExactnessViolationIsNamed) {
  // im(phi) = 0 but ker(psibar) is everything.
  const KnotSystem ks = make_knot_system("bad-exact", {1, 1, 2}, BitMatrix(1, 1), BitMatrix(1, 1), m({{1}, {0}}),
                                         BitMatrix(2, 1));
  const ValidationReport r = validate(ks);
  EXPECT_FALSE(r.passed());
  const Check* c = r.find("exact:im(phi)=ker(psibar)");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->passed);
  EXPECT_FALSE(c->witness.empty());
  EXPECT_TRUE(r.find("exact:im(phibar)=ker(psi)")->passed);
}

TEST(Validate, CompositeViolation) {
  const KnotSystem ks =
      make_knot_system("bad-composite", {1, 1, 2}, m({{1}}), BitMatrix(1, 1), m({{1}, {0}}), m({{0}, {1}}));
  const ValidationReport r = validate(ks);
  EXPECT_FALSE(r.find("composite:psibar*phi")->passed);
  EXPECT_TRUE(r.find("composite:psi*phibar")->passed);
}

TEST(Validate, ConeConditionViolation) {
  // All maps zero: cone(phi) has homology 2, H(C_0) = 0.
  const KnotSystem ks = make_knot_system("zero", {1, 1, 0}, BitMatrix(1, 1), BitMatrix(1, 1), BitMatrix(0, 1),
                                         BitMatrix(0, 1));
  const ValidationReport r = validate(ks);
  EXPECT_FALSE(r.find("cone:phi")->passed);
  EXPECT_FALSE(r.find("cone:phibar")->passed);
  EXPECT_TRUE(r.find("cone:psi")->passed);
}

TEST(Validate, NonChainMapIsReported) {
  BitMatrix d_inf(2, 2);
  d_inf.set(1, 0);
  const KnotDifferentials diffs{d_inf, BitMatrix(1, 1), BitMatrix(0, 0)};
  // phi hits inf1 = d(inf0) but d_one is zero.
  const KnotSystem ks =
      make_knot_system("bad-map", {2, 1, 0}, m({{0, 1}}), m({{0, 0}}), BitMatrix(0, 1), BitMatrix(0, 1), &diffs);
  const ValidationReport r = validate(ks);
  EXPECT_FALSE(r.find("chain_map:phi")->passed);
  EXPECT_TRUE(r.find("chain_map:phibar")->passed);
  EXPECT_FALSE(r.find("cone:phi")->passed);
}

TEST(Validate, NonSquareZeroDifferentialIsReported) {
  BitMatrix d_inf(2, 2);
  d_inf.set(0, 0);
  const KnotDifferentials diffs{d_inf, BitMatrix(1, 1), BitMatrix(0, 0)};
  const KnotSystem ks =
      make_knot_system("bad-d", {2, 1, 0}, m({{1, 0}}), m({{1, 0}}), BitMatrix(0, 1), BitMatrix(0, 1), &diffs);
  const ValidationReport r = validate(ks);
  const Check* c = r.find("d^2=0:h_inf");
  EXPECT_FALSE(c->passed);
  EXPECT_NE(c->witness.find("inf0"), std::string::npos);
}

TEST(Validate, ChainLevelSkipsExactness) {
  const KnotSystem ks = chain_level_system();
  EXPECT_FALSE(ks.homology_level());
  const ValidationReport r = validate(ks);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.find("exact:im(phi)=ker(psibar)")->skipped);
  EXPECT_TRUE(r.find("exact:im(phibar)=ker(psi)")->skipped);
}

TEST(MakeKnotSystem, RejectsWrongShapes) {
  EXPECT_THROW(make_knot_system("x", {1, 1, 0}, BitMatrix(2, 1), BitMatrix(1, 1), BitMatrix(0, 1), BitMatrix(0, 1)),
               ShapeError);
  const KnotDifferentials diffs{BitMatrix(2, 2), BitMatrix(1, 1), BitMatrix(0, 0)};
  EXPECT_THROW(make_knot_system("x", {1, 1, 0}, BitMatrix(1, 1), BitMatrix(1, 1), BitMatrix(0, 1), BitMatrix(0, 1),
                                &diffs),
               ShapeError);
}

TEST(Bordered, UnknotA) {
  const BorderedSystem b = bordered_from_knotsys(builtin("unknot-A"));
  EXPECT_EQ(b.L.dim(), 2u);
  EXPECT_EQ(rank(b.L.differential()), 1u);
  EXPECT_EQ(b.M.dim(), 1u);
  EXPECT_TRUE(is_zero(b.psi3));
  EXPECT_TRUE(check_bordered(b).passed());
}

TEST(Bordered, UnknotB) {
  const BorderedSystem b = bordered_from_knotsys(builtin("unknot-B"));
  EXPECT_EQ(b.L.dim(), 2u);
  EXPECT_TRUE(is_zero(b.L.differential()));
  EXPECT_EQ(b.M.dim(), 3u);
  EXPECT_EQ(rank(b.M.differential()), 1u);
  EXPECT_TRUE(is_zero(b.psi1));
  EXPECT_TRUE(is_zero(b.psi3));
  EXPECT_EQ(ungraded_homology(b.L), 2u);
  EXPECT_EQ(ungraded_homology(b.M), 1u);
}

TEST(Bordered, InvalidInputThrows) {
  const KnotSystem ks = make_knot_system("zero", {1, 1, 0}, BitMatrix(1, 1), BitMatrix(1, 1), BitMatrix(0, 1),
                                         BitMatrix(0, 1));
  EXPECT_THROW(bordered_from_knotsys(ks), ValidationError);
}

TEST(Bordered, ChainLevelInput) {
  const BorderedSystem b = bordered_from_knotsys(chain_level_system());
  EXPECT_EQ(b.L.dim(), 4u);
  EXPECT_EQ(ungraded_homology(b.L), 0u);
  EXPECT_EQ(ungraded_homology(b.M), 1u);
}

TEST(Bordered, FuzzedSystemsSatisfyInvariants) {
  std::mt19937_64 rng(42);
  int built = 0;
  for (std::uint64_t seed = 0; built < 100; ++seed) {
    const KnotDims d{rng() % 9, rng() % 9, rng() % 9};
    try {
      forced_rank(d);
    } catch (const std::invalid_argument&) {
      continue;
    }
    const KnotSystem ks = random_valid(seed, d);
    const BorderedSystem b = bordered_from_knotsys(ks);
    ASSERT_TRUE(check_bordered(b).passed()) << ks.name;
    EXPECT_EQ(b.L.dim(), d.h_inf + d.h_one);
    EXPECT_EQ(b.M.dim(), d.h_one + d.h_zero);
    // Cone conditions, read through the derived complexes.
    EXPECT_EQ(ungraded_homology(b.L), d.h_zero);
    EXPECT_EQ(ungraded_homology(b.M), d.h_inf);
    ++built;
  }
}

TEST(FileFormat, RoundTripBuiltinsAndRandom) {
  std::vector<KnotSystem> systems;
  for (const auto& n : builtin_names()) systems.push_back(builtin(n));
  systems.push_back(random_valid(3, {4, 6, 4}));
  systems.push_back(random_valid(4, {0, 3, 3}));
  systems.push_back(chain_level_system());
  for (const auto& ks : systems) {
    const auto path = temp_file(ks.name);
    save(ks, path);
    EXPECT_EQ(load(path), ks) << ks.name;
    EXPECT_EQ(parse_knot_system(to_json(ks).dump()), ks) << ks.name;
    std::filesystem::remove(path);
  }
}

TEST(FileFormat, HomologyLevelOmitsDifferentials) {
  EXPECT_FALSE(to_json(builtin("unknot-A")).contains("differentials"));
  EXPECT_TRUE(to_json(chain_level_system()).contains("differentials"));
}

TEST(FileFormat, ReadsDocumentedExample) {
  const KnotSystem ks = parse_knot_system(R"({
    "name": "unknot-B",
    "spaces": {"h_inf": 1, "h_one": 1, "h_zero": 2},
    "maps": {"phi": [[0]], "phibar": [[0]], "psi": [[1],[0]], "psibar": [[0],[1]]}
  })");
  EXPECT_EQ(ks, builtin("unknot-B"));
}

TEST(FileFormat, ParseErrors) {
  const std::string head = R"({"name": "x", "spaces": {"h_inf": 1, "h_one": 1, "h_zero": 0}, "maps": )";
  EXPECT_THROW(parse_knot_system("{not json"), ParseError);
  EXPECT_THROW(parse_knot_system("[1, 2]"), ParseError);
  EXPECT_THROW(parse_knot_system(R"({"name": "x", "maps": {}})"), ParseError);
  EXPECT_THROW(parse_knot_system(head + R"({"phi": [[1]], "phibar": [[1]], "psi": []}})"), ParseError);
  EXPECT_THROW(parse_knot_system(head + R"({"phi": [[2]], "phibar": [[1]], "psi": [], "psibar": []}})"), ParseError);
  EXPECT_THROW(parse_knot_system(head + R"({"phi": [["1"]], "phibar": [[1]], "psi": [], "psibar": []}})"),
               ParseError);
  EXPECT_THROW(parse_knot_system(R"({"name": "x", "spaces": {"h_inf": -1, "h_one": 1, "h_zero": 0}, "maps": {}})"),
               ParseError);
  const std::string ragged = R"({"name": "x", "spaces": {"h_inf": 2, "h_one": 2, "h_zero": 0}, "maps":
    {"phi": [[1, 0], [1]], "phibar": [[1, 0], [0, 1]], "psi": [], "psibar": []}})";
  EXPECT_THROW(parse_knot_system(ragged), ParseError);
}

TEST(FileFormat, ShapeErrors) {
  const std::string head = R"({"name": "x", "spaces": {"h_inf": 1, "h_one": 1, "h_zero": 0}, "maps": )";
  EXPECT_THROW(parse_knot_system(head + R"({"phi": [[1, 0]], "phibar": [[1]], "psi": [], "psibar": []}})"),
               ShapeError);
  EXPECT_THROW(parse_knot_system(head + R"({"phi": [[1]], "phibar": [[1]], "psi": [[1]], "psibar": []}})"),
               ShapeError);
}

TEST(FileFormat, MissingFileIsParseError) {
  EXPECT_THROW(load("/nonexistent/hfsurgery/none.json"), ParseError);
}

TEST(Builtins, UnknownNameThrows) { EXPECT_THROW(builtin("trefoil"), std::invalid_argument); }

TEST(RandomValid, ForcedSmallCases) {
  EXPECT_EQ(forced_rank({1, 1, 0}), 1u);
  EXPECT_EQ(forced_rank({1, 1, 2}), 0u);
  const KnotSystem a = random_valid(9, {1, 1, 0});
  EXPECT_EQ(a.phi, BitMatrix::identity(1));
  EXPECT_EQ(a.phibar, BitMatrix::identity(1));
  const KnotSystem b = random_valid(9, {1, 1, 2});
  EXPECT_TRUE(is_zero(b.phi));
  EXPECT_EQ(rank(b.psi), 1u);
  EXPECT_EQ(rank(b.psibar), 1u);
  EXPECT_TRUE(validate(b).passed());
}

TEST(RandomValid, AllFeasibleDimsUpToEightPass) {
  std::size_t feasible = 0;
  for (std::size_t a = 0; a <= 8; ++a) {
    for (std::size_t b = 0; b <= 8; ++b) {
      for (std::size_t c = 0; c <= 8; ++c) {
        try {
          forced_rank({a, b, c});
        } catch (const std::invalid_argument&) {
          continue;
        }
        ++feasible;
        const KnotSystem ks = random_valid(a * 81 + b * 9 + c, {a, b, c});
        const ValidationReport r = validate(ks);
        ASSERT_TRUE(r.passed()) << ks.name << " fails " << r.failed_check()->name;
        EXPECT_EQ(ks.dims(), (KnotDims{a, b, c}));
      }
    }
  }
  EXPECT_GE(feasible, 100u);
}

TEST(RandomValid, InfeasibleDimsThrow) {
  EXPECT_THROW(random_valid(1, {1, 0, 0}), std::invalid_argument);  // odd
  EXPECT_THROW(random_valid(1, {0, 0, 2}), std::invalid_argument);  // h_zero too large
  EXPECT_THROW(random_valid(1, {3, 1, 0}), std::invalid_argument);  // rank exceeds h_one
  EXPECT_THROW(random_valid(1, {0, 2, 0}), std::invalid_argument);  // rank exceeds h_inf
}

TEST(RandomValid, SameSeedSameSystem) {
  EXPECT_EQ(random_valid(77, {3, 5, 4}), random_valid(77, {3, 5, 4}));
  EXPECT_NE(random_valid(77, {3, 5, 4}).phi, random_valid(78, {3, 5, 4}).phi);
}

TEST(RandomValid, ConeDimensionsAgreeWithRankFormula) {
  // dim H(cone f) = dim source + dim target - 2 rank f for zero differentials.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const KnotSystem ks = random_valid(seed, {4, 6, 4});
    const std::size_t direct = ungraded_homology(mapping_cone(ks.c_inf, ks.c_one, ks.phi));
    EXPECT_EQ(direct, 4 + 6 - 2 * testing::naive_rank(ks.phi.to_rows()));
    EXPECT_EQ(direct, 4u);
  }
}

TEST(ValidationReportJson, CarriesWitnesses) {
  const KnotSystem ks = make_knot_system("bad-exact", {1, 1, 2}, BitMatrix(1, 1), BitMatrix(1, 1), m({{1}, {0}}),
                                         BitMatrix(2, 1));
  const auto j = to_json(validate(ks));
  EXPECT_FALSE(j.at("passed").get<bool>());
  bool found = false;
  for (const auto& c : j.at("checks"))
    if (c.at("name") == "exact:im(phi)=ker(psibar)") found = c.contains("witness");
  EXPECT_TRUE(found);
}

}  // namespace
}  // namespace hfs
