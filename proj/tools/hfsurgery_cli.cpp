// hfsurgery: command-line front end.
//
// Exit codes: 0 success, 1 mathematical failure, 2 usage or parse failure.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hfsurgery/hfsurgery.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kMathFailure = 1;
constexpr int kUsage = 2;

// "@name" selects a builtin dataset; anything else is a file path.
hfs::KnotSystem resolve_input(const std::string& source) {
  if (!source.empty() && source.front() == '@') return hfs::builtin(source.substr(1));
  return hfs::load(source);
}

template <typename Json>
void emit_json(const Json& j, const std::string& path) {
  if (path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

std::string join_dims(const std::map<std::string, std::size_t>& dims) {
  std::string s;
  for (const auto& [k, v] : dims) {
    if (!s.empty()) s += ", ";
    s += k + ": " + std::to_string(v);
  }
  return s;
}

int run_validate(const std::string& input, const std::string& json_path) {
  const hfs::KnotSystem ks = resolve_input(input);
  const hfs::ValidationReport rep = hfs::validate(ks);
  if (json_path == "-") {
    emit_json(hfs::to_json(rep), json_path);
  } else {
    std::cout << "knot system " << ks.name << " (" << ks.dims().h_inf << ", " << ks.dims().h_one << ", "
              << ks.dims().h_zero << ")\n";
    for (const auto& c : rep.checks) {
      std::cout << "  " << (c.skipped ? "SKIP" : c.passed ? "ok  " : "FAIL") << "  " << c.name;
      if (!c.witness.empty()) std::cout << "  [" << c.witness << "]";
      std::cout << '\n';
    }
    std::cout << (rep.passed() ? "valid" : "INVALID") << '\n';
    if (!json_path.empty()) emit_json(hfs::to_json(rep), json_path);
  }
  return rep.passed() ? kOk : kMathFailure;
}

void print_report(const hfs::HomologyReport& r) {
  std::cout << "input " << r.input << "  method " << hfs::to_string(r.method) << "  slope " << r.p << "/" << r.q
            << '\n'
            << "  space dims     " << join_dims(r.space_dims) << '\n'
            << "  homology dims  " << join_dims(r.homology_dims) << '\n'
            << "  total          " << r.total << '\n';
  for (const auto& n : r.notes) std::cout << "  note: " << n << '\n';
  std::cout << "  elapsed        " << std::fixed << std::setprecision(3) << r.elapsed_ms << " ms\n";
}

int run_surgery(const std::string& input, long long p, long long q, const std::string& method,
                const std::string& json_path) {
  const hfs::KnotSystem ks = resolve_input(input);
  const hfs::Method m = hfs::parse_method(method);
  const hfs::HomologyReport r = hfs::surgery_report(ks, hfs::SurgerySlope::make(p, q), m);
  if (json_path != "-") print_report(r);
  if (!json_path.empty()) emit_json(hfs::to_json(r), json_path);
  return kOk;
}

int run_sweep(const std::string& input, int pmax, int qmax, const std::string& json_path) {
  if (pmax < 1 || qmax < 1) throw hfs::SlopeError("sweep: pmax and qmax must be positive");
  const hfs::KnotSystem ks = resolve_input(input);
  const auto rows = hfs::sweep(ks, pmax, qmax);
  if (json_path != "-") {
    std::cout << std::setw(4) << "p" << std::setw(4) << "q" << std::setw(8) << "total" << "  homology dims\n";
    for (const auto& r : rows) {
      std::cout << std::setw(4) << r.p << std::setw(4) << r.q << std::setw(8) << r.total << "  "
                << join_dims(r.homology_dims) << '\n';
    }
  }
  if (!json_path.empty()) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) arr.push_back(hfs::to_json(r));
    emit_json(arr, json_path);
  }
  return kOk;
}

int run_model(int n, bool dump, const std::string& json_path) {
  const hfs::ModelSystem m = hfs::build_model(n);
  const hfs::ValidationReport rep = hfs::check_bordered(m.system);
  if (dump) {
    emit_json(hfs::to_json(m), json_path.empty() ? "-" : json_path);
  } else {
    const auto [hl, hm] = hfs::model_homology(n);
    std::cout << "model n=" << n << '\n';
    std::cout << "  L(" << n << "): " << m.system.L.dim() << " generators, homology " << hl << "\n   ";
    for (const auto& l : m.system.L.labels()) std::cout << ' ' << l;
    std::cout << "\n  M(" << n << "): " << m.system.M.dim() << " generators, homology " << hm << "\n   ";
    for (const auto& l : m.system.M.labels()) std::cout << ' ' << l;
    std::cout << '\n';
    for (const auto& c : rep.checks) std::cout << "  " << (c.passed ? "ok  " : "FAIL") << "  " << c.name << '\n';
    if (!json_path.empty()) emit_json(hfs::to_json(m), json_path);
  }
  return rep.passed() ? kOk : kMathFailure;
}

int run_random(std::uint64_t seed, const std::vector<std::size_t>& dims, const std::string& out) {
  const hfs::KnotSystem ks = hfs::random_valid(seed, {dims.at(0), dims.at(1), dims.at(2)});
  if (out == "-") {
    std::cout << hfs::to_json(ks).dump(2) << '\n';
  } else {
    hfs::save(ks, out);
    std::cout << "wrote " << ks.name << " to " << out << '\n';
  }
  return kOk;
}

int run_compare(const std::string& input, int nmax, const std::string& json_path) {
  const hfs::KnotSystem ks = resolve_input(input);
  const hfs::ComparisonReport rep = hfs::compare_table(ks, nmax);
  if (json_path != "-") {
    std::cout << "input " << rep.input << '\n';
    std::cout << std::setw(4) << "n" << std::setw(10) << "rational" << std::setw(8) << "splice" << std::setw(6)
              << "diff" << std::setw(14) << "rational_dim" << std::setw(12) << "splice_dim" << '\n';
    for (const auto& r : rep.rows) {
      std::cout << std::setw(4) << r.n << std::setw(10) << r.rational_total << std::setw(8) << r.splice_total
                << std::setw(6) << r.difference() << std::setw(14) << r.rational_dim << std::setw(12) << r.splice_dim
                << '\n';
    }
  }
  if (!json_path.empty()) emit_json(hfs::to_json(rep), json_path);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surgery complexes over GF(2) from knot systems"};
  app.require_subcommand(1);

  std::string input, json_path, method = "rational", out;
  long long p = 0, q = 1;
  int pmax = 0, qmax = 0, n = 0, nmax = 0;
  bool dump = false;
  std::uint64_t seed = 0;
  std::vector<std::size_t> dims;

  auto* validate_cmd = app.add_subcommand("validate", "Check a knot system against its hypotheses");
  validate_cmd->add_option("input", input, "knot-system file or @builtin")->required();
  validate_cmd->add_option("--json", json_path, "write a JSON report (- for stdout)");

  auto* surgery_cmd = app.add_subcommand("surgery", "Homology of p/q surgery");
  surgery_cmd->add_option("input", input, "knot-system file or @builtin")->required();
  surgery_cmd->add_option("--p", p, "numerator")->required();
  surgery_cmd->add_option("--q", q, "denominator");
  surgery_cmd->add_option("--method", method, "rational, zigzag or splice");
  surgery_cmd->add_option("--json", json_path, "write a JSON report (- for stdout)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Rational surgery over all coprime slopes in a box");
  sweep_cmd->add_option("input", input, "knot-system file or @builtin")->required();
  sweep_cmd->add_option("--pmax", pmax)->required();
  sweep_cmd->add_option("--qmax", qmax)->required();
  sweep_cmd->add_option("--json", json_path, "write JSON rows (- for stdout)");

  auto* model_cmd = app.add_subcommand("model", "Show the solid-torus model complexes L(n), M(n)");
  model_cmd->add_option("--n", n)->required();
  model_cmd->add_flag("--dump", dump, "print the complexes and maps as JSON");
  model_cmd->add_option("--json", json_path, "write the JSON dump to a file");

  auto* random_cmd = app.add_subcommand("random", "Generate a random valid knot system");
  random_cmd->add_option("--seed", seed)->required();
  random_cmd->add_option("--dims", dims, "h_inf,h_one,h_zero")->required()->delimiter(',')->expected(3);
  random_cmd->add_option("--out", out, "output file (- for stdout)")->required();

  auto* compare_cmd = app.add_subcommand("compare", "Rational formula versus splice construction for n = 1..nmax");
  compare_cmd->add_option("input", input, "knot-system file or @builtin")->required();
  compare_cmd->add_option("--nmax", nmax)->required();
  compare_cmd->add_option("--json", json_path, "write a JSON report (- for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*validate_cmd) return run_validate(input, json_path);
    if (*surgery_cmd) return run_surgery(input, p, q, method, json_path);
    if (*sweep_cmd) return run_sweep(input, pmax, qmax, json_path);
    if (*model_cmd) return run_model(n, dump, json_path);
    if (*random_cmd) return run_random(seed, dims, out);
    if (*compare_cmd) return run_compare(input, nmax, json_path);
  } catch (const hfs::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMathFailure;
  } catch (const hfs::InvalidComplexError& e) {
    std::cerr << "error: " << e.what();
    if (!e.witness().empty()) std::cerr << " (witness generator " << e.witness() << ")";
    std::cerr << '\n';
    return kMathFailure;
  } catch (const hfs::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMathFailure;
  }
  return kUsage;
}
