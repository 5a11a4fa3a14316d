// Command-line front end: property suites, CLT runs, Clark dumps, and CSV
// tables for correlation decay and variance statistics.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "innerclt/innerclt.hpp"
#include "innerclt/verify.hpp"

namespace fs = std::filesystem;
using namespace innerclt;
using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

// Every sign pattern of length 2..k_max on n = 1, 1+q, 1+2q, ...
std::vector<CorrelationSpec> sign_family(int k_max, int q) {
  std::vector<CorrelationSpec> fam;
  for (int k = 2; k <= k_max; ++k)
    for (int mask = 0; mask < (1 << k); ++mask) {
      std::vector<int> s(static_cast<std::size_t>(k)), n(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) {
        s[static_cast<std::size_t>(j)] = (mask >> j) & 1 ? -1 : 1;
        n[static_cast<std::size_t>(j)] = 1 + j * q;
      }
      fam.emplace_back(std::move(s), std::move(n));
    }
  return fam;
}

std::vector<CorrelationSpec> family_from_json(const json& j) {
  std::vector<CorrelationSpec> fam;
  for (const auto& e : j)
    fam.emplace_back(e.at("signs").get<std::vector<int>>(), e.at("indices").get<std::vector<int>>());
  return fam;
}

int run_simulate(const std::string& config_path, const std::string& out_dir) {
  const io::RunConfig cfg = io::load_config(config_path);
  const auto dist =
      simulate(cfg.map, cfg.coefficients, cfg.N, cfg.samples, cfg.seed, cfg.options);
  const auto report = gauss_report(dist, cfg.tolerances);

  fs::create_directories(out_dir);
  std::ofstream samples(fs::path(out_dir) / "samples.csv");
  io::write_samples_csv(samples, dist);
  json out = io::report_to_json(report);
  out["config"] = io::config_to_json(cfg);
  out["scale"] = dist.scale;
  std::ofstream(fs::path(out_dir) / "report.json") << out.dump(2) << '\n';
  std::cout << out.dump(2) << '\n';
  return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for Blaschke product dynamics"};
  app.require_subcommand(1);

  auto* verify_cmd = app.add_subcommand("verify", "Run a property suite");
  std::string suite;
  verify_cmd->add_option("suite", suite, "invariance | clark | correlations | variance")
      ->required()
      ->check(CLI::IsMember({"invariance", "clark", "correlations", "variance"}));

  auto* clt_cmd = app.add_subcommand("clt", "Monte Carlo CLT runs");
  clt_cmd->require_subcommand(1);
  auto* sim_cmd = clt_cmd->add_subcommand("simulate", "Sample T_N and compare with the Gaussian limit");
  std::string config_path, out_dir;
  sim_cmd->add_option("--config", config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--out", out_dir, "Output directory")->required();

  auto* clark_cmd = app.add_subcommand("clark", "Clark measures");
  clark_cmd->require_subcommand(1);
  auto* dump_cmd = clark_cmd->add_subcommand("dump", "Print the Clark measure as JSON");
  std::string map_path;
  double alpha = 0.0;
  dump_cmd->add_option("--map", map_path, "Blaschke product (JSON)")->required()->check(CLI::ExistingFile);
  dump_cmd->add_option("--alpha", alpha, "Angle of alpha")->required();

  auto* corr_cmd = app.add_subcommand("correlations", "Correlation tables");
  corr_cmd->require_subcommand(1);
  auto* decay_cmd = corr_cmd->add_subcommand("decay", "Fit the decay constant over a family, CSV out");
  std::string decay_map, family_path, decay_out;
  int k_max = 4, q = 2;
  decay_cmd->add_option("--map", decay_map, "Blaschke product (JSON)")->required()->check(CLI::ExistingFile);
  decay_cmd->add_option("--family", family_path, "Specs [{\"signs\":[..],\"indices\":[..]}]")->check(CLI::ExistingFile);
  decay_cmd->add_option("--k-max", k_max, "Largest k of the built-in sign family")->check(CLI::Range(2, 8));
  decay_cmd->add_option("--q", q, "Minimum gap")->check(CLI::PositiveNumber);
  decay_cmd->add_option("--out", decay_out, "CSV path (stdout if omitted)");

  auto* var_cmd = app.add_subcommand("variance", "Variance tables");
  var_cmd->require_subcommand(1);
  auto* table_cmd = var_cmd->add_subcommand("table", "Per-N statistics, CSV out");
  std::string coeff_path, var_out;
  std::vector<double> lambda{0.0, 0.0};
  std::vector<long> Ns;
  double eps = kDefaultEpsilon, eta = kDefaultEta;
  table_cmd->add_option("--coefficients", coeff_path, "Coefficient spec (JSON)")->required()->check(CLI::ExistingFile);
  table_cmd->add_option("--lambda", lambda, "f'(0) as re im")->expected(2);
  table_cmd->add_option("--N", Ns, "Values of N")->required();
  table_cmd->add_option("--epsilon", eps, "Split exponent epsilon");
  table_cmd->add_option("--eta", eta, "Growth exponent eta");
  table_cmd->add_option("--out", var_out, "CSV path (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify_cmd) {
      const auto r = verify::run(suite);
      verify::print(std::cout, r);
      return r.pass() ? 0 : 1;
    }
    if (*sim_cmd) return run_simulate(config_path, out_dir);
    if (*dump_cmd) {
      const auto f = io::map_from_json(read_json(map_path));
      std::cout << io::clark_to_json(clark_measure(f, CirclePoint(alpha))).dump(2) << '\n';
      return 0;
    }
    if (*decay_cmd) {
      const auto f = io::map_from_json(read_json(decay_map));
      const auto fam = family_path.empty() ? sign_family(k_max, q) : family_from_json(read_json(family_path));
      const auto d = decay_check(f, fam, q);
      if (decay_out.empty()) {
        io::write_decay_csv(std::cout, d);
      } else {
        std::ofstream out(decay_out);
        io::write_decay_csv(out, d);
      }
      std::cerr << "fitted C = " << d.fitted_C << (d.vacuous ? " (vacuous: f'(0) = 0)" : "") << '\n';
      return d.pass ? 0 : 1;
    }
    if (*table_cmd) {
      const json cj = read_json(coeff_path);
      long longest = 0;
      for (long N : Ns) longest = std::max(longest, N);
      const auto a = io::coefficients_from_json(cj, static_cast<std::size_t>(longest));
      const auto rows = variance_table(a, {lambda[0], lambda[1]}, Ns, eps, eta);
      if (var_out.empty()) {
        io::write_variance_csv(std::cout, rows);
      } else {
        std::ofstream out(var_out);
        io::write_variance_csv(out, rows);
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
