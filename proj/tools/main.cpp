// Command-line front end: run Monte Carlo experiments, aggregate record
// files, emit plot data, and drive the verification suites.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pensemble/errors.hpp"
#include "pensemble/experiment.hpp"
#include "pensemble/records.hpp"
#include "pensemble/verify.hpp"
#include "pensemble/version.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> provenance_lines(const pens::CircuitConfig& cfg) {
  return {
      "config: dA=" + std::to_string(cfg.d_A) +
          " dB1=" + std::to_string(cfg.d_B1) + " q=" + std::to_string(cfg.q) +
          " tmax=" + std::to_string(cfg.t_max) +
          " kmax=" + std::to_string(cfg.k_max) +
          " realizations=" + std::to_string(cfg.n_realizations),
      std::string("version: ") + pens::kVersionString,
      "seed: " + std::to_string(cfg.master_seed),
  };
}

pens::CircuitConfig config_from_provenance(
    const std::vector<std::string>& provenance) {
  pens::CircuitConfig cfg;
  for (const auto& line : provenance) {
    if (line.rfind("config: ", 0) == 0) {
      std::stringstream ss(line.substr(8));
      std::string token;
      while (ss >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const long long value = std::stoll(token.substr(eq + 1));
        if (key == "dA") cfg.d_A = value;
        else if (key == "dB1") cfg.d_B1 = value;
        else if (key == "q") cfg.q = value;
        else if (key == "tmax") cfg.t_max = value;
        else if (key == "kmax") cfg.k_max = value;
        else if (key == "realizations") cfg.n_realizations = value;
      }
    } else if (line.rfind("seed: ", 0) == 0) {
      cfg.master_seed = std::stoull(line.substr(6));
    }
  }
  return cfg;
}

void print_report(const pens::VerifyReport& report, bool verbose) {
  if (verbose) {
    for (const auto& line : report.info) {
      std::cout << "    " << line << '\n';
    }
  }
  for (const auto& check : report.checks) {
    std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.criterion
              << ": " << check.detail << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projected-ensemble design-distance simulator"};
  app.set_version_flag("--version", std::string(pens::kVersionString));
  app.require_subcommand(1);

  // run
  pens::Index opt_dA = 2, opt_dB1 = 2, opt_q = 1024, opt_L = 12;
  pens::Index opt_tmax = 20, opt_kmax = 7, opt_real = 500;
  std::uint64_t opt_seed = 1;
  std::string run_config_path, run_out = "out";
  int run_threads = 0;
  auto* run_cmd = app.add_subcommand("run", "Run the circuit Monte Carlo");
  run_cmd->add_option("--dA", opt_dA, "dimension of subsystem A");
  run_cmd->add_option("--dB1", opt_dB1, "dimension of the bottleneck B1");
  auto* q_opt = run_cmd->add_option("--q", opt_q, "dimension of the bath B2");
  run_cmd->add_option("--L", opt_L, "total qubit count; sets q = 2^L/(dA*dB1)")
      ->excludes(q_opt);
  run_cmd->add_option("--tmax", opt_tmax, "maximum circuit depth");
  run_cmd->add_option("--kmax", opt_kmax, "maximum moment order");
  run_cmd->add_option("--realizations", opt_real, "number of realizations");
  run_cmd->add_option("--seed", opt_seed, "master seed");
  run_cmd->add_option("--config", run_config_path,
                      "JSON config file (flags override it)");
  run_cmd->add_option("--out", run_out, "output directory");
  run_cmd->add_option("--threads", run_threads, "worker threads");

  // aggregate
  std::string agg_in, agg_out = "aggregate.csv";
  auto* agg_cmd = app.add_subcommand("aggregate", "Aggregate a run directory");
  agg_cmd->add_option("--in", agg_in,
                      "run directory (records.csv + config.json)")
      ->required();
  agg_cmd->add_option("--out", agg_out, "output aggregate CSV");

  // plot-data
  std::string plot_in, plot_out = "plots", plot_panels = "a,d,e,f";
  std::string ratio_depths_csv = "2,4,8";
  auto* plot_cmd =
      app.add_subcommand("plot-data", "Emit per-panel plot CSV files");
  plot_cmd->add_option("--in", plot_in, "aggregate CSV file")->required();
  plot_cmd->add_option("--panels", plot_panels, "comma list from a,b,c,d,e,f");
  plot_cmd->add_option("--ratio-times", ratio_depths_csv,
                       "depths for ratio panels d,e,f");
  plot_cmd->add_option("--out", plot_out, "output directory");

  // verify
  std::string suite, report_path;
  int verify_threads = 0;
  bool quiet = false;
  auto* verify_cmd = app.add_subcommand("verify", "Run an acceptance suite");
  verify_cmd
      ->add_option("--suite", suite,
                   "one of: invariants, oracle-small, gap-ratio, purity, "
                   "haar-floor, fig2, all")
      ->required();
  verify_cmd->add_option("--report", report_path, "write JSON report here");
  verify_cmd->add_option("--threads", verify_threads, "worker threads");
  verify_cmd->add_flag("--quiet", quiet, "suppress supporting numbers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints message/help
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      pens::CircuitConfig cfg;
      if (!run_config_path.empty()) {
        cfg = pens::read_config_json(run_config_path);
      }
      if (run_cmd->count("--dA")) cfg.d_A = opt_dA;
      if (run_cmd->count("--dB1")) cfg.d_B1 = opt_dB1;
      if (run_cmd->count("--q")) cfg.q = opt_q;
      if (run_cmd->count("--L")) {
        if (opt_L < 1 || opt_L > 62) {
          throw pens::InvalidDimensionError("--L out of range");
        }
        const pens::Index total = pens::Index(1) << opt_L;
        if (total % (cfg.d_A * cfg.d_B1) != 0) {
          throw pens::InvalidDimensionError("2^L not divisible by dA*dB1");
        }
        cfg.q = total / (cfg.d_A * cfg.d_B1);
      }
      if (run_cmd->count("--tmax")) cfg.t_max = opt_tmax;
      if (run_cmd->count("--kmax")) cfg.k_max = opt_kmax;
      if (run_cmd->count("--realizations")) cfg.n_realizations = opt_real;
      if (run_cmd->count("--seed")) cfg.master_seed = opt_seed;
      cfg.validate();
      pens::run_and_persist(cfg, run_out, run_threads);
      std::cout << "wrote " << run_out << "/records.csv and config.json\n";
      return kExitPass;
    }

    if (agg_cmd->parsed()) {
      const auto cfg = pens::read_config_json(agg_in + "/config.json");
      const auto records = pens::read_records_csv(agg_in + "/records.csv");
      const auto aggregates = pens::aggregate(records, cfg);
      auto provenance = provenance_lines(cfg);
      provenance.push_back(
          "validation: min k-monotonicity gap = " +
          pens::format_double(pens::min_monotonicity_gap(records)) +
          " (required >= -1e-9)");
      pens::write_aggregates_csv(agg_out, aggregates, provenance);
      std::cout << "wrote " << agg_out << '\n';
      return kExitPass;
    }

    if (plot_cmd->parsed()) {
      std::vector<std::string> provenance;
      const auto aggregates = pens::read_aggregates_csv(plot_in, &provenance);
      const pens::CircuitConfig cfg = config_from_provenance(provenance);
      std::vector<pens::Index> ratio_depths;
      for (const auto& token : split_list(ratio_depths_csv)) {
        ratio_depths.push_back(pens::Index(std::stoll(token)));
      }
      const auto paths = pens::emit_plot_data(
          aggregates, cfg, split_list(plot_panels), ratio_depths, plot_out);
      for (const auto& p : paths) std::cout << "wrote " << p << '\n';
      return kExitPass;
    }

    if (verify_cmd->parsed()) {
      std::vector<std::string> suites;
      if (suite == "all") {
        suites = pens::verify_suite_names();
      } else {
        suites.push_back(suite);
      }
      bool all_pass = true;
      std::string joined_json = "[";
      for (size_t i = 0; i < suites.size(); ++i) {
        const auto report = pens::verify(suites[i], verify_threads);
        print_report(report, !quiet);
        all_pass = all_pass && report.all_pass();
        joined_json += report.to_json();
        if (i + 1 < suites.size()) joined_json += ",";
      }
      joined_json += "]";
      if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw pens::ResourceError("cannot write " + report_path);
        out << joined_json << '\n';
      }
      std::cout << (all_pass ? "ALL PASS" : "FAILURES PRESENT") << '\n';
      return all_pass ? kExitPass : kExitFailure;
    }
  } catch (const pens::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
