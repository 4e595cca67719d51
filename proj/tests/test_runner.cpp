#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <tuple>
#include <vector>

#include "pensemble/errors.hpp"
#include "pensemble/experiment.hpp"
#include "pensemble/records.hpp"
#include "pensemble/theory.hpp"
#include "pensemble/verify.hpp"

using namespace pens;

namespace {

CircuitConfig smoke_config() {
  CircuitConfig cfg;
  cfg.d_A = 2;
  cfg.d_B1 = 2;
  cfg.q = 8;
  cfg.t_max = 3;
  cfg.k_max = 3;
  cfg.n_realizations = 6;
  cfg.master_seed = 4242;
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("runner");

TEST_CASE("format_double round trips") {
  for (double x : {0.0, 1.0, 0.6, 1.0 / 3.0, 5e-05, 1e300, -2.5e-17,
                   0.1234567890123456}) {
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK_THROWS_AS(parse_double("not-a-number"), MissingDataError);
}

TEST_CASE("run_experiment smoke run produces bounded records") {
  CircuitConfig cfg;
  cfg.d_A = 2;
  cfg.d_B1 = 2;
  cfg.q = 1;
  cfg.t_max = 1;
  cfg.k_max = 1;
  cfg.n_realizations = 4;
  cfg.master_seed = 7;
  const auto records = run_experiment(cfg, 1);
  REQUIRE(records.size() == 4 * 2 * 1);
  for (const auto& r : records) {
    CHECK(std::isfinite(r.delta_k));
    CHECK(r.delta_k >= 0.0);
    CHECK(r.delta_k <= 1.0 + 1e-9);  // delta^(1) <= sqrt(d_A - 1)
    CHECK(r.frame_potential > 0.0);
    CHECK(r.frame_potential <= 1.0 + 1e-12);
    CHECK(r.purity > 0.0);
    CHECK(r.purity <= 1.0 + 1e-12);
    CHECK(r.s2_bits >= -1e-12);
  }
}

TEST_CASE("run_experiment is deterministic across worker counts") {
  const auto cfg = smoke_config();
  const auto one = run_experiment(cfg, 1);
  const auto two = run_experiment(cfg, 2);
  REQUIRE(one.size() == two.size());
  for (size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].realization == two[i].realization);
    CHECK(one[i].depth == two[i].depth);
    CHECK(one[i].k == two[i].k);
    CHECK(one[i].delta_k == two[i].delta_k);
    CHECK(one[i].frame_potential == two[i].frame_potential);
    CHECK(one[i].purity == two[i].purity);
    CHECK(one[i].s2_bits == two[i].s2_bits);
    CHECK(one[i].discarded_mass == two[i].discarded_mass);
  }
}

TEST_CASE("records are sorted and monotone in k per (realization, depth)") {
  const auto records = run_experiment(smoke_config(), 2);
  for (size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    const bool sorted =
        std::tie(a.realization, a.depth, a.k) <
        std::tie(b.realization, b.depth, b.k);
    CHECK(sorted);
    if (a.realization == b.realization && a.depth == b.depth) {
      CHECK(b.delta_k >= a.delta_k - 1e-9);
    }
  }
  CHECK(min_monotonicity_gap(records) >= -1e-9);
}

TEST_CASE("aggregate arithmetic on constant and two-point cells") {
  CircuitConfig cfg;
  cfg.d_A = 2;
  cfg.d_B1 = 2;
  cfg.q = 4;
  cfg.t_max = 0;
  cfg.k_max = 1;
  cfg.n_realizations = 2;

  std::vector<RunRecord> constant(2);
  for (Index r = 0; r < 2; ++r) {
    constant[size_t(r)].realization = r;
    constant[size_t(r)].depth = 0;
    constant[size_t(r)].k = 1;
    constant[size_t(r)].delta_k = 0.25;
    constant[size_t(r)].purity = 0.8;
  }
  auto aggs = aggregate(constant, cfg);
  REQUIRE(aggs.size() == 1);
  CHECK(aggs[0].mean_delta == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(aggs[0].rms_delta == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(aggs[0].stderr_delta == doctest::Approx(0.0));
  CHECK(aggs[0].n == 2);

  std::vector<RunRecord> pair = constant;
  pair[0].delta_k = 0.1;
  pair[1].delta_k = 0.3;
  aggs = aggregate(pair, cfg);
  CHECK(aggs[0].mean_delta == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(aggs[0].rms_delta ==
        doctest::Approx(std::sqrt((0.01 + 0.09) / 2.0)).epsilon(1e-15));
  CHECK(aggs[0].rms_delta >= aggs[0].mean_delta - 1e-12);

  // Theory columns come from the closed forms.
  CHECK(aggs[0].theory_f_ratio == doctest::Approx(f_ratio(1, 2)));
  CHECK(aggs[0].theory_haar_floor ==
        doctest::Approx(haar_baseline_delta(1, 2, 8)));
  CHECK(aggs[0].theory_purity == doctest::Approx(purity_theory(0, 2, 2)));
}

TEST_CASE("aggregate rejects missing cells") {
  CircuitConfig cfg;
  cfg.d_A = 2;
  cfg.d_B1 = 2;
  cfg.q = 4;
  cfg.t_max = 1;
  cfg.k_max = 1;
  cfg.n_realizations = 2;
  std::vector<RunRecord> records(2);
  for (Index r = 0; r < 2; ++r) {
    records[size_t(r)].realization = r;
    records[size_t(r)].depth = 0;  // depth 1 missing entirely
    records[size_t(r)].k = 1;
    records[size_t(r)].delta_k = 0.5;
  }
  CHECK_THROWS_AS(aggregate(records, cfg), MissingDataError);
}

TEST_CASE("aggregate rms >= mean on real data") {
  const auto cfg = smoke_config();
  const auto aggs = aggregate(run_experiment(cfg, 2), cfg);
  for (const auto& a : aggs) {
    CHECK(a.rms_delta >= a.mean_delta - 1e-12);
    CHECK(a.stderr_delta >= 0.0);
  }
}

TEST_CASE("record and aggregate CSV files round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "pens_csv_test";
  std::filesystem::create_directories(dir);
  const auto cfg = smoke_config();
  const auto records = run_experiment(cfg, 2);

  const std::string rec_path = (dir / "records.csv").string();
  write_records_csv(rec_path, records);
  const auto reread = read_records_csv(rec_path);
  REQUIRE(reread.size() == records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(reread[i].delta_k == records[i].delta_k);
    CHECK(reread[i].frame_potential == records[i].frame_potential);
    CHECK(reread[i].purity == records[i].purity);
    CHECK(reread[i].s2_bits == records[i].s2_bits);
    CHECK(reread[i].discarded_mass == records[i].discarded_mass);
  }

  const auto aggs = aggregate(records, cfg);
  const std::string agg_path = (dir / "aggregate.csv").string();
  write_aggregates_csv(agg_path, aggs, {"config: test", "seed: 4242"});
  std::vector<std::string> provenance;
  const auto aggs_back = read_aggregates_csv(agg_path, &provenance);
  REQUIRE(aggs_back.size() == aggs.size());
  REQUIRE(provenance.size() == 2);
  CHECK(provenance[1] == "seed: 4242");
  for (size_t i = 0; i < aggs.size(); ++i) {
    CHECK(aggs_back[i].mean_delta == aggs[i].mean_delta);
    CHECK(aggs_back[i].rms_delta == aggs[i].rms_delta);
    CHECK(aggs_back[i].stderr_delta == aggs[i].stderr_delta);
    CHECK(aggs_back[i].theory_f_ratio == aggs[i].theory_f_ratio);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv readers reject malformed files") {
  const auto dir = std::filesystem::temp_directory_path() / "pens_bad_csv";
  std::filesystem::create_directories(dir);
  const std::string bad_records = (dir / "bad_records.csv").string();
  {
    std::ofstream out(bad_records);
    out << "wrong,header\n1,2\n";
  }
  CHECK_THROWS_AS(read_records_csv(bad_records), MissingDataError);

  const std::string bad_agg = (dir / "bad_agg.csv").string();
  {
    std::ofstream out(bad_agg);
    out << "# provenance only, no header\n";
  }
  CHECK_THROWS_AS(read_aggregates_csv(bad_agg), MissingDataError);
  CHECK_THROWS_AS(read_records_csv((dir / "missing.csv").string()),
                  MissingDataError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("config json round trips and accepts L") {
  CircuitConfig cfg = smoke_config();
  const auto text = config_to_json(cfg);
  const auto back = config_from_json(text);
  CHECK(back.d_A == cfg.d_A);
  CHECK(back.d_B1 == cfg.d_B1);
  CHECK(back.q == cfg.q);
  CHECK(back.t_max == cfg.t_max);
  CHECK(back.k_max == cfg.k_max);
  CHECK(back.n_realizations == cfg.n_realizations);
  CHECK(back.master_seed == cfg.master_seed);

  const auto with_l = config_from_json(R"({"dA":2,"dB1":2,"L":12})");
  CHECK(with_l.q == 1024);

  CHECK_THROWS_AS(config_from_json(R"({"dA":3,"dB1":2,"L":12})"),
                  InvalidDimensionError);
}

TEST_CASE("emit_plot_data panels, provenance and round trip") {
  const auto cfg = smoke_config();
  const auto aggs = aggregate(run_experiment(cfg, 2), cfg);
  const auto dir =
      (std::filesystem::temp_directory_path() / "pens_plot_test").string();

  const auto paths = emit_plot_data(aggs, cfg, {"a", "d"}, {2}, dir);
  REQUIRE(paths.size() == 2);

  // Provenance header carries config, version and seed.
  const std::string panel_a = read_file(paths[0]);
  CHECK(panel_a.find("# config: dA=2 dB1=2 q=8") != std::string::npos);
  CHECK(panel_a.find("# version: ") != std::string::npos);
  CHECK(panel_a.find("# seed: 4242") != std::string::npos);

  // Ratio panel: theory column equals f_ratio and values parse back.
  std::ifstream in(paths[1]);
  std::string line;
  bool header_done = false;
  Index k = 1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_done) {
      CHECK(line == "k,ratio_mean,ratio_stderr,theory_f_ratio");
      header_done = true;
      continue;
    }
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 4);
    CHECK(parse_double(fields[3]) == f_ratio(k, cfg.d_A));
    ++k;
  }
  CHECK(k == cfg.k_max + 1);

  CHECK_THROWS_AS(emit_plot_data(aggs, cfg, {"z"}, {2}, dir),
                  std::invalid_argument);
  CHECK_THROWS_AS(emit_plot_data({}, cfg, {"a"}, {2}, dir), MissingDataError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("delta curve decays exponentially then flattens on the Haar floor") {
  CircuitConfig cfg;
  cfg.d_A = 2;
  cfg.d_B1 = 2;
  cfg.q = 64;
  cfg.t_max = 8;
  cfg.k_max = 1;
  cfg.n_realizations = 200;
  cfg.master_seed = 616;
  const auto aggs = aggregate(run_experiment(cfg, 2), cfg);
  auto mean_at = [&](Index depth) {
    for (const auto& a : aggs) {
      if (a.depth == depth && a.k == 1) return a.mean_delta;
    }
    REQUIRE(false);
    return 0.0;
  };
  // Early window: clear exponential decay (infinite-bath rate is sqrt(5)).
  CHECK(mean_at(1) / mean_at(2) > 1.3);
  CHECK(mean_at(2) / mean_at(3) > 1.3);
  // Late window: flat, and parked near the finite-size floor.
  const double floor1 = haar_baseline_delta(1, cfg.d_A, cfg.bath_dim());
  CHECK(std::abs(mean_at(7) - mean_at(8)) / mean_at(8) < 0.08);
  CHECK(mean_at(8) / floor1 > 0.80);
  CHECK(mean_at(8) / floor1 < 1.05);
}

TEST_CASE("verify rejects unknown suites") {
  CHECK_THROWS_AS(verify("no-such-suite"), std::invalid_argument);
}

TEST_CASE("verify report serializes to machine-readable json") {
  const auto report = verify("oracle-small");
  const auto j = nlohmann::json::parse(report.to_json());
  CHECK(j["suite"] == "oracle-small");
  CHECK(j["pass"] == true);
  REQUIRE(j["checks"].is_array());
  CHECK(j["checks"][0].contains("criterion"));
  CHECK(j["checks"][0].contains("pass"));
  CHECK(j["checks"][0].contains("detail"));
  CHECK(j["info"].is_array());
}

TEST_CASE("verify oracle-small passes") {
  const auto report = verify("oracle-small");
  CHECK(report.all_pass());
  REQUIRE(report.checks.size() == 1);
  CHECK(report.checks[0].criterion.find("C5") != std::string::npos);
}

TEST_SUITE_END();
