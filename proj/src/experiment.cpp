#include "pensemble/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "pensemble/ensemble.hpp"
#include "pensemble/errors.hpp"
#include "pensemble/theory.hpp"
#include "pensemble/version.hpp"

namespace pens {

namespace {

int resolve_threads(int requested, Index n_jobs) {
  int n = requested > 0 ? requested
                        : int(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  return int(std::min<Index>(n, n_jobs));
}

}  // namespace

std::vector<RunRecord> run_experiment(const CircuitConfig& cfg,
                                      int n_threads) {
  cfg.validate();
  const Index n_real = cfg.n_realizations;
  std::vector<std::vector<RunRecord>> per_realization(static_cast<size_t>(n_real));
  std::atomic<Index> next{0};
  std::atomic<Index> failures{0};
  std::mutex log_mutex;

  auto worker = [&]() {
    while (true) {
      const Index r = next.fetch_add(1);
      if (r >= n_real) break;
      try {
        RngStream rng(cfg.master_seed, std::uint64_t(r));
        auto& records = per_realization[size_t(r)];
        records.reserve(size_t((cfg.t_max + 1) * cfg.k_max));
        evolve_and_snapshot(
            cfg, rng, [&](Index depth, const PureState& state) {
              const ProjectedEnsemble ens = project(state);
              const DensityMatrix rho = reduced_density_matrix_A(state);
              const PuritySummary ps = purity_and_renyi2(rho);
              for (Index k = 1; k <= cfg.k_max; ++k) {
                const MomentOperator mop = moment_operator(ens, k);
                RunRecord rec;
                rec.realization = r;
                rec.depth = depth;
                rec.k = k;
                rec.frame_potential = frame_potential(mop);
                rec.delta_k = delta_k(mop);
                rec.purity = ps.purity;
                rec.s2_bits = ps.s2_bits;
                rec.discarded_mass = ens.discarded_mass;
                records.push_back(rec);
              }
            });
      } catch (const std::exception& e) {
        failures.fetch_add(1);
        per_realization[size_t(r)].clear();
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << "realization " << r << " failed: " << e.what() << '\n';
      }
    }
  };

  const int threads = resolve_threads(n_threads, n_real);
  std::vector<std::thread> pool;
  pool.reserve(size_t(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  if (double(failures.load()) > 0.01 * double(n_real)) {
    throw NumericalError("run_experiment: more than 1% of realizations failed");
  }

  std::vector<RunRecord> records;
  records.reserve(size_t(n_real * (cfg.t_max + 1) * cfg.k_max));
  for (auto& block : per_realization) {
    records.insert(records.end(), block.begin(), block.end());
  }
  std::sort(records.begin(), records.end(),
            [](const RunRecord& a, const RunRecord& b) {
              return std::tie(a.realization, a.depth, a.k) <
                     std::tie(b.realization, b.depth, b.k);
            });
  return records;
}

std::vector<AggregateRecord> aggregate(const std::vector<RunRecord>& records,
                                       const CircuitConfig& cfg) {
  cfg.validate();
  struct Cell {
    double sum = 0.0;
    double sum_sq = 0.0;
    Index n = 0;
  };
  std::map<std::pair<Index, Index>, Cell> cells;
  for (const auto& r : records) {
    auto& c = cells[{r.depth, r.k}];
    c.sum += r.delta_k;
    c.sum_sq += r.delta_k * r.delta_k;
    ++c.n;
  }

  std::vector<AggregateRecord> out;
  for (Index depth = 0; depth <= cfg.t_max; ++depth) {
    for (Index k = 1; k <= cfg.k_max; ++k) {
      const auto it = cells.find({depth, k});
      if (it == cells.end() || it->second.n < 2) {
        throw MissingDataError("aggregate: cell (T=" + std::to_string(depth) +
                               ", k=" + std::to_string(k) +
                               ") has fewer than 2 records");
      }
      const Cell& c = it->second;
      const double n = double(c.n);
      AggregateRecord a;
      a.depth = depth;
      a.k = k;
      a.mean_delta = c.sum / n;
      a.rms_delta = std::sqrt(c.sum_sq / n);
      const double var =
          std::max(0.0, (c.sum_sq - c.sum * c.sum / n) / (n - 1.0));
      a.stderr_delta = std::sqrt(var / n);
      a.n = c.n;
      a.theory_f_ratio = f_ratio(k, cfg.d_A);
      a.theory_haar_floor = haar_baseline_delta(k, cfg.d_A, cfg.bath_dim());
      a.theory_purity = purity_theory(depth, cfg.d_A, cfg.d_B1);
      out.push_back(a);
    }
  }
  return out;
}

double min_monotonicity_gap(const std::vector<RunRecord>& records) {
  double worst = 0.0;
  for (size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    if (a.realization == b.realization && a.depth == b.depth &&
        b.k == a.k + 1) {
      worst = std::min(worst, b.delta_k - a.delta_k);
    }
  }
  return worst;
}

namespace {

std::vector<std::string> provenance_lines(const CircuitConfig& cfg) {
  return {
      "config: dA=" + std::to_string(cfg.d_A) +
          " dB1=" + std::to_string(cfg.d_B1) + " q=" + std::to_string(cfg.q) +
          " tmax=" + std::to_string(cfg.t_max) +
          " kmax=" + std::to_string(cfg.k_max) +
          " realizations=" + std::to_string(cfg.n_realizations),
      std::string("version: ") + kVersionString,
      "seed: " + std::to_string(cfg.master_seed),
  };
}

const AggregateRecord& cell_at(const std::vector<AggregateRecord>& aggregates,
                               Index depth, Index k) {
  for (const auto& a : aggregates) {
    if (a.depth == depth && a.k == k) return a;
  }
  throw MissingDataError("plot data: missing aggregate cell (T=" +
                         std::to_string(depth) + ", k=" + std::to_string(k) +
                         ")");
}

}  // namespace

std::vector<std::string> emit_plot_data(
    const std::vector<AggregateRecord>& aggregates, const CircuitConfig& cfg,
    const std::vector<std::string>& panels,
    const std::vector<Index>& ratio_depths, const std::string& out_dir) {
  if (aggregates.empty()) {
    throw MissingDataError("emit_plot_data: no aggregates");
  }
  std::filesystem::create_directories(out_dir);
  const auto provenance = provenance_lines(cfg);

  Index k_max = 0;
  for (const auto& a : aggregates) k_max = std::max(k_max, a.k);

  std::vector<std::string> emitted;
  for (const auto& panel : panels) {
    if (panel != "a" && panel != "b" && panel != "c" && panel != "d" &&
        panel != "e" && panel != "f") {
      throw std::invalid_argument("emit_plot_data: unknown panel '" + panel +
                                  "'");
    }
    const std::string path = out_dir + "/panel_" + panel + ".csv";
    if (panel == "a" || panel == "b" || panel == "c") {
      // Distance vs depth, one series per k.
      std::ofstream out(path);
      if (!out) throw ResourceError("cannot open " + path);
      for (const auto& note : provenance) out << "# " << note << '\n';
      out << "# panel: " << panel << " (delta_k vs T)\n";
      out << "T,k,mean_delta,rms_delta,stderr,theory_haar_floor,"
             "theory_purity\n";
      for (const auto& a : aggregates) {
        out << a.depth << ',' << a.k << ',' << format_double(a.mean_delta)
            << ',' << format_double(a.rms_delta) << ','
            << format_double(a.stderr_delta) << ','
            << format_double(a.theory_haar_floor) << ','
            << format_double(a.theory_purity) << '\n';
      }
    } else {
      const size_t slot = size_t(panel[0] - 'd');
      if (slot >= ratio_depths.size()) {
        throw std::invalid_argument("emit_plot_data: panel '" + panel +
                                    "' has no matching ratio depth");
      }
      const Index depth = ratio_depths[slot];
      const AggregateRecord& base = cell_at(aggregates, depth, 1);
      std::ofstream out(path);
      if (!out) throw ResourceError("cannot open " + path);
      for (const auto& note : provenance) out << "# " << note << '\n';
      out << "# panel: " << panel << " (delta_k/delta_1 vs k at T="
          << depth << ")\n";
      out << "k,ratio_mean,ratio_stderr,theory_f_ratio\n";
      for (Index k = 1; k <= k_max; ++k) {
        const AggregateRecord& a = cell_at(aggregates, depth, k);
        const double ratio = a.mean_delta / base.mean_delta;
        // Uncorrelated error propagation; realization correlations between
        // k and 1 make this an upper bound.
        const double rel_a = a.stderr_delta / a.mean_delta;
        const double rel_b = base.stderr_delta / base.mean_delta;
        const double se = ratio * std::sqrt(rel_a * rel_a + rel_b * rel_b);
        out << k << ',' << format_double(ratio) << ',' << format_double(se)
            << ',' << format_double(a.theory_f_ratio) << '\n';
      }
    }
    emitted.push_back(path);
  }
  return emitted;
}

void run_and_persist(const CircuitConfig& cfg, const std::string& out_dir,
                     int n_threads) {
  std::filesystem::create_directories(out_dir);
  write_config_json(out_dir + "/config.json", cfg);
  const auto records = run_experiment(cfg, n_threads);
  write_records_csv(out_dir + "/records.csv", records);
}

}  // namespace pens
