#pragma once

#include <string>
#include <vector>

#include "pensemble/circuit.hpp"
#include "pensemble/records.hpp"

namespace pens {

/// Monte Carlo over realizations. Realization r draws from RngStream
/// (master_seed, r); workers own their trajectories, so the record stream is
/// bit-identical for any thread count. Records come back sorted by
/// (realization, T, k). Realizations that throw are logged and skipped; the
/// run aborts if more than 1% fail.
std::vector<RunRecord> run_experiment(const CircuitConfig& cfg,
                                      int n_threads = 0);

/// Per-(T, k) mean, r.m.s. and standard error of delta, with theory columns
/// attached. Requires at least 2 realizations in every cell of the
/// (0..t_max) x (1..k_max) grid.
std::vector<AggregateRecord> aggregate(const std::vector<RunRecord>& records,
                                       const CircuitConfig& cfg);

/// Validation statistic: the minimum of delta^(k+1) - delta^(k) over all
/// (realization, depth) groups of a sorted record stream. Non-negative up
/// to rounding (>= -1e-9) for any correctly built ensemble.
double min_monotonicity_gap(const std::vector<RunRecord>& records);

/// Fig-2-style plot data. Panels a/b/c: delta^(k) vs T (long format).
/// Panels d/e/f: delta^(k)/delta^(1) vs k at the first/second/third entry of
/// ratio_depths, with the f(k, d_A) reference attached. One CSV per panel,
/// provenance in header comments. Returns the emitted paths.
std::vector<std::string> emit_plot_data(
    const std::vector<AggregateRecord>& aggregates, const CircuitConfig& cfg,
    const std::vector<std::string>& panels,
    const std::vector<Index>& ratio_depths, const std::string& out_dir);

/// Convenience wrapper: run, then persist config.json + records.csv in
/// out_dir.
void run_and_persist(const CircuitConfig& cfg, const std::string& out_dir,
                     int n_threads = 0);

}  // namespace pens
