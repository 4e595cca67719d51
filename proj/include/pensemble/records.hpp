#pragma once

#include <string>
#include <vector>

#include "pensemble/circuit.hpp"
#include "pensemble/common.hpp"

namespace pens {

/// One measured point: realization r, circuit depth T, moment order k.
struct RunRecord {
  Index realization = 0;
  Index depth = 0;  // T
  Index k = 1;
  double delta_k = 0.0;
  double frame_potential = 0.0;
  double purity = 0.0;
  double s2_bits = 0.0;
  double discarded_mass = 0.0;
};

/// Per-(T, k) aggregate with the matching closed-form predictions attached.
struct AggregateRecord {
  Index depth = 0;
  Index k = 1;
  double mean_delta = 0.0;
  double rms_delta = 0.0;
  double stderr_delta = 0.0;  // standard error of the mean
  Index n = 0;
  double theory_f_ratio = 0.0;
  double theory_haar_floor = 0.0;
  double theory_purity = 0.0;
};

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);
double parse_double(const std::string& text);

extern const char* kRecordCsvHeader;
extern const char* kAggregateCsvHeader;

void write_records_csv(const std::string& path,
                       const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_csv(const std::string& path);

/// Aggregate files carry provenance comment lines ("# key: value") before
/// the column header.
void write_aggregates_csv(const std::string& path,
                          const std::vector<AggregateRecord>& aggregates,
                          const std::vector<std::string>& provenance);
std::vector<AggregateRecord> read_aggregates_csv(
    const std::string& path, std::vector<std::string>* provenance = nullptr);

/// Circuit configuration <-> JSON (mirrors the CLI flags).
std::string config_to_json(const CircuitConfig& cfg);
CircuitConfig config_from_json(const std::string& json_text);
void write_config_json(const std::string& path, const CircuitConfig& cfg);
CircuitConfig read_config_json(const std::string& path);

}  // namespace pens
