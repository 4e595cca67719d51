#include "pensemble/records.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "pensemble/errors.hpp"

namespace pens {

const char* kRecordCsvHeader =
    "realization,T,k,delta_k,frame_potential,purity,S2,discarded_mass";
const char* kAggregateCsvHeader =
    "T,k,mean_delta,rms_delta,stderr,n,theory_f_ratio,theory_haar_floor,"
    "theory_purity";

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto res =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw MissingDataError("parse_double: malformed number '" + text + "'");
  }
  return value;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ResourceError("cannot open for writing: " + path);
  }
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw MissingDataError("cannot open for reading: " + path);
  }
  return in;
}

}  // namespace

void write_records_csv(const std::string& path,
                       const std::vector<RunRecord>& records) {
  auto out = open_out(path);
  out << kRecordCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.realization << ',' << r.depth << ',' << r.k << ','
        << format_double(r.delta_k) << ',' << format_double(r.frame_potential)
        << ',' << format_double(r.purity) << ',' << format_double(r.s2_bits)
        << ',' << format_double(r.discarded_mass) << '\n';
  }
}

std::vector<RunRecord> read_records_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != kRecordCsvHeader) {
    throw MissingDataError("records csv: missing or unexpected header");
  }
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) {
      throw MissingDataError("records csv: malformed row '" + line + "'");
    }
    RunRecord r;
    r.realization = Index(std::stoll(f[0]));
    r.depth = Index(std::stoll(f[1]));
    r.k = Index(std::stoll(f[2]));
    r.delta_k = parse_double(f[3]);
    r.frame_potential = parse_double(f[4]);
    r.purity = parse_double(f[5]);
    r.s2_bits = parse_double(f[6]);
    r.discarded_mass = parse_double(f[7]);
    records.push_back(r);
  }
  return records;
}

void write_aggregates_csv(const std::string& path,
                          const std::vector<AggregateRecord>& aggregates,
                          const std::vector<std::string>& provenance) {
  auto out = open_out(path);
  for (const auto& note : provenance) {
    out << "# " << note << '\n';
  }
  out << kAggregateCsvHeader << '\n';
  for (const auto& a : aggregates) {
    out << a.depth << ',' << a.k << ',' << format_double(a.mean_delta) << ','
        << format_double(a.rms_delta) << ',' << format_double(a.stderr_delta)
        << ',' << a.n << ',' << format_double(a.theory_f_ratio) << ','
        << format_double(a.theory_haar_floor) << ','
        << format_double(a.theory_purity) << '\n';
  }
}

std::vector<AggregateRecord> read_aggregates_csv(
    const std::string& path, std::vector<std::string>* provenance) {
  auto in = open_in(path);
  std::string line;
  bool header_seen = false;
  std::vector<AggregateRecord> aggregates;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      if (provenance) provenance->push_back(line.substr(2));
      continue;
    }
    if (!header_seen) {
      if (line != kAggregateCsvHeader) {
        throw MissingDataError("aggregate csv: unexpected header");
      }
      header_seen = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 9) {
      throw MissingDataError("aggregate csv: malformed row '" + line + "'");
    }
    AggregateRecord a;
    a.depth = Index(std::stoll(f[0]));
    a.k = Index(std::stoll(f[1]));
    a.mean_delta = parse_double(f[2]);
    a.rms_delta = parse_double(f[3]);
    a.stderr_delta = parse_double(f[4]);
    a.n = Index(std::stoll(f[5]));
    a.theory_f_ratio = parse_double(f[6]);
    a.theory_haar_floor = parse_double(f[7]);
    a.theory_purity = parse_double(f[8]);
    aggregates.push_back(a);
  }
  if (!header_seen) {
    throw MissingDataError("aggregate csv: no header found");
  }
  return aggregates;
}

std::string config_to_json(const CircuitConfig& cfg) {
  nlohmann::json j;
  j["dA"] = cfg.d_A;
  j["dB1"] = cfg.d_B1;
  j["q"] = cfg.q;
  j["tmax"] = cfg.t_max;
  j["kmax"] = cfg.k_max;
  j["realizations"] = cfg.n_realizations;
  j["seed"] = cfg.master_seed;
  return j.dump(2);
}

CircuitConfig config_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  CircuitConfig cfg;
  if (j.contains("dA")) cfg.d_A = j["dA"].get<Index>();
  if (j.contains("dB1")) cfg.d_B1 = j["dB1"].get<Index>();
  if (j.contains("q")) cfg.q = j["q"].get<Index>();
  if (j.contains("L")) {
    const Index total = Index(1) << j["L"].get<int>();
    if (total % (cfg.d_A * cfg.d_B1) != 0) {
      throw InvalidDimensionError("config: 2^L not divisible by d_A*d_B1");
    }
    cfg.q = total / (cfg.d_A * cfg.d_B1);
  }
  if (j.contains("tmax")) cfg.t_max = j["tmax"].get<Index>();
  if (j.contains("kmax")) cfg.k_max = j["kmax"].get<Index>();
  if (j.contains("realizations"))
    cfg.n_realizations = j["realizations"].get<Index>();
  if (j.contains("seed")) cfg.master_seed = j["seed"].get<std::uint64_t>();
  cfg.validate();
  return cfg;
}

void write_config_json(const std::string& path, const CircuitConfig& cfg) {
  auto out = open_out(path);
  out << config_to_json(cfg) << '\n';
}

CircuitConfig read_config_json(const std::string& path) {
  auto in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

}  // namespace pens
