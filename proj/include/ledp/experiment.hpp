#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ledp/graph.hpp"

namespace ledp {

struct RunConfig {
  std::string algo;  // kcored | tcount | kcore-baseline | kcore-rr | tcount-rr
  std::filesystem::path dataset;
  std::string dataset_name;  // defaults to the dataset file stem
  std::vector<double> eps_values{1.0};
  double fraction = 0.8;
  double bias = 8.0;
  double eta = 3.625;
  std::uint32_t workers = 8;
  std::uint32_t runs = 5;
  std::uint64_t seed = 1;
  double timeout_seconds = 4.0 * 3600.0;
  bool noiseless = false;
  bool rr_streaming = false;
  NodeId rr_guard_nodes = 100000;

  std::filesystem::path estimates_out;  // per-node estimate dump (JSON), optional
  std::filesystem::path ledger_dump;    // budget audit dump (JSON), optional
  std::filesystem::path lds_trace;      // per-round level dump (JSON), optional
};

/// One emitted metric. Aggregate rows carry run == "agg"; skipped or timed
/// out runs carry a single "status" metric instead of values.
struct MetricRow {
  std::string algo;
  std::string dataset;
  double eps = 0.0;
  double fraction = 0.0;
  double bias = 0.0;
  double eta = 0.0;
  std::uint32_t workers = 0;
  std::uint64_t seed = 0;
  std::string run;
  std::string metric;
  std::string value;
};

struct MetricsReport {
  std::vector<MetricRow> rows;
  bool run_errors = false;  // timeouts or aborted runs occurred
};

bool known_algo(const std::string& algo);

/// Loads the dataset, computes the exact oracles once, executes the seeded
/// repetitions for every requested eps, verifies the privacy ledger after
/// each run, and returns per-run plus aggregate rows.
MetricsReport run_experiment(const RunConfig& cfg);

/// Schema: algo,dataset,eps,f,b,eta,workers,seed,run,metric,value
void write_csv(const MetricsReport& report, std::ostream& out);
void write_json(const MetricsReport& report, std::ostream& out);

}  // namespace ledp
