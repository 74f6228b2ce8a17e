#include "ledp/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "ledp/baselines.hpp"
#include "ledp/kcore.hpp"
#include "ledp/ledger.hpp"
#include "ledp/metrics.hpp"
#include "ledp/noise.hpp"
#include "ledp/sim.hpp"
#include "ledp/triangle.hpp"

namespace ledp {

namespace {

std::string format_value(double v) {
  // Shortest representation that round-trips exactly.
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ec == std::errc{} ? end : buf);
}

struct RowSink {
  const RunConfig* cfg;
  double eps;
  MetricsReport* report;

  void emit(const std::string& run, const std::string& metric, const std::string& value) {
    report->rows.push_back(MetricRow{cfg->algo,
                                     cfg->dataset_name,
                                     eps,
                                     cfg->fraction,
                                     cfg->bias,
                                     cfg->eta,
                                     cfg->workers,
                                     cfg->seed,
                                     run,
                                     metric,
                                     value});
  }
  void emit(const std::string& run, const std::string& metric, double value) {
    emit(run, metric, format_value(value));
  }
};

struct ApproxFactors {
  double avg, p80, p95, max;
};

ApproxFactors approx_factors(const std::vector<double>& estimates,
                             const CoreLabeling& cores) {
  std::vector<double> factors(estimates.size());
  double sum = 0.0;
  for (std::size_t v = 0; v < estimates.size(); ++v) {
    factors[v] = node_approx_factor(estimates[v], cores.core[v]);
    sum += factors[v];
  }
  ApproxFactors f{};
  f.avg = sum / static_cast<double>(factors.size());
  f.p80 = nearest_rank_percentile(factors, 80.0);
  f.p95 = nearest_rank_percentile(factors, 95.0);
  f.max = nearest_rank_percentile(factors, 100.0);
  return f;
}

void dump_estimates_json(const Graph& g, const std::vector<double>& estimates,
                         const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::array();
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    j.push_back({{"id", g.original_id(v)}, {"estimate", estimates[v]}});
  }
  std::ofstream out(path);
  out << j.dump() << "\n";
}

void dump_trace_json(const KcoreResult& res, const std::filesystem::path& path) {
  if (!res.trace) return;
  nlohmann::json j;
  j["levels_per_group"] = res.params.levels_per_group;
  j["rounds"] = nlohmann::json::array();
  for (const auto& snapshot : *res.trace) j["rounds"].push_back(snapshot);
  std::ofstream out(path);
  out << j.dump() << "\n";
}

}  // namespace

bool known_algo(const std::string& algo) {
  return algo == "kcored" || algo == "tcount" || algo == "kcore-baseline" ||
         algo == "kcore-rr" || algo == "tcount-rr";
}

MetricsReport run_experiment(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  if (!known_algo(cfg.algo)) throw std::invalid_argument("unknown algo: " + cfg.algo);
  if (cfg.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (cfg.dataset_name.empty()) cfg.dataset_name = cfg.dataset.stem().string();

  const Graph g = load_graph(cfg.dataset);
  const bool is_kcore_family =
      cfg.algo == "kcored" || cfg.algo == "kcore-baseline" || cfg.algo == "kcore-rr";
  const CoreLabeling cores = exact_core_numbers(g);
  std::uint64_t exact_triangles = 0;
  if (!is_kcore_family) exact_triangles = exact_triangle_count(g);

  MetricsReport report;
  for (double eps : cfg.eps_values) {
    RowSink sink{&cfg, eps, &report};
    const TheoreticalBounds bounds =
        theoretical_bounds(g.max_degree(), cores.degeneracy, eps, cfg.eta);
    std::map<std::string, std::vector<double>> agg;
    auto record = [&](const std::string& run, const std::string& metric, double value) {
      sink.emit(run, metric, value);
      agg[metric].push_back(value);
    };

    for (std::uint32_t run = 0; run < cfg.runs; ++run) {
      const std::string run_id = std::to_string(run);
      const std::uint64_t run_seed = derive_run_seed(cfg.seed, run);
      const auto deadline = std::chrono::steady_clock::now() +
                            std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                std::chrono::duration<double>(cfg.timeout_seconds));
      BudgetLedger ledger(g.num_nodes());
      Mechanisms mech(run_seed, cfg.noiseless);
      const auto wall_start = std::chrono::steady_clock::now();
      try {
        if (cfg.algo == "kcored" || cfg.algo == "kcore-baseline") {
          Cluster cluster(g, make_partition(g.num_nodes(), cfg.workers), ledger, deadline);
          KcoreResult res;
          if (cfg.algo == "kcored") {
            KcoreConfig kc;
            kc.eps = eps;
            kc.fraction = cfg.fraction;
            kc.bias = cfg.bias;
            kc.eta = cfg.eta;
            kc.noiseless = cfg.noiseless;
            kc.keep_trace = !cfg.lds_trace.empty();
            res = run_kcore(cluster, mech, kc);
          } else {
            res = run_kcore_baseline(cluster, mech, eps, cfg.eta);
          }
          ledger.assert_within(eps);
          const ApproxFactors f = approx_factors(res.estimates, cores);
          record(run_id, "approx_factor_avg", f.avg);
          record(run_id, "approx_factor_p80", f.p80);
          record(run_id, "approx_factor_p95", f.p95);
          record(run_id, "approx_factor_max", f.max);
          record(run_id, "level_rounds", static_cast<double>(res.rounds));
          record(run_id, "round_cap", static_cast<double>(res.round_cap));
          record(run_id, "max_threshold", static_cast<double>(res.max_threshold));
          record(run_id, "bias_cut_exceeded", static_cast<double>(res.bias_cut_exceeded));
          record(run_id, "rounds", static_cast<double>(cluster.stats().rounds));
          record(run_id, "messages", static_cast<double>(cluster.stats().messages));
          record(run_id, "bytes", static_cast<double>(cluster.stats().bytes));
          record(run_id, "lambda", res.params.lambda);
          if (!cfg.estimates_out.empty()) dump_estimates_json(g, res.estimates, cfg.estimates_out);
          if (!cfg.lds_trace.empty()) dump_trace_json(res, cfg.lds_trace);
        } else if (cfg.algo == "kcore-rr") {
          auto res = run_kcore_rr(g, mech, eps, ledger, cfg.rr_guard_nodes, deadline);
          ledger.assert_within(eps);
          const ApproxFactors f = approx_factors(res.estimates, cores);
          record(run_id, "approx_factor_avg", f.avg);
          record(run_id, "approx_factor_p80", f.p80);
          record(run_id, "approx_factor_p95", f.p95);
          record(run_id, "approx_factor_max", f.max);
          record(run_id, "noisy_edges", static_cast<double>(res.noisy_edges));
          record(run_id, "rounds", 1.0);
          record(run_id, "messages", static_cast<double>(g.num_nodes()));
          record(run_id, "bytes",
                 static_cast<double>((static_cast<std::uint64_t>(g.num_nodes()) *
                                          (g.num_nodes() - 1) / 2 + 7) / 8));
          if (!cfg.estimates_out.empty()) dump_estimates_json(g, res.estimates, cfg.estimates_out);
        } else if (cfg.algo == "tcount") {
          Cluster cluster(g, make_partition(g.num_nodes(), cfg.workers), ledger, deadline);
          TriangleConfig tc;
          tc.eps = eps;
          tc.fraction = cfg.fraction;
          tc.bias = cfg.bias;
          tc.eta = cfg.eta;
          tc.noiseless = cfg.noiseless;
          tc.rr_streaming = cfg.rr_streaming;
          tc.max_materialized_nodes = cfg.rr_guard_nodes;
          auto res = run_triangle(g, cluster, mech, tc);
          ledger.assert_within(eps, &res.ordering_stage.ordering.rank);
          const TriangleMetrics tm =
              triangle_metrics(res.delta, static_cast<double>(exact_triangles));
          record(run_id, "delta", res.delta);
          record(run_id, "exact_triangles", static_cast<double>(exact_triangles));
          record(run_id, "relative_error", tm.relative_error);
          record(run_id, "multiplicative_factor", tm.multiplicative_factor);
          record(run_id, "dmax", static_cast<double>(res.dmax));
          record(run_id, "truncated_nodes", static_cast<double>(res.truncated_nodes));
          record(run_id, "rounds", static_cast<double>(cluster.stats().rounds));
          record(run_id, "messages", static_cast<double>(cluster.stats().messages));
          record(run_id, "bytes", static_cast<double>(cluster.stats().bytes));
        } else {  // tcount-rr
          auto res = run_tcount_rr(g, mech, eps, ledger, cfg.rr_guard_nodes, deadline);
          ledger.assert_within(eps);
          const TriangleMetrics tm =
              triangle_metrics(res.delta, static_cast<double>(exact_triangles));
          record(run_id, "delta", res.delta);
          record(run_id, "exact_triangles", static_cast<double>(exact_triangles));
          record(run_id, "relative_error", tm.relative_error);
          record(run_id, "multiplicative_factor", tm.multiplicative_factor);
          record(run_id, "noisy_edges", static_cast<double>(res.noisy_edges));
          record(run_id, "rounds", 1.0);
          record(run_id, "messages", static_cast<double>(g.num_nodes()));
          record(run_id, "bytes",
                 static_cast<double>((static_cast<std::uint64_t>(g.num_nodes()) *
                                          (g.num_nodes() - 1) / 2 + 7) / 8));
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
                .count();
        record(run_id, "wall_time_s", wall);
        record(run_id, "bound_noiseless", bounds.noiseless);
        record(run_id, "bound_with_noise", bounds.with_noise);
        if (!cfg.ledger_dump.empty()) {
          std::ofstream out(cfg.ledger_dump);
          ledger.dump_json(out);
        }
      } catch (const RunTimeout&) {
        sink.emit(run_id, "status", "TIMEOUT");
        report.run_errors = true;
      } catch (const GuardSkip&) {
        sink.emit(run_id, "status", "SKIPPED(OOM-guard)");
      }
    }

    for (const auto& [metric, values] : agg) {
      double sum = 0.0;
      for (double v : values) sum += v;
      sink.emit("agg", metric, sum / static_cast<double>(values.size()));
    }
  }
  return report;
}

void write_csv(const MetricsReport& report, std::ostream& out) {
  out << "algo,dataset,eps,f,b,eta,workers,seed,run,metric,value\n";
  for (const auto& r : report.rows) {
    out << r.algo << ',' << r.dataset << ',' << format_value(r.eps) << ','
        << format_value(r.fraction) << ',' << format_value(r.bias) << ','
        << format_value(r.eta) << ',' << r.workers << ',' << r.seed << ',' << r.run << ','
        << r.metric << ',' << r.value << "\n";
  }
}

void write_json(const MetricsReport& report, std::ostream& out) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"algo", r.algo},
                    {"dataset", r.dataset},
                    {"eps", r.eps},
                    {"f", r.fraction},
                    {"b", r.bias},
                    {"eta", r.eta},
                    {"workers", r.workers},
                    {"seed", r.seed},
                    {"run", r.run},
                    {"metric", r.metric},
                    {"value", r.value}});
  }
  out << rows.dump(2) << "\n";
}

}  // namespace ledp
