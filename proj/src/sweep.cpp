#include "locality_sched/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "locality_sched/simulation.hpp"

namespace locsched {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

ArrivalVector assemble(const ExperimentConfig& cfg, double scale) {
  ArrivalVector arr;
  arr.reserve(cfg.types.size());
  for (std::size_t i = 0; i < cfg.types.size(); ++i)
    arr.push_back({cfg.types[i], cfg.base_rates[i] * scale});
  return arr;
}

PolicySpec make_spec(const PolicyConfig& pc, const ExperimentConfig& cfg,
                     const std::vector<double>& scaled_rates) {
  PolicySpec spec;
  spec.kind = pc.kind;
  spec.theta = pc.theta;
  if (!pc.gcmu_coefficients.empty()) {
    spec.gcmu_coefficients.assign(cfg.types.size(), 1.0);
    for (const auto& [type, c] : pc.gcmu_coefficients) {
      const auto it = std::lower_bound(cfg.types.begin(), cfg.types.end(), type);
      if (it == cfg.types.end() || !(*it == type))
        throw std::invalid_argument("gcmu coefficients: unknown task type " + type.label());
      spec.gcmu_coefficients[static_cast<std::size_t>(it - cfg.types.begin())] = c;
    }
  }
  if (pc.kind == PolicyKind::StaticLpSplit) {
    ArrivalVector arr;
    for (std::size_t i = 0; i < cfg.types.size(); ++i)
      arr.push_back({cfg.types[i], scaled_rates[i]});
    spec.lp_split = solve_capacity_lp(cfg.topo, cfg.svc, arr).decomposition;
  }
  return spec;
}

}  // namespace

const char* const kSweepCsvHeader =
    "policy,rho,seed,mean_completion_time,stability_slope,verdict,local_share,rack_share,"
    "remote_share,final_total_queue";

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  const double rho_star = max_stable_scaling(cfg.topo, cfg.svc, assemble(cfg, 1.0));

  std::vector<SweepRow> rows;
  for (const auto& pc : cfg.policies) {
    for (double rho : cfg.sweep_rho) {
      const double scale = rho * rho_star;
      std::vector<double> scaled_rates;
      scaled_rates.reserve(cfg.base_rates.size());
      for (double r : cfg.base_rates) scaled_rates.push_back(r * scale);

      const PolicySpec spec = make_spec(pc, cfg, scaled_rates);
      for (std::uint64_t seed : cfg.seeds) {
        SimSetup setup{cfg.topo, cfg.svc, cfg.types, scaled_rates, cfg.arrivals, spec};
        SimOptions opts;
        opts.horizon = cfg.horizon;
        opts.warmup = cfg.warmup;
        opts.seed = seed;
        opts.trace_stride = cfg.trace_stride > 0 ? cfg.trace_stride : 0;
        opts.random_schedule_order = cfg.random_schedule_order;
        MetricsBundle m = run_simulation(setup, opts);
        if (!m.stability)
          throw std::runtime_error(
              "run_sweep: horizon/trace_stride give too few trace samples for a stability "
              "verdict; use horizon >= 200 with the default stride");
        rows.push_back({policy_kind_name(pc.kind), rho, seed, std::move(m)});
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.policy != b.policy) return a.policy < b.policy;
    if (a.rho != b.rho) return a.rho < b.rho;
    return a.seed < b.seed;
  });
  return rows;
}

std::string format_sweep_row(const SweepRow& row) {
  const MetricsBundle& m = row.metrics;
  std::string line = row.policy;
  line += ',' + fmt("%g", row.rho);
  line += ',' + std::to_string(row.seed);
  line += ',' + fmt("%.6f", m.mean_completion_time);
  line += ',' + fmt("%.6e", m.stability ? m.stability->slope : 0.0);
  line += ',';
  line += m.stability ? to_string(m.stability->verdict) : "suspect";
  line += ',' + fmt("%.6f", m.local_share());
  line += ',' + fmt("%.6f", m.rack_share());
  line += ',' + fmt("%.6f", m.remote_share());
  line += ',' + std::to_string(m.final_total_queue);
  return line;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const auto& row : rows) {
    out += format_sweep_row(row);
    out += '\n';
  }
  return out;
}

std::string capacity_report(const ExperimentConfig& cfg) {
  const auto arr = assemble(cfg, 1.0);
  bool any_positive = false;
  for (const auto& tr : arr) any_positive |= tr.rate > 0.0;
  if (!any_positive)
    throw std::invalid_argument("capacity: arrival vector must have a positive rate");

  const CapacitySolution sol = solve_capacity_lp(cfg.topo, cfg.svc, arr);
  std::string out;
  out += "z_star," + fmt("%.9f", sol.z_star) + '\n';
  out += "rho_star," + fmt("%.9f", 1.0 / sol.z_star) + '\n';
  out += "task_type,server,rate\n";
  const auto& d = sol.decomposition;
  for (std::size_t t = 0; t < d.types.size(); ++t)
    for (std::size_t s = 0; s < d.split[t].size(); ++s)
      out += d.types[t].label() + ',' + std::to_string(s + 1) + ',' +
             fmt("%.9f", d.split[t][s]) + '\n';
  return out;
}

}  // namespace locsched
