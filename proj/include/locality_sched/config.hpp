#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locality_sched/capacity.hpp"
#include "locality_sched/policies.hpp"
#include "locality_sched/simulation.hpp"

namespace locsched {

// Policy selection as written in the config; the runnable PolicySpec is
// assembled per run (static_lp_split needs the decomposition of the scaled
// arrival vector).
struct PolicyConfig {
  PolicyKind kind = PolicyKind::JsqMw2;
  double theta = 1.0;
  std::vector<std::pair<TaskType, double>> gcmu_coefficients;  // optional overrides
};

struct ExperimentConfig {
  ClusterTopology topo;
  ServiceModel svc;
  ArrivalSpec arrivals;
  std::vector<TaskType> types;  // sorted, parallel to base_rates
  std::vector<double> base_rates;
  std::vector<PolicyConfig> policies;
  std::vector<double> sweep_rho;  // fractions of the capacity boundary, in (0, 1.05]
  std::int64_t horizon = 0;
  std::int64_t warmup = 0;
  bool warmup_explicit = false;
  std::vector<std::uint64_t> seeds;
  std::int64_t trace_stride = 0;  // 0 = auto
  bool random_schedule_order = false;
  std::optional<std::string> output_path;
};

// Parses and fully validates a config file. The schema is strict: unknown
// keys are rejected with their key path so typos surface immediately.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace locsched
