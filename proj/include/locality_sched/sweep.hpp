#pragma once

#include <string>
#include <vector>

#include "locality_sched/config.hpp"
#include "locality_sched/metrics.hpp"

namespace locsched {

struct SweepRow {
  std::string policy;
  double rho = 0.0;
  std::uint64_t seed = 0;
  MetricsBundle metrics;
};

// Runs every (policy, rho, seed) combination of the config with arrivals
// scaled to rho * rho_star * lambda and returns the rows sorted by
// (policy, rho, seed). Deterministic for a given config.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

extern const char* const kSweepCsvHeader;

std::string format_sweep_row(const SweepRow& row);

// Header plus one line per row; byte-identical across reruns.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// z*, rho*, and the optimal decomposition of the configured (unscaled)
// arrival vector as CSV. Rejects all-zero arrival vectors.
std::string capacity_report(const ExperimentConfig& cfg);

}  // namespace locsched
