#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "locality_sched/service_model.hpp"

namespace locsched {

enum class StabilityVerdict { Stable, Suspect, Unstable };

const char* to_string(StabilityVerdict v);

struct StabilityEstimate {
  double slope = 0.0;  // tasks per slot
  StabilityVerdict verdict = StabilityVerdict::Suspect;
};

// Least-squares slope of total queue length over the final 50% of the
// horizon. Stable below eps, unstable above 10*eps, suspect in between.
// Rejects windows with fewer than 100 samples.
StabilityEstimate stability_estimate(std::span<const std::int64_t> slots,
                                     std::span<const std::uint64_t> totals, std::int64_t horizon,
                                     double eps = 1e-4);

// V(t) = sum_m W_m(t)^2 over a PerServerTriple queue vector (3M lengths).
double lyapunov_value(std::span<const std::uint64_t> sub_qlen, const ServiceModel& svc);

// Per-run statistics. Completion / class / service accounting covers tasks
// that arrived at or after the warm-up slot; traces record from slot 0.
struct MetricsBundle {
  std::int64_t horizon = 0;
  std::int64_t warmup = 0;

  std::uint64_t arrivals_total = 0;
  std::uint64_t departures_total = 0;
  std::uint64_t arrivals_post_warmup = 0;
  std::uint64_t departures_post_warmup = 0;

  double mean_completion_time = 0.0;  // slots; 0 when no post-warmup departures
  std::array<std::uint64_t, 3> completions_by_class{};  // local / rack / remote
  std::array<double, 3> mean_service_by_class{};        // 0 when class unseen

  std::vector<std::int64_t> trace_slots;
  std::vector<std::uint64_t> total_queue_trace;
  std::vector<double> lyapunov_trace;  // empty unless the layout has sub-queues

  std::optional<StabilityEstimate> stability;  // absent when the trace window is too short
  std::uint64_t final_total_queue = 0;

  // Steal diagnostics for one-queue-per-server policies: assignments where a
  // server pulled from another server's queue, and the smallest system-wide
  // Q_max observed at such a pull.
  std::uint64_t remote_pulls = 0;
  std::uint64_t min_qmax_at_remote_pull = 0;

  // Accumulators; finalize_metrics turns them into the means above.
  double completion_time_sum = 0.0;
  std::array<double, 3> service_time_sum{};
  std::array<std::uint64_t, 3> service_count{};

  double local_share() const;
  double rack_share() const;
  double remote_share() const;
};

// Accumulates one departure: completion time departure - arrival + 1 plus the
// class and service-time tallies, skipping tasks that arrived during warm-up.
// A departure before the arrival is a fault.
void record_departure(MetricsBundle& bundle, std::int64_t arrival_slot,
                      std::int64_t service_start_slot, LocalityClass cls,
                      std::int64_t departure_slot);

// Derives the mean fields from the accumulators.
void finalize_metrics(MetricsBundle& bundle);

}  // namespace locsched
