#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <vector>

#include "locality_sched/capacity.hpp"
#include "locality_sched/metrics.hpp"
#include "locality_sched/policies.hpp"
#include "locality_sched/rng.hpp"
#include "locality_sched/service_model.hpp"
#include "locality_sched/topology.hpp"

namespace locsched {

struct Task {
  std::uint64_t id = 0;
  std::uint32_t type_index = 0;
  std::int64_t arrival_slot = 0;
};

struct InService {
  Task task;
  std::int64_t start_slot = 0;
  LocalityClass locality = LocalityClass::Local;
};

// Per-slot arrival process. Bernoulli draws one arrival per type per slot
// with probability rate (requires rate <= 1); batch_binomial draws
// Binomial(B, rate/B) arrivals (requires rate <= B). Both are i.i.d. and
// bounded per slot as the model assumes.
struct ArrivalSpec {
  enum class Kind { Bernoulli, BatchBinomial };
  Kind kind = Kind::Bernoulli;
  int batch_bound = 1;
};

struct SimSetup {
  ClusterTopology topo;
  ServiceModel svc;
  std::vector<TaskType> types;  // sorted; parallel to rates
  std::vector<double> rates;
  ArrivalSpec arrivals;
  PolicySpec policy;
};

struct SimOptions {
  std::int64_t horizon = 0;
  std::int64_t warmup = -1;      // -1: horizon / 5
  std::uint64_t seed = 0;
  std::int64_t trace_stride = 0; // 0: max(1, horizon / 2000)
  bool random_schedule_order = false;  // sensitivity switch; default ascending ids
};

// Geometric service trial: true with probability alpha/beta/gamma by class.
// Consumes exactly one rng draw.
inline bool sample_service_completion(Rng& rng, LocalityClass cls, const ServiceModel& svc) {
  return rng.bernoulli(svc.rate(cls));
}

// One simulation run. State mutates strictly slot by slot; independent
// replications are independent objects.
class Simulation {
 public:
  Simulation(SimSetup setup, SimOptions options);

  // Executes one slot: sample arrivals, route them against the start-of-slot
  // queue snapshot in task-id order, sample completions for busy servers,
  // then let idle servers pull work in scheduling order until no assignment
  // is possible.
  void step();

  // Runs the remaining slots up to the horizon and finalizes metrics.
  MetricsBundle run();

  std::int64_t slot() const { return slot_; }
  const std::vector<std::deque<Task>>& queues() const { return queues_; }
  const std::vector<std::optional<InService>>& in_service() const { return in_service_; }
  const std::vector<std::uint64_t>& queue_lengths() const { return lengths_; }
  const std::vector<TaskType>& types() const { return setup_.types; }
  const ClusterTopology& topology() const { return setup_.topo; }
  const Policy& policy() const { return *policy_; }
  std::uint64_t total_queued() const;

  const MetricsBundle& metrics() const { return metrics_; }

 private:
  int sample_arrival_count(std::size_t type_index);
  void complete_departure(int server, std::int64_t slot);
  void schedule_idle_servers(std::int64_t slot);
  void record_trace(std::int64_t slot);

  SimSetup setup_;
  SimOptions opts_;
  std::unique_ptr<Policy> policy_;
  std::vector<std::deque<Task>> queues_;
  std::vector<std::uint64_t> lengths_;  // mirror of queue sizes
  std::vector<std::optional<InService>> in_service_;
  Rng arrival_rng_;
  Rng decision_rng_;
  std::int64_t slot_ = 0;
  std::uint64_t next_task_id_ = 0;
  std::vector<std::uint64_t> snapshot_;
  std::vector<Task> pending_;
  std::vector<int> schedule_order_;

  MetricsBundle metrics_;
};

// Convenience wrapper: run from the empty state for options.horizon slots.
MetricsBundle run_simulation(const SimSetup& setup, const SimOptions& options);

}  // namespace locsched
