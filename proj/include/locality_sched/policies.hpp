#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locality_sched/capacity.hpp"
#include "locality_sched/rng.hpp"
#include "locality_sched/service_model.hpp"
#include "locality_sched/topology.hpp"

namespace locsched {

enum class PolicyKind {
  JsqMw2,                     // JSQ routing + two-level MaxWeight scheduling
  JsqMw3,                     // JSQ routing + three-level MaxWeight scheduling
  Pandas,                     // JSQ routing + local-first with thresholded steal
  WeightedWorkloadPriority,   // weighted-workload routing + priority scheduling
  Gcmu,                       // generalized c-mu rule over per-type queues
  StaticLpSplit,              // randomized routing from an LP decomposition
  FifoRandom,                 // single global FIFO queue
};

PolicyKind parse_policy_kind(const std::string& name);
const char* policy_kind_name(PolicyKind kind);

// How the simulator's queue vector is laid out for a given policy.
enum class QueueLayout {
  PerServer,        // one queue per server
  PerServerTriple,  // local / rack-local / remote sub-queues per server
  PerType,          // one queue per task type
  SingleGlobal,     // one shared queue
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::JsqMw2;
  double theta = 1.0;                      // gcmu exponent, must be > 0
  std::vector<double> gcmu_coefficients;   // per type index; empty means all 1
  std::optional<Decomposition> lp_split;   // static_lp_split only
};

using QueueLengths = std::span<const std::uint64_t>;

// Sub-queue index within a PerServerTriple layout.
inline std::size_t sub_queue_index(int server, LocalityClass c) {
  return static_cast<std::size_t>(server - 1) * 3 + static_cast<std::size_t>(c);
}

// ---------------------------------------------------------------------------
// Selection primitives. Each returns the full candidate set of an argmax /
// argmin so ties can be inspected and broken by the caller; the Policy
// wrappers below sample uniformly among candidates.
// ---------------------------------------------------------------------------

// Shortest queue among the type's replica servers (JSQ-MW and Pandas routing).
std::vector<int> shortest_local_queue_candidates(const TaskType& type, QueueLengths qlen);

// Two-level MaxWeight: argmax_n { alpha Q_n [n=m], gamma Q_n [n!=m] }.
// Empty result means every queue is empty and the server stays idle.
std::vector<int> jsqmw2_schedule_candidates(int server, QueueLengths qlen,
                                            const ServiceModel& svc);

// Three-level MaxWeight: argmax_n { alpha Q_n [n=m], beta Q_n [same rack],
// gamma Q_n [other rack] }; n=m is scored by the alpha term alone.
std::vector<int> jsqmw3_schedule_candidates(int server, QueueLengths qlen,
                                            const ClusterTopology& topo,
                                            const ServiceModel& svc);

struct PandasDecision {
  enum class Action { ServeOwn, Steal, Idle };
  Action action = Action::Idle;
  std::vector<int> steal_candidates;  // longest queues, when action == Steal
};

// Local-first scheduling with the alpha/gamma steal threshold: serve the own
// queue when non-empty, otherwise steal from a longest queue iff
// Q_max >= alpha/gamma (evaluated multiplicatively as Q_max * gamma >= alpha
// to avoid division error at the boundary).
PandasDecision pandas_schedule_decision(int server, QueueLengths qlen, const ServiceModel& svc);

// Expected time for a server to drain its three sub-queues.
double workload(std::uint64_t q_local, std::uint64_t q_rack, std::uint64_t q_remote,
                const ServiceModel& svc);

// Per-server workloads of a PerServerTriple queue vector.
std::vector<double> per_server_workloads(QueueLengths sub_qlen, const ServiceModel& svc);

// Weighted-workload routing: argmin_m W_m / mu_{L,m} over all servers.
std::vector<int> ww_route_candidates_from_workloads(const TaskType& type,
                                                    std::span<const double> workloads,
                                                    const ClusterTopology& topo,
                                                    const ServiceModel& svc);
std::vector<int> ww_route_candidates(const TaskType& type, QueueLengths sub_qlen,
                                     const ClusterTopology& topo, const ServiceModel& svc);

// Local, then rack-local, then remote; nullopt when all three are empty.
std::optional<LocalityClass> priority_schedule_choice(int server, QueueLengths sub_qlen);

// Generalized c-mu rule with cost C_L(q) = c_L q^(theta+1): argmax over
// non-empty types of c_L (theta+1) Q_L^theta mu_{L,m}.
std::vector<std::size_t> gcmu_schedule_candidates(int server, QueueLengths type_qlen,
                                                  const std::vector<TaskType>& types,
                                                  const ClusterTopology& topo,
                                                  const ServiceModel& svc, double theta,
                                                  std::span<const double> coefficients);

// ---------------------------------------------------------------------------
// Policy interface used by the simulator. Policies are pure decision
// functions of the queue state; the rng they are handed is owned by the
// enclosing simulation, which makes every tie-break seed-reproducible.
// ---------------------------------------------------------------------------
class Policy {
 public:
  virtual ~Policy() = default;
  virtual PolicyKind kind() const = 0;
  virtual QueueLayout layout() const = 0;
  // Queue index the arriving task joins; lengths are the start-of-slot snapshot.
  virtual std::size_t route(std::size_t type_index, QueueLengths snapshot, Rng& rng) const = 0;
  // Queue index the idle server pulls from, or nullopt to stay idle; lengths
  // are current.
  virtual std::optional<std::size_t> schedule(int server, QueueLengths lengths,
                                              Rng& rng) const = 0;
};

// Builds a policy bound to the given topology, service model and type list
// (all must outlive the policy). Validates spec parameters:
// theta > 0, coefficients > 0, and a decomposition matching the type list for
// static_lp_split.
std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const ClusterTopology& topo,
                                    const ServiceModel& svc, const std::vector<TaskType>& types);

}  // namespace locsched
