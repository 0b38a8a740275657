#pragma once

#include <vector>

#include "locality_sched/service_model.hpp"
#include "locality_sched/topology.hpp"

namespace locsched {

// Mean arrivals per slot for one task type.
struct TypeRate {
  TaskType type;
  double rate = 0.0;
};

// Arrival-rate vector, kept sorted by task type for deterministic iteration.
using ArrivalVector = std::vector<TypeRate>;

// An optimal load split lambda_{L,m}: split[t][m-1] is the rate of type t
// tasks assigned to server m.
struct Decomposition {
  std::vector<TaskType> types;
  std::vector<std::vector<double>> split;
  std::vector<double> per_server_load;  // sum over types of split/mu
};

struct CapacitySolution {
  double z_star = 0.0;
  Decomposition decomposition;
};

// Solves the load-decomposition LP: minimize z subject to
//   sum_m lambda_{L,m} = lambda_L          for every type L,
//   sum_L lambda_{L,m} / mu_{L,m} <= z     for every server m,
//   lambda_{L,m} >= 0,
// where mu_{L,m} is alpha/beta/gamma by the locality of m for L. The arrival
// vector is inside the capacity region iff z* < 1 (strictly).
CapacitySolution solve_capacity_lp(const ClusterTopology& topo, const ServiceModel& svc,
                                   const ArrivalVector& arrivals);

// Largest factor rho* such that rho * lambda stays inside the capacity region
// for every rho < rho*; equals 1/z*(lambda). Rejects all-zero vectors.
double max_stable_scaling(const ClusterTopology& topo, const ServiceModel& svc,
                          const ArrivalVector& arrivals);

// Strict membership: z* < 1 - 1e-9 (the boundary itself is excluded).
bool is_in_capacity_region(const ClusterTopology& topo, const ServiceModel& svc,
                           const ArrivalVector& arrivals);

// Validates replica ranges and rate signs; sorts by type. Throws on duplicate
// types, negative rates or replicas beyond M.
ArrivalVector normalize_arrival_vector(const ClusterTopology& topo, ArrivalVector arrivals);

}  // namespace locsched
