#include "locality_sched/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "locality_sched/simplex.hpp"

namespace locsched {

ArrivalVector normalize_arrival_vector(const ClusterTopology& topo, ArrivalVector arrivals) {
  for (const auto& tr : arrivals) {
    if (tr.type.replicas().back() > topo.num_servers())
      throw std::invalid_argument("arrivals: task type " + tr.type.label() +
                                  " references a server beyond M=" +
                                  std::to_string(topo.num_servers()));
    if (tr.rate < 0.0 || !std::isfinite(tr.rate))
      throw std::invalid_argument("arrivals: rate for type " + tr.type.label() +
                                  " must be finite and >= 0");
  }
  std::sort(arrivals.begin(), arrivals.end(),
            [](const TypeRate& a, const TypeRate& b) { return a.type < b.type; });
  for (std::size_t i = 1; i < arrivals.size(); ++i)
    if (arrivals[i].type == arrivals[i - 1].type)
      throw std::invalid_argument("arrivals: duplicate task type " + arrivals[i].type.label());
  return arrivals;
}

CapacitySolution solve_capacity_lp(const ClusterTopology& topo, const ServiceModel& svc,
                                   const ArrivalVector& arrivals) {
  const auto arr = normalize_arrival_vector(topo, arrivals);
  const std::size_t num_types = arr.size();
  const std::size_t m = static_cast<std::size_t>(topo.num_servers());
  if (num_types == 0) throw std::invalid_argument("capacity LP: no task types given");

  // Variables: lambda_{t,s} flattened as t*m + s, plus z at the end.
  const std::size_t zvar = num_types * m;
  LinearProgram lp;
  lp.num_vars = zvar + 1;
  lp.objective.assign(lp.num_vars, 0.0);
  lp.objective[zvar] = 1.0;

  std::vector<std::vector<double>> inv_rate(num_types, std::vector<double>(m, 0.0));
  for (std::size_t t = 0; t < num_types; ++t)
    for (std::size_t s = 0; s < m; ++s)
      inv_rate[t][s] =
          1.0 / svc.rate(classify_locality(topo, arr[t].type, static_cast<int>(s) + 1));

  for (std::size_t t = 0; t < num_types; ++t) {
    LinearConstraint c;
    c.relation = LinearConstraint::Relation::Equal;
    c.coeffs.assign(lp.num_vars, 0.0);
    for (std::size_t s = 0; s < m; ++s) c.coeffs[t * m + s] = 1.0;
    c.rhs = arr[t].rate;
    lp.constraints.push_back(std::move(c));
  }
  for (std::size_t s = 0; s < m; ++s) {
    LinearConstraint c;
    c.relation = LinearConstraint::Relation::LessEqual;
    c.coeffs.assign(lp.num_vars, 0.0);
    for (std::size_t t = 0; t < num_types; ++t) c.coeffs[t * m + s] = inv_rate[t][s];
    c.coeffs[zvar] = -1.0;
    c.rhs = 0.0;
    lp.constraints.push_back(std::move(c));
  }

  SimplexSolution sol;
  try {
    sol = solve_simplex(lp);
  } catch (const std::exception& e) {
    // The program is feasible and bounded by construction; a solver failure
    // here is a bug, not bad input.
    throw std::logic_error(std::string("capacity LP: internal solver failure: ") + e.what());
  }

  CapacitySolution out;
  out.z_star = sol.objective;
  out.decomposition.types.reserve(num_types);
  out.decomposition.split.assign(num_types, std::vector<double>(m, 0.0));
  out.decomposition.per_server_load.assign(m, 0.0);
  for (std::size_t t = 0; t < num_types; ++t) {
    out.decomposition.types.push_back(arr[t].type);
    for (std::size_t s = 0; s < m; ++s) {
      double v = sol.x[t * m + s];
      if (v < 0.0) {
        if (v < -1e-9) throw std::logic_error("capacity LP: negative split beyond tolerance");
        v = 0.0;
      }
      out.decomposition.split[t][s] = v;
      out.decomposition.per_server_load[s] += v * inv_rate[t][s];
    }
  }
  return out;
}

double max_stable_scaling(const ClusterTopology& topo, const ServiceModel& svc,
                          const ArrivalVector& arrivals) {
  bool any_positive = false;
  for (const auto& tr : arrivals) any_positive |= tr.rate > 0.0;
  if (!any_positive)
    throw std::invalid_argument("max_stable_scaling: arrival vector must have a positive rate");
  return 1.0 / solve_capacity_lp(topo, svc, arrivals).z_star;
}

bool is_in_capacity_region(const ClusterTopology& topo, const ServiceModel& svc,
                           const ArrivalVector& arrivals) {
  return solve_capacity_lp(topo, svc, arrivals).z_star < 1.0 - 1e-9;
}

}  // namespace locsched
