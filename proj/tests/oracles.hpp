#pragma once

// Test-only reference implementations, kept independent of the simplex path
// they are used to check.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "locality_sched/capacity.hpp"
#include "locality_sched/service_model.hpp"
#include "locality_sched/topology.hpp"

namespace locsched::testing {

// Exact minimum of max_m (base[m] + x[m]/mu[m]) over x >= 0 with sum x = mass,
// by water-filling the piecewise-linear capacity curve.
inline double waterfill_min_max(std::vector<double> base, const std::vector<double>& mu,
                                double mass) {
  const std::size_t m = base.size();
  double max_base = 0.0;
  for (double b : base) max_base = std::max(max_base, b);
  if (mass <= 0.0) return max_base;

  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return base[a] < base[b]; });

  // Raise the water level z from the lowest base upward; between breakpoints
  // the absorbed mass grows linearly with slope sum of active mu.
  double level = base[order[0]];
  double slope = 0.0;
  double absorbed = 0.0;
  std::size_t k = 0;
  while (true) {
    while (k < m && base[order[k]] <= level + 1e-15) slope += mu[order[k++]];
    const double next = k < m ? base[order[k]] : std::numeric_limits<double>::infinity();
    const double capacity_to_next = slope * (next - level);
    if (absorbed + capacity_to_next >= mass) {
      level += (mass - absorbed) / slope;
      break;
    }
    absorbed += capacity_to_next;
    level = next;
  }
  return std::max(level, max_base);
}

inline std::vector<double> per_server_rates(const ClusterTopology& topo, const ServiceModel& svc,
                                            const TaskType& type) {
  std::vector<double> mu(static_cast<std::size_t>(topo.num_servers()));
  for (int s = 1; s <= topo.num_servers(); ++s)
    mu[s - 1] = svc.rate(classify_locality(topo, type, s));
  return mu;
}

// Enumerates the splits of `total` over `servers` coordinates at the given
// grid step and calls fn(split).
template <typename Fn>
void for_each_grid_split(double total, std::size_t servers, double step, Fn&& fn) {
  const long n = std::lround(total / step);
  std::vector<double> x(servers, 0.0);
  if (servers == 1) {
    x[0] = total;
    fn(x);
    return;
  }
  if (servers == 2) {
    for (long i = 0; i <= n; ++i) {
      x[0] = static_cast<double>(i) * step;
      x[1] = total - x[0];
      if (x[1] < 0.0) x[1] = 0.0;
      fn(x);
    }
    return;
  }
  if (servers == 3) {
    for (long i = 0; i <= n; ++i) {
      x[0] = static_cast<double>(i) * step;
      for (long j = 0; j + i <= n; ++j) {
        x[1] = static_cast<double>(j) * step;
        x[2] = total - x[0] - x[1];
        if (x[2] < 0.0) x[2] = 0.0;
        fn(x);
      }
    }
    return;
  }
  throw std::invalid_argument("grid oracle supports at most 3 servers");
}

// Brute-force reference for z* with at most two task types and M <= 3.
// Single type: plain grid search over the split. Two types: grid over one
// type's split with an exact water-fill of the other, taken over both
// orderings (a full product grid at this step is combinatorially out of
// reach, and the water-fill inner step stays independent of the simplex).
inline double grid_oracle_z(const ClusterTopology& topo, const ServiceModel& svc,
                            const ArrivalVector& arrivals, double step = 1e-3) {
  if (arrivals.empty() || arrivals.size() > 2)
    throw std::invalid_argument("grid oracle supports 1 or 2 task types");
  const std::size_t m = static_cast<std::size_t>(topo.num_servers());

  if (arrivals.size() == 1) {
    const auto mu = per_server_rates(topo, svc, arrivals[0].type);
    double best = std::numeric_limits<double>::infinity();
    for_each_grid_split(arrivals[0].rate, m, step, [&](const std::vector<double>& x) {
      double worst = 0.0;
      for (std::size_t s = 0; s < m; ++s) worst = std::max(worst, x[s] / mu[s]);
      best = std::min(best, worst);
    });
    return best;
  }

  double best = std::numeric_limits<double>::infinity();
  for (int gridded = 0; gridded < 2; ++gridded) {
    const auto& a = arrivals[static_cast<std::size_t>(gridded)];
    const auto& b = arrivals[static_cast<std::size_t>(1 - gridded)];
    const auto mu_a = per_server_rates(topo, svc, a.type);
    const auto mu_b = per_server_rates(topo, svc, b.type);
    for_each_grid_split(a.rate, m, step, [&](const std::vector<double>& x) {
      std::vector<double> base(m);
      for (std::size_t s = 0; s < m; ++s) base[s] = x[s] / mu_a[s];
      best = std::min(best, waterfill_min_max(base, mu_b, b.rate));
    });
  }
  return best;
}

}  // namespace locsched::testing
