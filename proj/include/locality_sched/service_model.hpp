#pragma once

#include <optional>

#include "locality_sched/topology.hpp"

namespace locsched {

// Per-slot service completion probabilities: Geo(alpha) local, Geo(beta)
// rack-local, Geo(gamma) remote, with 1 >= alpha > beta > gamma > 0.
// Two-level clusters leave beta unset; the rack-local rate is then undefined
// and must never be requested.
class ServiceModel {
 public:
  ServiceModel(double alpha, std::optional<double> beta, double gamma);

  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }
  bool has_rack_level() const { return beta_.has_value(); }
  double beta() const;  // throws if unset

  double rate(LocalityClass c) const;
  double mean_service_slots(LocalityClass c) const { return 1.0 / rate(c); }

 private:
  double alpha_;
  std::optional<double> beta_;
  double gamma_;
};

}  // namespace locsched
