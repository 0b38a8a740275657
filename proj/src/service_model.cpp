#include "locality_sched/service_model.hpp"

#include <stdexcept>
#include <string>

namespace locsched {

ServiceModel::ServiceModel(double alpha, std::optional<double> beta, double gamma)
    : alpha_(alpha), beta_(beta), gamma_(gamma) {
  auto in_unit = [](double p) { return p > 0.0 && p <= 1.0; };
  if (!in_unit(alpha)) throw std::invalid_argument("service model: alpha must be in (0,1]");
  if (!in_unit(gamma)) throw std::invalid_argument("service model: gamma must be in (0,1]");
  if (beta) {
    if (!in_unit(*beta)) throw std::invalid_argument("service model: beta must be in (0,1]");
    if (!(alpha > *beta))
      throw std::invalid_argument("service model: requires alpha (" + std::to_string(alpha) +
                                  ") > beta (" + std::to_string(*beta) + ")");
    if (!(*beta > gamma))
      throw std::invalid_argument("service model: requires beta (" + std::to_string(*beta) +
                                  ") > gamma (" + std::to_string(gamma) + ")");
  } else if (!(alpha > gamma)) {
    throw std::invalid_argument("service model: requires alpha (" + std::to_string(alpha) +
                                ") > gamma (" + std::to_string(gamma) + ")");
  }
}

double ServiceModel::beta() const {
  if (!beta_) throw std::logic_error("service model: beta requested but unset (two-level model)");
  return *beta_;
}

double ServiceModel::rate(LocalityClass c) const {
  switch (c) {
    case LocalityClass::Local: return alpha_;
    case LocalityClass::RackLocal: return beta();
    case LocalityClass::Remote: return gamma_;
  }
  throw std::logic_error("service model: bad locality class");
}

}  // namespace locsched
