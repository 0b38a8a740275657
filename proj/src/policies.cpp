#include "locality_sched/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace locsched {

PolicyKind parse_policy_kind(const std::string& name) {
  if (name == "jsq_mw_2") return PolicyKind::JsqMw2;
  if (name == "jsq_mw_3") return PolicyKind::JsqMw3;
  if (name == "pandas") return PolicyKind::Pandas;
  if (name == "weighted_workload_priority") return PolicyKind::WeightedWorkloadPriority;
  if (name == "gcmu") return PolicyKind::Gcmu;
  if (name == "static_lp_split") return PolicyKind::StaticLpSplit;
  if (name == "fifo_random") return PolicyKind::FifoRandom;
  throw std::invalid_argument("unknown policy kind \"" + name + "\"");
}

const char* policy_kind_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::JsqMw2: return "jsq_mw_2";
    case PolicyKind::JsqMw3: return "jsq_mw_3";
    case PolicyKind::Pandas: return "pandas";
    case PolicyKind::WeightedWorkloadPriority: return "weighted_workload_priority";
    case PolicyKind::Gcmu: return "gcmu";
    case PolicyKind::StaticLpSplit: return "static_lp_split";
    case PolicyKind::FifoRandom: return "fifo_random";
  }
  return "?";
}

namespace {

// Indices attaining the maximum of scores, provided the maximum is positive;
// a non-positive maximum means "stay idle" for every scheduling rule here.
std::vector<int> positive_argmax(const std::vector<double>& scores) {
  double best = 0.0;
  for (double s : scores) best = std::max(best, s);
  std::vector<int> out;
  if (best <= 0.0) return out;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] == best) out.push_back(static_cast<int>(i) + 1);
  return out;
}

template <typename Select>
int pick(const std::vector<Select>& candidates, Rng& rng) {
  if (candidates.size() == 1) return static_cast<int>(candidates[0]);
  return static_cast<int>(candidates[rng.uniform_index(candidates.size())]);
}

}  // namespace

std::vector<int> shortest_local_queue_candidates(const TaskType& type, QueueLengths qlen) {
  std::uint64_t best = UINT64_MAX;
  for (int m : type.replicas()) best = std::min(best, qlen[m - 1]);
  std::vector<int> out;
  for (int m : type.replicas())
    if (qlen[m - 1] == best) out.push_back(m);
  return out;
}

std::vector<int> jsqmw2_schedule_candidates(int server, QueueLengths qlen,
                                            const ServiceModel& svc) {
  std::vector<double> scores(qlen.size());
  for (std::size_t n = 0; n < qlen.size(); ++n) {
    const double w = (static_cast<int>(n) + 1 == server) ? svc.alpha() : svc.gamma();
    scores[n] = w * static_cast<double>(qlen[n]);
  }
  return positive_argmax(scores);
}

std::vector<int> jsqmw3_schedule_candidates(int server, QueueLengths qlen,
                                            const ClusterTopology& topo,
                                            const ServiceModel& svc) {
  const int my_rack = topo.rack_of(server);
  std::vector<double> scores(qlen.size());
  for (std::size_t i = 0; i < qlen.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    double w;
    if (n == server)
      w = svc.alpha();
    else if (topo.rack_of(n) == my_rack)
      w = svc.beta();
    else
      w = svc.gamma();
    scores[i] = w * static_cast<double>(qlen[i]);
  }
  return positive_argmax(scores);
}

PandasDecision pandas_schedule_decision(int server, QueueLengths qlen, const ServiceModel& svc) {
  PandasDecision d;
  if (qlen[server - 1] > 0) {
    d.action = PandasDecision::Action::ServeOwn;
    return d;
  }
  std::uint64_t qmax = 0;
  for (std::uint64_t q : qlen) qmax = std::max(qmax, q);
  if (qmax == 0 || static_cast<double>(qmax) * svc.gamma() < svc.alpha()) {
    d.action = PandasDecision::Action::Idle;
    return d;
  }
  d.action = PandasDecision::Action::Steal;
  for (std::size_t n = 0; n < qlen.size(); ++n)
    if (qlen[n] == qmax) d.steal_candidates.push_back(static_cast<int>(n) + 1);
  return d;
}

double workload(std::uint64_t q_local, std::uint64_t q_rack, std::uint64_t q_remote,
                const ServiceModel& svc) {
  double w = static_cast<double>(q_local) / svc.alpha() +
             static_cast<double>(q_remote) / svc.gamma();
  if (q_rack > 0) w += static_cast<double>(q_rack) / svc.beta();
  return w;
}

std::vector<double> per_server_workloads(QueueLengths sub_qlen, const ServiceModel& svc) {
  const std::size_t m = sub_qlen.size() / 3;
  std::vector<double> w(m);
  for (std::size_t s = 0; s < m; ++s)
    w[s] = workload(sub_qlen[3 * s], sub_qlen[3 * s + 1], sub_qlen[3 * s + 2], svc);
  return w;
}

std::vector<int> ww_route_candidates_from_workloads(const TaskType& type,
                                                    std::span<const double> workloads,
                                                    const ClusterTopology& topo,
                                                    const ServiceModel& svc) {
  std::vector<double> scores(workloads.size());
  for (std::size_t s = 0; s < workloads.size(); ++s) {
    const auto cls = classify_locality(topo, type, static_cast<int>(s) + 1);
    scores[s] = workloads[s] / svc.rate(cls);
  }
  const double best = *std::min_element(scores.begin(), scores.end());
  std::vector<int> out;
  for (std::size_t s = 0; s < scores.size(); ++s)
    if (scores[s] == best) out.push_back(static_cast<int>(s) + 1);
  return out;
}

std::vector<int> ww_route_candidates(const TaskType& type, QueueLengths sub_qlen,
                                     const ClusterTopology& topo, const ServiceModel& svc) {
  return ww_route_candidates_from_workloads(type, per_server_workloads(sub_qlen, svc), topo, svc);
}

std::optional<LocalityClass> priority_schedule_choice(int server, QueueLengths sub_qlen) {
  for (auto cls : {LocalityClass::Local, LocalityClass::RackLocal, LocalityClass::Remote})
    if (sub_qlen[sub_queue_index(server, cls)] > 0) return cls;
  return std::nullopt;
}

std::vector<std::size_t> gcmu_schedule_candidates(int server, QueueLengths type_qlen,
                                                  const std::vector<TaskType>& types,
                                                  const ClusterTopology& topo,
                                                  const ServiceModel& svc, double theta,
                                                  std::span<const double> coefficients) {
  double best = 0.0;
  std::vector<double> scores(types.size(), 0.0);
  for (std::size_t t = 0; t < types.size(); ++t) {
    if (type_qlen[t] == 0) continue;
    const double c = coefficients.empty() ? 1.0 : coefficients[t];
    const double mu = svc.rate(classify_locality(topo, types[t], server));
    scores[t] = c * (theta + 1.0) * std::pow(static_cast<double>(type_qlen[t]), theta) * mu;
    best = std::max(best, scores[t]);
  }
  std::vector<std::size_t> out;
  if (best <= 0.0) return out;
  for (std::size_t t = 0; t < types.size(); ++t)
    if (type_qlen[t] > 0 && scores[t] == best) out.push_back(t);
  return out;
}

namespace {

class JsqMwPolicy final : public Policy {
 public:
  JsqMwPolicy(PolicyKind kind, const ClusterTopology& topo, const ServiceModel& svc,
              const std::vector<TaskType>& types)
      : kind_(kind), topo_(topo), svc_(svc), types_(types) {}

  PolicyKind kind() const override { return kind_; }
  QueueLayout layout() const override { return QueueLayout::PerServer; }

  std::size_t route(std::size_t type_index, QueueLengths snapshot, Rng& rng) const override {
    const auto cands = shortest_local_queue_candidates(types_[type_index], snapshot);
    return static_cast<std::size_t>(pick(cands, rng)) - 1;
  }

  std::optional<std::size_t> schedule(int server, QueueLengths lengths, Rng& rng) const override {
    const auto cands = kind_ == PolicyKind::JsqMw2
                           ? jsqmw2_schedule_candidates(server, lengths, svc_)
                           : jsqmw3_schedule_candidates(server, lengths, topo_, svc_);
    if (cands.empty()) return std::nullopt;
    return static_cast<std::size_t>(pick(cands, rng)) - 1;
  }

 private:
  PolicyKind kind_;
  const ClusterTopology& topo_;
  const ServiceModel& svc_;
  const std::vector<TaskType>& types_;
};

class PandasPolicy final : public Policy {
 public:
  PandasPolicy(const ServiceModel& svc, const std::vector<TaskType>& types)
      : svc_(svc), types_(types) {}

  PolicyKind kind() const override { return PolicyKind::Pandas; }
  QueueLayout layout() const override { return QueueLayout::PerServer; }

  std::size_t route(std::size_t type_index, QueueLengths snapshot, Rng& rng) const override {
    const auto cands = shortest_local_queue_candidates(types_[type_index], snapshot);
    return static_cast<std::size_t>(pick(cands, rng)) - 1;
  }

  std::optional<std::size_t> schedule(int server, QueueLengths lengths, Rng& rng) const override {
    const auto d = pandas_schedule_decision(server, lengths, svc_);
    switch (d.action) {
      case PandasDecision::Action::ServeOwn: return static_cast<std::size_t>(server) - 1;
      case PandasDecision::Action::Steal:
        return static_cast<std::size_t>(pick(d.steal_candidates, rng)) - 1;
      case PandasDecision::Action::Idle: return std::nullopt;
    }
    return std::nullopt;
  }

 private:
  const ServiceModel& svc_;
  const std::vector<TaskType>& types_;
};

class WeightedWorkloadPolicy final : public Policy {
 public:
  WeightedWorkloadPolicy(const ClusterTopology& topo, const ServiceModel& svc,
                         const std::vector<TaskType>& types)
      : topo_(topo), svc_(svc), types_(types) {}

  PolicyKind kind() const override { return PolicyKind::WeightedWorkloadPriority; }
  QueueLayout layout() const override { return QueueLayout::PerServerTriple; }

  std::size_t route(std::size_t type_index, QueueLengths snapshot, Rng& rng) const override {
    const auto& type = types_[type_index];
    const auto cands = ww_route_candidates(type, snapshot, topo_, svc_);
    const int server = pick(cands, rng);
    return sub_queue_index(server, classify_locality(topo_, type, server));
  }

  std::optional<std::size_t> schedule(int server, QueueLengths lengths, Rng&) const override {
    const auto cls = priority_schedule_choice(server, lengths);
    if (!cls) return std::nullopt;
    return sub_queue_index(server, *cls);
  }

 private:
  const ClusterTopology& topo_;
  const ServiceModel& svc_;
  const std::vector<TaskType>& types_;
};

class GcmuPolicy final : public Policy {
 public:
  GcmuPolicy(const ClusterTopology& topo, const ServiceModel& svc,
             const std::vector<TaskType>& types, double theta, std::vector<double> coefficients)
      : topo_(topo), svc_(svc), types_(types), theta_(theta), coeffs_(std::move(coefficients)) {}

  PolicyKind kind() const override { return PolicyKind::Gcmu; }
  QueueLayout layout() const override { return QueueLayout::PerType; }

  std::size_t route(std::size_t type_index, QueueLengths, Rng&) const override {
    return type_index;  // each type waits in its own queue
  }

  std::optional<std::size_t> schedule(int server, QueueLengths lengths, Rng& rng) const override {
    const auto cands =
        gcmu_schedule_candidates(server, lengths, types_, topo_, svc_, theta_, coeffs_);
    if (cands.empty()) return std::nullopt;
    if (cands.size() == 1) return cands[0];
    return cands[rng.uniform_index(cands.size())];
  }

 private:
  const ClusterTopology& topo_;
  const ServiceModel& svc_;
  const std::vector<TaskType>& types_;
  double theta_;
  std::vector<double> coeffs_;
};

class StaticLpSplitPolicy final : public Policy {
 public:
  StaticLpSplitPolicy(const std::vector<TaskType>& types, const Decomposition& decomposition)
      : types_(types) {
    // Cumulative routing fractions per type; types with zero total rate get an
    // empty table and are rejected if a task of that type ever arrives.
    cumulative_.resize(types.size());
    for (std::size_t t = 0; t < types.size(); ++t) {
      const auto& split = decomposition.split[t];
      double total = 0.0;
      for (double v : split) total += v;
      if (total <= 0.0) continue;
      auto& cum = cumulative_[t];
      cum.reserve(split.size());
      double acc = 0.0;
      for (double v : split) {
        acc += v / total;
        cum.push_back(acc);
      }
      cum.back() = 1.0;
    }
  }

  PolicyKind kind() const override { return PolicyKind::StaticLpSplit; }
  QueueLayout layout() const override { return QueueLayout::PerServer; }

  std::size_t route(std::size_t type_index, QueueLengths, Rng& rng) const override {
    const auto& cum = cumulative_[type_index];
    if (cum.empty())
      throw std::runtime_error("static_lp_split: task of type " + types_[type_index].label() +
                               " arrived but the decomposition assigns it zero rate");
    const double u = rng.uniform();
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const std::size_t idx = static_cast<std::size_t>(it - cum.begin());
    return idx < cum.size() ? idx : cum.size() - 1;
  }

  std::optional<std::size_t> schedule(int server, QueueLengths lengths, Rng&) const override {
    // Each server drains its own queue in FIFO order.
    if (lengths[server - 1] > 0) return static_cast<std::size_t>(server) - 1;
    return std::nullopt;
  }

 private:
  const std::vector<TaskType>& types_;
  std::vector<std::vector<double>> cumulative_;
};

class FifoRandomPolicy final : public Policy {
 public:
  PolicyKind kind() const override { return PolicyKind::FifoRandom; }
  QueueLayout layout() const override { return QueueLayout::SingleGlobal; }

  std::size_t route(std::size_t, QueueLengths, Rng&) const override { return 0; }

  std::optional<std::size_t> schedule(int, QueueLengths lengths, Rng&) const override {
    if (lengths[0] > 0) return 0;
    return std::nullopt;
  }
};

}  // namespace

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const ClusterTopology& topo,
                                    const ServiceModel& svc, const std::vector<TaskType>& types) {
  switch (spec.kind) {
    case PolicyKind::JsqMw2:
    case PolicyKind::JsqMw3:
      return std::make_unique<JsqMwPolicy>(spec.kind, topo, svc, types);
    case PolicyKind::Pandas:
      return std::make_unique<PandasPolicy>(svc, types);
    case PolicyKind::WeightedWorkloadPriority:
      return std::make_unique<WeightedWorkloadPolicy>(topo, svc, types);
    case PolicyKind::Gcmu: {
      if (!(spec.theta > 0.0))
        throw std::invalid_argument("gcmu: theta must be strictly positive");
      if (!spec.gcmu_coefficients.empty()) {
        if (spec.gcmu_coefficients.size() != types.size())
          throw std::invalid_argument("gcmu: coefficient list does not match the type list");
        for (double c : spec.gcmu_coefficients)
          if (!(c > 0.0)) throw std::invalid_argument("gcmu: coefficients must be > 0");
      }
      return std::make_unique<GcmuPolicy>(topo, svc, types, spec.theta, spec.gcmu_coefficients);
    }
    case PolicyKind::StaticLpSplit: {
      if (!spec.lp_split)
        throw std::invalid_argument("static_lp_split: requires a precomputed decomposition");
      const auto& d = *spec.lp_split;
      if (d.types != types)
        throw std::invalid_argument("static_lp_split: decomposition types do not match config");
      if (!d.split.empty() && d.split[0].size() != static_cast<std::size_t>(topo.num_servers()))
        throw std::invalid_argument("static_lp_split: decomposition server count mismatch");
      return std::make_unique<StaticLpSplitPolicy>(types, d);
    }
    case PolicyKind::FifoRandom:
      return std::make_unique<FifoRandomPolicy>();
  }
  throw std::invalid_argument("make_policy: unknown policy kind");
}

}  // namespace locsched
