#include "locality_sched/simulation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace locsched {

namespace {

std::size_t queue_count(QueueLayout layout, std::size_t num_servers, std::size_t num_types) {
  switch (layout) {
    case QueueLayout::PerServer: return num_servers;
    case QueueLayout::PerServerTriple: return 3 * num_servers;
    case QueueLayout::PerType: return num_types;
    case QueueLayout::SingleGlobal: return 1;
  }
  throw std::logic_error("bad queue layout");
}

}  // namespace

Simulation::Simulation(SimSetup setup, SimOptions options)
    : setup_(std::move(setup)),
      opts_(options),
      arrival_rng_(options.seed, 1),
      decision_rng_(options.seed, 2) {
  if (opts_.horizon < 1) throw std::invalid_argument("simulation: horizon must be >= 1");
  if (opts_.warmup < 0) opts_.warmup = opts_.horizon / 5;
  if (opts_.warmup >= opts_.horizon)
    throw std::invalid_argument("simulation: warmup must be < horizon");
  if (opts_.trace_stride <= 0) opts_.trace_stride = std::max<std::int64_t>(1, opts_.horizon / 2000);

  if (setup_.types.size() != setup_.rates.size())
    throw std::invalid_argument("simulation: type and rate lists differ in length");
  if (setup_.types.empty()) throw std::invalid_argument("simulation: no task types");
  for (std::size_t i = 1; i < setup_.types.size(); ++i)
    if (!(setup_.types[i - 1] < setup_.types[i]))
      throw std::invalid_argument("simulation: task types must be sorted and distinct");
  for (std::size_t i = 0; i < setup_.types.size(); ++i) {
    const auto& t = setup_.types[i];
    if (t.replicas().back() > setup_.topo.num_servers())
      throw std::invalid_argument("simulation: task type " + t.label() + " exceeds M");
    const double rate = setup_.rates[i];
    if (rate < 0.0) throw std::invalid_argument("simulation: negative arrival rate");
    if (setup_.arrivals.kind == ArrivalSpec::Kind::Bernoulli && rate > 1.0)
      throw std::invalid_argument("simulation: Bernoulli arrivals need rate <= 1 for type " +
                                  t.label() + " (got " + std::to_string(rate) +
                                  "); use batch_binomial");
    if (setup_.arrivals.kind == ArrivalSpec::Kind::BatchBinomial) {
      if (setup_.arrivals.batch_bound < 1)
        throw std::invalid_argument("simulation: batch_binomial needs batch_bound >= 1");
      if (rate > static_cast<double>(setup_.arrivals.batch_bound))
        throw std::invalid_argument("simulation: batch_binomial needs rate <= batch_bound");
    }
  }

  policy_ = make_policy(setup_.policy, setup_.topo, setup_.svc, setup_.types);
  const std::size_t nq = queue_count(policy_->layout(), setup_.topo.num_servers(),
                                     setup_.types.size());
  queues_.resize(nq);
  lengths_.assign(nq, 0);
  in_service_.assign(setup_.topo.num_servers(), std::nullopt);
  schedule_order_.resize(setup_.topo.num_servers());
  std::iota(schedule_order_.begin(), schedule_order_.end(), 1);

  metrics_.horizon = opts_.horizon;
  metrics_.warmup = opts_.warmup;
}

int Simulation::sample_arrival_count(std::size_t type_index) {
  const double rate = setup_.rates[type_index];
  if (setup_.arrivals.kind == ArrivalSpec::Kind::Bernoulli)
    return arrival_rng_.bernoulli(rate) ? 1 : 0;
  const int b = setup_.arrivals.batch_bound;
  const double p = rate / static_cast<double>(b);
  int count = 0;
  for (int i = 0; i < b; ++i)  // fixed draw count keeps streams aligned across policies
    count += arrival_rng_.bernoulli(p) ? 1 : 0;
  return count;
}

void Simulation::step() {
  const std::int64_t t = slot_;
  if (t >= opts_.horizon) throw std::logic_error("simulation: stepped past the horizon");

  // Arrivals, routed against the start-of-slot snapshot in task-id order.
  snapshot_ = lengths_;
  pending_.clear();
  for (std::size_t i = 0; i < setup_.types.size(); ++i) {
    const int count = sample_arrival_count(i);
    for (int c = 0; c < count; ++c)
      pending_.push_back(Task{next_task_id_++, static_cast<std::uint32_t>(i), t});
  }
  for (const Task& task : pending_) {
    const std::size_t q = policy_->route(task.type_index, snapshot_, decision_rng_);
    if (q >= queues_.size())
      throw std::logic_error("simulation fault: policy routed to invalid queue");
    queues_[q].push_back(task);
    ++lengths_[q];
    ++metrics_.arrivals_total;
    if (t >= opts_.warmup) ++metrics_.arrivals_post_warmup;
  }

  // Service completions for servers that were busy entering this phase.
  for (int m = 1; m <= setup_.topo.num_servers(); ++m) {
    auto& slot_m = in_service_[m - 1];
    if (!slot_m) continue;
    if (sample_service_completion(decision_rng_, slot_m->locality, setup_.svc))
      complete_departure(m, t);
  }

  schedule_idle_servers(t);

  if (t % opts_.trace_stride == 0) record_trace(t);
  slot_ = t + 1;
}

void Simulation::complete_departure(int server, std::int64_t t) {
  const InService& s = *in_service_[server - 1];
  record_departure(metrics_, s.task.arrival_slot, s.start_slot, s.locality, t);
  in_service_[server - 1].reset();
}

void Simulation::schedule_idle_servers(std::int64_t t) {
  if (opts_.random_schedule_order) {
    for (std::size_t i = schedule_order_.size(); i > 1; --i)
      std::swap(schedule_order_[i - 1], schedule_order_[decision_rng_.uniform_index(i)]);
  }
  const bool per_server = policy_->layout() == QueueLayout::PerServer;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int m : schedule_order_) {
      if (in_service_[m - 1]) continue;
      const auto q = policy_->schedule(m, lengths_, decision_rng_);
      if (!q) continue;
      if (*q >= queues_.size() || queues_[*q].empty())
        throw std::logic_error("simulation fault: policy scheduled an invalid or empty queue");
      if (per_server && *q != static_cast<std::size_t>(m - 1)) {
        const std::uint64_t qmax = *std::max_element(lengths_.begin(), lengths_.end());
        if (metrics_.remote_pulls == 0 || qmax < metrics_.min_qmax_at_remote_pull)
          metrics_.min_qmax_at_remote_pull = qmax;
        ++metrics_.remote_pulls;
      }
      const Task task = queues_[*q].front();
      queues_[*q].pop_front();
      --lengths_[*q];
      in_service_[m - 1] =
          InService{task, t, classify_locality(setup_.topo, setup_.types[task.type_index], m)};
      progress = true;
    }
  }
}

void Simulation::record_trace(std::int64_t t) {
  metrics_.trace_slots.push_back(t);
  metrics_.total_queue_trace.push_back(total_queued());
  if (policy_->layout() == QueueLayout::PerServerTriple)
    metrics_.lyapunov_trace.push_back(lyapunov_value(lengths_, setup_.svc));
}

std::uint64_t Simulation::total_queued() const {
  std::uint64_t total = 0;
  for (std::uint64_t l : lengths_) total += l;
  return total;
}

MetricsBundle Simulation::run() {
  while (slot_ < opts_.horizon) step();

  metrics_.final_total_queue = total_queued();
  finalize_metrics(metrics_);
  try {
    metrics_.stability = stability_estimate(metrics_.trace_slots, metrics_.total_queue_trace,
                                            opts_.horizon);
  } catch (const std::invalid_argument&) {
    metrics_.stability.reset();  // short run; no verdict
  }
  return metrics_;
}

MetricsBundle run_simulation(const SimSetup& setup, const SimOptions& options) {
  Simulation sim(setup, options);
  return sim.run();
}

}  // namespace locsched
