#include "doctest.h"
#include "locality_sched/simulation.hpp"

#include <cmath>
#include <stdexcept>

using namespace locsched;

namespace {

SimSetup single_server_setup(double rate, double alpha, PolicyKind kind = PolicyKind::JsqMw2) {
  SimSetup s{ClusterTopology::singleton_racks(1), ServiceModel(alpha, std::nullopt, alpha / 2),
             {TaskType({1})}, {rate}, {}, {}};
  s.policy.kind = kind;
  return s;
}

SimSetup pandas_setup(int servers, std::vector<double> rates, double alpha, double gamma) {
  std::vector<TaskType> types;
  for (int m = 1; m <= servers; ++m) types.emplace_back(std::vector<int>{m});
  SimSetup s{ClusterTopology::singleton_racks(servers), ServiceModel(alpha, std::nullopt, gamma),
             std::move(types), std::move(rates), {}, {}};
  s.policy.kind = PolicyKind::Pandas;
  return s;
}

std::uint64_t busy_servers(const Simulation& sim) {
  std::uint64_t n = 0;
  for (const auto& s : sim.in_service()) n += s.has_value();
  return n;
}

}  // namespace

TEST_CASE("simulation rejects bad setups") {
  auto s = single_server_setup(0.4, 0.8);
  SimOptions opts;
  opts.horizon = 0;
  CHECK_THROWS_AS(Simulation(s, opts), std::invalid_argument);  // horizon >= 1

  opts.horizon = 10;
  opts.warmup = 10;
  CHECK_THROWS_AS(Simulation(s, opts), std::invalid_argument);  // warmup < horizon

  auto over = single_server_setup(1.4, 0.8);
  SimOptions ok;
  ok.horizon = 10;
  CHECK_THROWS_AS(Simulation(over, ok), std::invalid_argument);  // Bernoulli rate > 1

  auto batch = single_server_setup(1.4, 0.8);
  batch.arrivals = {ArrivalSpec::Kind::BatchBinomial, 2};
  CHECK_NOTHROW(Simulation(batch, ok));
  batch.arrivals.batch_bound = 1;
  CHECK_THROWS_AS(Simulation(batch, ok), std::invalid_argument);  // rate > batch bound
}

TEST_CASE("empty system stays empty") {
  auto s = single_server_setup(0.0, 0.8);
  SimOptions opts;
  opts.horizon = 100;
  opts.warmup = 0;
  auto m = run_simulation(s, opts);
  CHECK(m.arrivals_total == 0);
  CHECK(m.departures_total == 0);
  CHECK(m.final_total_queue == 0);
  for (auto q : m.total_queue_trace) CHECK(q == 0);
}

TEST_CASE("a task in service with alpha=1 departs in the current slot") {
  auto s = single_server_setup(1.0, 1.0);  // every slot brings an arrival, service always fires
  SimOptions opts;
  opts.horizon = 50;
  opts.warmup = 0;
  Simulation sim(s, opts);

  sim.step();  // slot 0: the first arrival enters service, no departure yet
  CHECK(busy_servers(sim) == 1);
  CHECK(sim.metrics().departures_total == 0);
  sim.step();  // slot 1: the in-service task departs and the next one starts
  CHECK(sim.metrics().departures_total == 1);

  Simulation full(s, opts);
  auto m = full.run();
  // Completion time is departure - arrival + 1 = 2 for every task here.
  CHECK(m.mean_completion_time == doctest::Approx(2.0));
  CHECK(m.completions_by_class[0] == m.departures_post_warmup);  // all local
}

TEST_CASE("pandas serves its own queue in the arrival slot") {
  auto s = pandas_setup(2, {1.0, 0.0}, 0.9, 0.2);
  SimOptions opts;
  opts.horizon = 4;
  opts.warmup = 0;
  Simulation sim(s, opts);
  sim.step();
  // The type-1 task arrived at server 1 and went straight into service locally.
  REQUIRE(sim.in_service()[0].has_value());
  CHECK(sim.in_service()[0]->locality == LocalityClass::Local);
  CHECK(sim.in_service()[0]->start_slot == 0);
}

TEST_CASE("task conservation and non-preemption hold slot by slot") {
  for (PolicyKind kind : {PolicyKind::JsqMw2, PolicyKind::JsqMw3, PolicyKind::Pandas,
                          PolicyKind::WeightedWorkloadPriority, PolicyKind::Gcmu,
                          PolicyKind::FifoRandom}) {
    ClusterTopology topo(4, {1, 1, 2, 2});
    ServiceModel svc(0.9, 0.45, 0.2);
    std::vector<TaskType> types = {TaskType({1, 2}), TaskType({1, 3}), TaskType({2, 4})};
    SimSetup s{topo, svc, types, {0.25, 0.25, 0.25}, {}, {}};
    s.policy.kind = kind;
    SimOptions opts;
    opts.horizon = 400;
    opts.warmup = 0;
    opts.seed = 11;
    Simulation sim(s, opts);

    std::vector<std::pair<std::uint64_t, std::pair<int, LocalityClass>>> seen_in_service;
    for (int t = 0; t < 400; ++t) {
      sim.step();
      const auto& m = sim.metrics();
      std::uint64_t queued = sim.total_queued();
      CHECK(m.arrivals_total == m.departures_total + queued + busy_servers(sim));
      // Once in service, server and locality never change, and the recorded
      // locality matches the classification.
      for (int server = 1; server <= topo.num_servers(); ++server) {
        const auto& in_s = sim.in_service()[server - 1];
        if (!in_s) continue;
        CHECK(in_s->locality == classify_locality(topo, types[in_s->task.type_index], server));
        bool found = false;
        for (auto& [id, where] : seen_in_service) {
          if (id != in_s->task.id) continue;
          found = true;
          CHECK(where.first == server);
          CHECK(where.second == in_s->locality);
        }
        if (!found)
          seen_in_service.push_back({in_s->task.id, {server, in_s->locality}});
      }
    }
  }
}

TEST_CASE("jsq and pandas routing keep queued tasks local to their server") {
  for (PolicyKind kind : {PolicyKind::JsqMw2, PolicyKind::JsqMw3, PolicyKind::Pandas}) {
    ClusterTopology topo(4, {1, 1, 2, 2});
    ServiceModel svc(0.9, 0.45, 0.2);
    std::vector<TaskType> types = {TaskType({1, 2}), TaskType({3, 4})};
    SimSetup s{topo, svc, types, {0.8, 0.8}, {}, {}};
    s.policy.kind = kind;
    SimOptions opts;
    opts.horizon = 300;
    opts.warmup = 0;
    opts.seed = 3;
    Simulation sim(s, opts);
    for (int t = 0; t < 300; ++t) {
      sim.step();
      for (std::size_t qi = 0; qi < sim.queues().size(); ++qi)
        for (const Task& task : sim.queues()[qi])
          CHECK(classify_locality(topo, types[task.type_index], static_cast<int>(qi) + 1) ==
                LocalityClass::Local);
    }
  }
}

TEST_CASE("weighted-workload sub-queues hold tasks of the matching class") {
  ClusterTopology topo(4, {1, 1, 2, 2});
  ServiceModel svc(0.9, 0.45, 0.2);
  std::vector<TaskType> types = {TaskType({1, 2}), TaskType({1, 3}), TaskType({2, 4})};
  SimSetup s{topo, svc, types, {0.5, 0.5, 0.5}, {}, {}};
  s.policy.kind = PolicyKind::WeightedWorkloadPriority;
  SimOptions opts;
  opts.horizon = 300;
  opts.warmup = 0;
  opts.seed = 17;
  Simulation sim(s, opts);
  for (int t = 0; t < 300; ++t) {
    sim.step();
    for (std::size_t qi = 0; qi < sim.queues().size(); ++qi) {
      const int server = static_cast<int>(qi / 3) + 1;
      const auto cls = static_cast<LocalityClass>(qi % 3);
      for (const Task& task : sim.queues()[qi])
        CHECK(classify_locality(topo, types[task.type_index], server) == cls);
    }
  }
}

TEST_CASE("pandas never steals below the threshold") {
  auto s = pandas_setup(4, {0.54, 0.54, 0.54, 0.54}, 0.9, 0.2);
  SimOptions opts;
  opts.horizon = 20000;
  opts.warmup = 0;
  opts.seed = 23;
  auto m = run_simulation(s, opts);
  // threshold alpha/gamma = 4.5
  if (m.remote_pulls > 0)
    CHECK(static_cast<double>(m.min_qmax_at_remote_pull) * 0.2 >= 0.9);
  CHECK(m.remote_pulls > 0);  // at this load some steals should occur
}

TEST_CASE("identical seeds give identical trajectories; different seeds differ") {
  ClusterTopology topo(4, {1, 1, 2, 2});
  ServiceModel svc(0.9, 0.45, 0.2);
  std::vector<TaskType> types = {TaskType({1, 2}), TaskType({3, 4})};
  SimSetup s{topo, svc, types, {0.6, 0.6}, {}, {}};
  s.policy.kind = PolicyKind::JsqMw3;
  SimOptions opts;
  opts.horizon = 500;
  opts.warmup = 0;
  opts.seed = 77;

  Simulation a(s, opts), b(s, opts);
  for (int t = 0; t < 500; ++t) {
    a.step();
    b.step();
    CHECK(a.queue_lengths() == b.queue_lengths());
  }
  CHECK(a.metrics().arrivals_total == b.metrics().arrivals_total);

  SimOptions other = opts;
  other.seed = 78;
  auto ma = run_simulation(s, opts);
  auto mb = run_simulation(s, other);
  CHECK(ma.arrivals_total != mb.arrivals_total);  // overwhelmingly likely
}

TEST_CASE("service sampling is geometric with the class rate") {
  Rng rng(1234);
  ServiceModel svc(0.9, 0.45, 0.2);
  CHECK(sample_service_completion(rng, LocalityClass::Local, ServiceModel(1.0, std::nullopt, 0.5)));
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i)
    hits += sample_service_completion(rng, LocalityClass::RackLocal, svc);
  CHECK(std::fabs(static_cast<double>(hits) / n - 0.45) < 0.005);

  CHECK_THROWS_AS(ServiceModel(0.9, 0.45, 0.0), std::invalid_argument);  // gamma > 0 required
}

TEST_CASE("empirical mean service time matches Geo(alpha)") {
  auto s = single_server_setup(0.4, 0.8);
  SimOptions opts;
  opts.horizon = 1000000;
  opts.warmup = 0;
  opts.seed = 5;
  auto m = run_simulation(s, opts);
  CHECK(m.departures_post_warmup > 100000);
  CHECK(std::fabs(m.mean_service_by_class[0] - 1.25) / 1.25 < 0.02);
  // Stable single-server queue: mean completion exceeds the bare service time.
  CHECK(m.mean_completion_time >= 1.25);
}

TEST_CASE("batch binomial arrivals hit the configured mean") {
  auto s = single_server_setup(1.6, 0.9);
  s.rates = {1.6};
  s.arrivals = {ArrivalSpec::Kind::BatchBinomial, 4};
  s.policy.kind = PolicyKind::JsqMw2;
  SimOptions opts;
  opts.horizon = 200000;
  opts.warmup = 0;
  opts.seed = 9;
  Simulation sim(s, opts);
  for (int t = 0; t < 200000; ++t) sim.step();
  const double mean = static_cast<double>(sim.metrics().arrivals_total) / 200000.0;
  CHECK(std::fabs(mean - 1.6) < 0.02);
}

TEST_CASE("random scheduling order stays deterministic per seed") {
  ClusterTopology topo(4, {1, 1, 2, 2});
  ServiceModel svc(0.9, 0.45, 0.2);
  std::vector<TaskType> types = {TaskType({1, 2}), TaskType({3, 4})};
  SimSetup s{topo, svc, types, {0.6, 0.6}, {}, {}};
  s.policy.kind = PolicyKind::JsqMw3;
  SimOptions opts;
  opts.horizon = 300;
  opts.warmup = 0;
  opts.seed = 13;
  opts.random_schedule_order = true;
  auto a = run_simulation(s, opts);
  auto b = run_simulation(s, opts);
  CHECK(a.arrivals_total == b.arrivals_total);
  CHECK(a.departures_total == b.departures_total);
  CHECK(a.total_queue_trace == b.total_queue_trace);
}
