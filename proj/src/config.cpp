#include "locality_sched/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace locsched {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw std::invalid_argument("config: " + path + ": " + msg);
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end())
      fail(path, "unknown key \"" + key + "\"");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing required key \"") + key + "\"");
  return *it;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::int64_t integer_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

ClusterTopology parse_topology(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"num_servers", "rack_of"});
  const int m = static_cast<int>(integer_at(require(j, path, "num_servers"), path + ".num_servers"));
  const json& racks = require(j, path, "rack_of");
  if (!racks.is_array()) fail(path + ".rack_of", "expected an array of rack ids");
  std::vector<int> rack_of;
  for (std::size_t i = 0; i < racks.size(); ++i)
    rack_of.push_back(static_cast<int>(
        integer_at(racks[i], path + ".rack_of[" + std::to_string(i) + "]")));
  try {
    return ClusterTopology(m, std::move(rack_of));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

ServiceModel parse_service(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"alpha", "beta", "gamma"});
  const double alpha = number_at(require(j, path, "alpha"), path + ".alpha");
  const double gamma = number_at(require(j, path, "gamma"), path + ".gamma");
  std::optional<double> beta;
  if (j.contains("beta")) beta = number_at(j["beta"], path + ".beta");
  try {
    return ServiceModel(alpha, beta, gamma);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

TaskType parse_task_type(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of server ids");
  std::vector<int> replicas;
  for (std::size_t i = 0; i < j.size(); ++i)
    replicas.push_back(
        static_cast<int>(integer_at(j[i], path + "[" + std::to_string(i) + "]")));
  try {
    return TaskType(std::move(replicas));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

PolicyConfig parse_policy(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"kind", "theta", "coefficients"});
  PolicyConfig pc;
  try {
    pc.kind = parse_policy_kind(string_at(require(j, path, "kind"), path + ".kind"));
  } catch (const std::invalid_argument& e) {
    fail(path + ".kind", e.what());
  }
  if (j.contains("theta")) {
    if (pc.kind != PolicyKind::Gcmu) fail(path + ".theta", "theta applies to gcmu only");
    pc.theta = number_at(j["theta"], path + ".theta");
    if (!(pc.theta > 0.0)) fail(path + ".theta", "theta must be > 0");
  }
  if (j.contains("coefficients")) {
    if (pc.kind != PolicyKind::Gcmu)
      fail(path + ".coefficients", "coefficients apply to gcmu only");
    expect_object(j["coefficients"], path + ".coefficients");
    for (const auto& [label, value] : j["coefficients"].items()) {
      std::vector<int> ids;
      std::stringstream ss(label);
      std::string part;
      while (std::getline(ss, part, '-')) {
        try {
          ids.push_back(std::stoi(part));
        } catch (...) {
          fail(path + ".coefficients", "bad task type label \"" + label + "\"");
        }
      }
      const double c = number_at(value, path + ".coefficients." + label);
      if (!(c > 0.0)) fail(path + ".coefficients." + label, "coefficients must be > 0");
      try {
        pc.gcmu_coefficients.emplace_back(TaskType(std::move(ids)), c);
      } catch (const std::invalid_argument& e) {
        fail(path + ".coefficients", e.what());
      }
    }
  }
  return pc;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
  }
  expect_object(root, "$");
  check_keys(root, "$",
             {"topology", "service", "arrivals", "policy", "policies", "sweep", "horizon",
              "warmup", "seeds", "trace_stride", "scheduling_order", "output"});

  ClusterTopology topo = parse_topology(require(root, "$", "topology"), "$.topology");
  ServiceModel svc = parse_service(require(root, "$", "service"), "$.service");
  if (!svc.has_rack_level() && topo.num_racks() < topo.num_servers())
    fail("$.service", "beta is required when any rack holds more than one server");

  // Arrivals: an explicit type list or a uniform generator over all types.
  const json& jarr = require(root, "$", "arrivals");
  expect_object(jarr, "$.arrivals");
  check_keys(jarr, "$.arrivals",
             {"kind", "batch_bound", "types", "generator", "replication", "aggregate_rate"});
  ArrivalSpec arrivals;
  if (jarr.contains("kind")) {
    const std::string kind = string_at(jarr["kind"], "$.arrivals.kind");
    if (kind == "bernoulli")
      arrivals.kind = ArrivalSpec::Kind::Bernoulli;
    else if (kind == "batch_binomial")
      arrivals.kind = ArrivalSpec::Kind::BatchBinomial;
    else
      fail("$.arrivals.kind", "expected \"bernoulli\" or \"batch_binomial\"");
  }
  if (jarr.contains("batch_bound")) {
    if (arrivals.kind != ArrivalSpec::Kind::BatchBinomial)
      fail("$.arrivals.batch_bound", "only meaningful for batch_binomial arrivals");
    arrivals.batch_bound =
        static_cast<int>(integer_at(jarr["batch_bound"], "$.arrivals.batch_bound"));
    if (arrivals.batch_bound < 1) fail("$.arrivals.batch_bound", "must be >= 1");
  } else if (arrivals.kind == ArrivalSpec::Kind::BatchBinomial) {
    fail("$.arrivals", "batch_binomial requires batch_bound");
  }

  ArrivalVector base;
  if (jarr.contains("types") == jarr.contains("generator"))
    fail("$.arrivals", "give exactly one of \"types\" or \"generator\"");
  if (jarr.contains("types")) {
    const json& types = jarr["types"];
    if (!types.is_array() || types.empty())
      fail("$.arrivals.types", "expected a non-empty array");
    for (std::size_t i = 0; i < types.size(); ++i) {
      const std::string p = "$.arrivals.types[" + std::to_string(i) + "]";
      expect_object(types[i], p);
      check_keys(types[i], p, {"replicas", "rate"});
      TaskType t = parse_task_type(require(types[i], p, "replicas"), p + ".replicas");
      const double rate = number_at(require(types[i], p, "rate"), p + ".rate");
      if (rate < 0.0) fail(p + ".rate", "must be >= 0");
      base.push_back({std::move(t), rate});
    }
  } else {
    if (string_at(jarr["generator"], "$.arrivals.generator") != "uniform_over_types")
      fail("$.arrivals.generator", "only \"uniform_over_types\" is supported");
    const int r = static_cast<int>(
        integer_at(require(jarr, "$.arrivals", "replication"), "$.arrivals.replication"));
    const double aggregate =
        number_at(require(jarr, "$.arrivals", "aggregate_rate"), "$.arrivals.aggregate_rate");
    if (aggregate < 0.0) fail("$.arrivals.aggregate_rate", "must be >= 0");
    std::vector<TaskType> all;
    try {
      all = enumerate_task_types(topo, r);
    } catch (const std::invalid_argument& e) {
      fail("$.arrivals.replication", e.what());
    }
    const double per_type = aggregate / static_cast<double>(all.size());
    for (auto& t : all) base.push_back({std::move(t), per_type});
  }
  try {
    base = normalize_arrival_vector(topo, std::move(base));
  } catch (const std::invalid_argument& e) {
    fail("$.arrivals", e.what());
  }

  // Policies: a single object under "policy" or a list under "policies".
  std::vector<PolicyConfig> policies;
  if (root.contains("policy") == root.contains("policies"))
    fail("$", "give exactly one of \"policy\" or \"policies\"");
  if (root.contains("policy")) {
    policies.push_back(parse_policy(root["policy"], "$.policy"));
  } else {
    const json& list = root["policies"];
    if (!list.is_array() || list.empty()) fail("$.policies", "expected a non-empty array");
    for (std::size_t i = 0; i < list.size(); ++i)
      policies.push_back(parse_policy(list[i], "$.policies[" + std::to_string(i) + "]"));
  }

  // Sweep: list of load fractions relative to the capacity boundary.
  std::vector<double> sweep;
  const json& jsweep = require(root, "$", "sweep");
  if (!jsweep.is_array() || jsweep.empty())
    fail("$.sweep", "expected a non-empty array of rho values");
  for (std::size_t i = 0; i < jsweep.size(); ++i) {
    const double rho = number_at(jsweep[i], "$.sweep[" + std::to_string(i) + "]");
    if (!(rho > 0.0) || rho > 1.05)
      fail("$.sweep[" + std::to_string(i) + "]", "rho must be in (0, 1.05]");
    sweep.push_back(rho);
  }

  const std::int64_t horizon = integer_at(require(root, "$", "horizon"), "$.horizon");
  if (horizon < 1) fail("$.horizon", "must be >= 1");
  std::int64_t warmup = horizon / 5;
  bool warmup_explicit = false;
  if (root.contains("warmup")) {
    warmup = integer_at(root["warmup"], "$.warmup");
    warmup_explicit = true;
    if (warmup < 0) fail("$.warmup", "must be >= 0");
  }
  if (warmup >= horizon) fail("$.warmup", "must be < horizon");

  std::vector<std::uint64_t> seeds;
  const json& jseeds = require(root, "$", "seeds");
  if (!jseeds.is_array() || jseeds.empty())
    fail("$.seeds", "expected a non-empty array of integers");
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < jseeds.size(); ++i) {
    const auto s = static_cast<std::uint64_t>(
        integer_at(jseeds[i], "$.seeds[" + std::to_string(i) + "]"));
    if (!seen.insert(s).second)
      fail("$.seeds[" + std::to_string(i) + "]", "seeds must be distinct");
    seeds.push_back(s);
  }

  std::int64_t trace_stride = 0;
  if (root.contains("trace_stride")) {
    trace_stride = integer_at(root["trace_stride"], "$.trace_stride");
    if (trace_stride < 1) fail("$.trace_stride", "must be >= 1");
  }

  bool random_order = false;
  if (root.contains("scheduling_order")) {
    const std::string order = string_at(root["scheduling_order"], "$.scheduling_order");
    if (order == "random")
      random_order = true;
    else if (order != "ascending")
      fail("$.scheduling_order", "expected \"ascending\" or \"random\"");
  }

  std::optional<std::string> output;
  if (root.contains("output")) output = string_at(root["output"], "$.output");

  ExperimentConfig cfg{std::move(topo),
                       std::move(svc),
                       arrivals,
                       {},
                       {},
                       std::move(policies),
                       std::move(sweep),
                       horizon,
                       warmup,
                       warmup_explicit,
                       std::move(seeds),
                       trace_stride,
                       random_order,
                       std::move(output)};
  cfg.types.reserve(base.size());
  cfg.base_rates.reserve(base.size());
  for (auto& tr : base) {
    cfg.types.push_back(std::move(tr.type));
    cfg.base_rates.push_back(tr.rate);
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open \"" + path + "\"");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace locsched
