#include "locality_sched/topology.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace locsched {

const char* to_string(LocalityClass c) {
  switch (c) {
    case LocalityClass::Local: return "local";
    case LocalityClass::RackLocal: return "rack_local";
    case LocalityClass::Remote: return "remote";
  }
  return "?";
}

ClusterTopology::ClusterTopology(int num_servers, std::vector<int> rack_of) {
  if (num_servers <= 0) throw std::invalid_argument("topology: num_servers must be positive");
  if (static_cast<int>(rack_of.size()) != num_servers)
    throw std::invalid_argument("topology: rack_of must list one rack id per server");

  // Racks must be numbered 1..K in server order with contiguous id runs.
  if (rack_of[0] != 1)
    throw std::invalid_argument("topology: server 1 must be in rack 1, got rack " +
                                std::to_string(rack_of[0]));
  int current = 1;
  for (int m = 1; m < num_servers; ++m) {
    const int r = rack_of[m];
    if (r < 1)
      throw std::invalid_argument("topology: server " + std::to_string(m + 1) +
                                  " has invalid rack id " + std::to_string(r));
    if (r == current) continue;
    if (r == current + 1) {
      current = r;
      continue;
    }
    if (r > current + 1)
      throw std::invalid_argument("topology: rack " + std::to_string(current + 1) +
                                  " is empty (server " + std::to_string(m + 1) +
                                  " jumps to rack " + std::to_string(r) + ")");
    // r <= current and the run for r has already ended.
    throw std::invalid_argument("topology: rack " + std::to_string(r) + " not contiguous");
  }
  rack_of_ = std::move(rack_of);
  num_racks_ = current;
}

int ClusterTopology::rack_of(int server) const {
  if (server < 1 || server > num_servers())
    throw std::invalid_argument("topology: server id " + std::to_string(server) +
                                " out of range 1.." + std::to_string(num_servers()));
  return rack_of_[server - 1];
}

ClusterTopology ClusterTopology::single_rack(int num_servers) {
  return ClusterTopology(num_servers, std::vector<int>(num_servers, 1));
}

ClusterTopology ClusterTopology::singleton_racks(int num_servers) {
  std::vector<int> racks(num_servers);
  std::iota(racks.begin(), racks.end(), 1);
  return ClusterTopology(num_servers, std::move(racks));
}

TaskType::TaskType(std::vector<int> replicas) {
  if (replicas.empty()) throw std::invalid_argument("task type: replica set must be non-empty");
  for (std::size_t i = 0; i < replicas.size(); ++i) {
    if (replicas[i] < 1)
      throw std::invalid_argument("task type: replica ids must be >= 1");
    if (i > 0 && replicas[i] <= replicas[i - 1])
      throw std::invalid_argument("task type: replica ids must be strictly increasing");
  }
  replicas_ = std::move(replicas);
}

bool TaskType::contains(int server) const {
  return std::binary_search(replicas_.begin(), replicas_.end(), server);
}

std::string TaskType::label() const {
  std::string s;
  for (std::size_t i = 0; i < replicas_.size(); ++i) {
    if (i > 0) s += '-';
    s += std::to_string(replicas_[i]);
  }
  return s;
}

LocalityClass classify_locality(const ClusterTopology& topo, const TaskType& type, int server) {
  if (server < 1 || server > topo.num_servers())
    throw std::invalid_argument("classify_locality: server id " + std::to_string(server) +
                                " out of range");
  if (type.replicas().back() > topo.num_servers())
    throw std::invalid_argument("classify_locality: task type " + type.label() +
                                " references a server beyond M=" +
                                std::to_string(topo.num_servers()));
  if (type.contains(server)) return LocalityClass::Local;
  const int rack = topo.rack_of(server);
  for (int replica : type.replicas())
    if (topo.rack_of(replica) == rack) return LocalityClass::RackLocal;
  return LocalityClass::Remote;
}

std::vector<TaskType> enumerate_task_types(const ClusterTopology& topo, int replication) {
  const int m = topo.num_servers();
  if (replication < 1 || replication > m)
    throw std::invalid_argument("enumerate_task_types: replication " +
                                std::to_string(replication) + " out of range 1.." +
                                std::to_string(m));
  std::vector<TaskType> out;
  std::vector<int> combo(replication);
  std::iota(combo.begin(), combo.end(), 1);
  for (;;) {
    out.emplace_back(combo);
    int i = replication - 1;
    while (i >= 0 && combo[i] == m - (replication - 1 - i)) --i;
    if (i < 0) break;
    ++combo[i];
    for (int j = i + 1; j < replication; ++j) combo[j] = combo[j - 1] + 1;
  }
  return out;
}

}  // namespace locsched
