#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace locsched {

// Placement relationship between a task's data and the server executing it.
enum class LocalityClass { Local = 0, RackLocal = 1, Remote = 2 };

const char* to_string(LocalityClass c);

// Cluster of M servers partitioned into racks 1..K. Server and rack ids are
// 1-based and the servers of a rack occupy a contiguous id range, so a
// topology is fully described by the per-server rack id sequence.
//
// A two-level cluster (no rack structure) is encoded as singleton racks,
// which makes the rack-local class unreachable.
class ClusterTopology {
 public:
  // Validates the raw description; throws std::invalid_argument with a
  // diagnostic naming the offending server/rack on violation.
  ClusterTopology(int num_servers, std::vector<int> rack_of);

  int num_servers() const { return static_cast<int>(rack_of_.size()); }
  int num_racks() const { return num_racks_; }
  int rack_of(int server) const;

  static ClusterTopology single_rack(int num_servers);
  static ClusterTopology singleton_racks(int num_servers);

 private:
  std::vector<int> rack_of_;  // index 0 = server 1
  int num_racks_ = 0;
};

// Replica set of a data chunk; tasks are typed by where their data lives.
class TaskType {
 public:
  // Replica ids must be strictly increasing and >= 1.
  explicit TaskType(std::vector<int> replicas);

  const std::vector<int>& replicas() const { return replicas_; }
  std::size_t size() const { return replicas_.size(); }
  bool contains(int server) const;
  std::string label() const;  // e.g. "1-2-4"

  auto operator<=>(const TaskType&) const = default;

 private:
  std::vector<int> replicas_;
};

// Local iff the server holds a replica, rack-local iff it shares a rack with
// one, remote otherwise. Throws on out-of-range ids.
LocalityClass classify_locality(const ClusterTopology& topo, const TaskType& type, int server);

// All (M choose R) replica sets in lexicographic order.
std::vector<TaskType> enumerate_task_types(const ClusterTopology& topo, int replication);

}  // namespace locsched
