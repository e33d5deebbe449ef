#pragma once

#include "ssnav/core/config.hpp"
#include "ssnav/scg/polyhedron.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace ssnav {

struct WeightedEdge {
  int a = -1;
  int b = -1;
  double w = 1.0;
};

// Undirected weighted view of the SCG used for community detection.
struct ClusterGraph {
  std::vector<int> vertices;       // sorted, unique node ids
  std::vector<WeightedEdge> edges; // a < b, one entry per pair
};

ClusterGraph clusterGraphFromScg(const SpatialConnectivityGraph& scg);

// Newman-Girvan weighted modularity with resolution gamma:
//   Q = sum_c [ S_in(c)/(2m) - gamma * (S_tot(c)/(2m))^2 ]
// where S_in counts ordered internal pairs (twice the internal weight) and
// S_tot sums member degrees. membership must cover every vertex. An edgeless
// graph scores 0. Throws std::invalid_argument on an empty graph or a
// membership that misses a vertex.
double modularity(const ClusterGraph& g, const std::map<int, int>& membership, double gamma);

// Community detection: local moving + refinement + aggregation, then a final
// stability sweep and a split of any disconnected community. Fully
// deterministic (sorted processing order, smallest-id tie breaks); the seed
// parameter is reserved. Output labels each community by its smallest member.
// Guarantees: connected communities, Q >= Q(singletons), no improving
// single-vertex move.
std::map<int, int> leidenPartition(const ClusterGraph& g, double gamma, uint64_t seed = 17);

struct Region {
  int id = 0;
  std::set<int> members;
  std::string description;
  bool visited = false;
  std::set<int> frontier_refs;
};

// Candidate graph for incremental repartitioning: the new nodes, every region
// owning a node adjacent to them, and every region adjacent to those regions.
// Regions further out are excluded. Edges are induced.
ClusterGraph extractLocalSubgraph(const SpatialConnectivityGraph& scg,
                                  const std::map<int, Region>& regions,
                                  const std::set<int>& new_nodes);

// Maintains a stable partition of the SCG into regions across incremental
// updates. Region ids start at 1; node.region_id is stamped on every update.
class RegionPartitioner {
 public:
  explicit RegionPartitioner(const RegionConfig& cfg) : cfg_(cfg) {}

  // Repartitions the local subgraph around new_nodes, relabels communities to
  // maximize overlap with prior region ids, and merges adjacent result
  // regions denser than merge_density_factor * min(internal densities).
  // Returns ids of regions whose member set changed.
  std::vector<int> update(SpatialConnectivityGraph& scg, const std::vector<int>& new_nodes);

  const std::map<int, Region>& regions() const { return regions_; }
  std::map<int, Region>& regions() { return regions_; }
  int regionOf(int node_id) const;  // -1 when unassigned

 private:
  RegionConfig cfg_;
  std::map<int, Region> regions_;
  int next_id_ = 1;
};

}  // namespace ssnav
