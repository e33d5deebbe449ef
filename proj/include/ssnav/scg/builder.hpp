#pragma once

#include "ssnav/core/config.hpp"
#include "ssnav/scg/polyhedron.hpp"
#include "ssnav/sim/voxel_grid.hpp"

#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace ssnav {

// Opening in a polyhedron boundary through which expansion continues.
struct BoundaryCluster {
  std::vector<int> face_indices;
  Vec3 representative_normal;  // area-weighted mean of face normals, unit
  Vec3 nexus;                  // cluster center projected onto the mean plane
};

// Quasi-uniform unit directions (Fibonacci sphere). n >= 4.
std::vector<Vec3> fibonacciDirections(int n);

// Grows a convex cell at seed by ray casting each direction in the grid:
// an Occupied or Unknown hit within r_max yields a Contact vertex at the
// entry point, otherwise a Free vertex at seed + r_max * dir. Throws
// std::invalid_argument if the seed voxel is not Free; returns nullopt on
// hull degeneracy.
std::optional<Polyhedron> expandPolyhedron(const VoxelGrid& grid, const Vec3& seed,
                                           const ScgConfig& cfg);

// Faces touching at least one Free vertex, grouped by adjacency; groups are
// split when they exceed max_cluster_faces or any pairwise normal deviation
// exceeds theta_split.
std::vector<BoundaryCluster> extractBoundaryClusters(const Polyhedron& p, int max_faces,
                                                     double theta_split_rad);

// Extends outward from the cluster nexus along its normal. Returns the
// farthest candidate <= d_max whose approach segment is free and which clears
// r_safe from occupied voxels; nullopt when nothing beyond t_min qualifies.
std::optional<Vec3> findNewExpandSeed(const BoundaryCluster& cluster, const VoxelGrid& grid,
                                      const ScgConfig& cfg);

// Edges for a freshly built node: mandatory parent link, collision links to
// hull-overlapping nodes, and visibility links within r_vis along a free
// centroid-to-centroid segment. Duplicates collapse with priority
// Parent > Collision > Visibility.
std::vector<ScgEdge> updateTopology(const SpatialConnectivityGraph& scg, const Polyhedron& p_new,
                                    int parent, const VoxelGrid& grid, const ScgConfig& cfg);

// Incremental graph builder. Boundary clusters persist across updates until
// they either spawn a node or their seed becomes permanently enclosed.
class ScgBuilder {
 public:
  explicit ScgBuilder(const ScgConfig& cfg) : cfg_(cfg) {}

  // Runs one update cycle at the current position; returns new node ids.
  std::vector<int> update(const VoxelGrid& grid, const Vec3& position);

  const SpatialConnectivityGraph& scg() const { return scg_; }
  SpatialConnectivityGraph& scg() { return scg_; }
  const ScgConfig& config() const { return cfg_; }
  size_t pendingClusterCount() const;

 private:
  enum class ClusterStatus : uint8_t { Pending, Spawned, Enclosed };
  struct TrackedCluster {
    BoundaryCluster cluster;
    int node_id;
    ClusterStatus status = ClusterStatus::Pending;
    // last blocking profile along the expansion axis; retries are skipped
    // until the profile changes (occupancy is monotone, so this is sound)
    bool probe_valid = false;
    double probe_t = 0.0;
    int probe_state = -1;
  };

  int addNode(Polyhedron p, int parent, const VoxelGrid& grid);
  bool seedEnclosed(const Vec3& seed) const;

  ScgConfig cfg_;
  SpatialConnectivityGraph scg_;
  std::deque<size_t> queue_;             // indices into clusters_, FIFO
  std::vector<TrackedCluster> clusters_;
};

}  // namespace ssnav
