#pragma once

#include "ssnav/core/config.hpp"
#include "ssnav/core/geometry.hpp"
#include "ssnav/frontier/gcm.hpp"
#include "ssnav/scg/polyhedron.hpp"
#include "ssnav/sim/voxel_grid.hpp"

#include <map>
#include <optional>
#include <vector>

namespace ssnav {

struct Frontier {
  int id = -1;
  std::vector<Vec3i> voxels;  // world lattice indices, sorted
  Vec3 centroid{0.0, 0.0, 0.0};
  Pose viewpoint;
  double gain = 0.0;
  bool dormant = false;  // no reachable viewpoint yet; retried every cycle
  int anchor_node = -1;
};

// Incremental frontier tracker. Per cycle: stored frontiers whose member
// voxels can be refuted by the current window (not Free anymore, no Unknown
// 6-neighbor left, or swallowed by a visited coverage cell) are dropped
// whole; fresh candidates inside the sensed region are clustered by
// 26-connectivity and get a ring-sampled viewpoint with visible-unknown gain.
class FrontierMap {
 public:
  FrontierMap(const FrontierConfig& fcfg, const SensorConfig& scfg)
      : fcfg_(fcfg), scfg_(scfg) {}

  void update(const VoxelGrid& grid, const GlobalCoverageMask& gcm, const Box& sensed_region,
              const SpatialConnectivityGraph& scg, const Vec3& observer);

  const std::map<int, Frontier>& frontiers() const { return frontiers_; }
  // region of the anchor node, re-resolved on every call; 0 before any partition
  int regionOf(int frontier_id, const SpatialConnectivityGraph& scg) const;

  // a Free voxel bordering Unknown inside the window (world lattice index)
  static bool isFrontierVoxel(const VoxelGrid& grid, const Vec3i& world_voxel);

 private:
  FrontierConfig fcfg_;
  SensorConfig scfg_;
  std::map<int, Frontier> frontiers_;
  int next_id_ = 0;

  bool survives(const VoxelGrid& grid, const GlobalCoverageMask& gcm, const Frontier& f) const;
  std::optional<std::pair<Pose, double>> bestViewpoint(const VoxelGrid& grid,
                                                       const Vec3& centroid) const;
  double viewGain(const VoxelGrid& grid, const Vec3& vp, double yaw) const;
};

}  // namespace ssnav
