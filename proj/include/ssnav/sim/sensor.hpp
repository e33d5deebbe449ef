#pragma once

#include "ssnav/core/config.hpp"
#include "ssnav/core/geometry.hpp"
#include "ssnav/sim/scene.hpp"
#include "ssnav/sim/voxel_grid.hpp"

#include <string>
#include <vector>

namespace ssnav {

struct Detection {
  std::string label;
  std::vector<Vec3> points_world;
  Pose source_pose;
};

struct SenseRay {
  Vec3 dir;          // unit, world frame
  bool hit = false;
  double t = 0.0;    // hit distance, or traversed free distance
  Vec3 endpoint;     // hit point or truncation/max-range point
  Vec3i truth_voxel; // blocking voxel in the truth grid (valid when hit)
};

struct SenseResult {
  std::vector<SenseRay> rays;
  std::vector<Detection> detections;
  Box sensed_region;  // tight box around the ray endpoints and the sensor origin
};

// Simulated depth sweep: casts a fixed angular grid of rays through the
// horizontal/vertical field of view in the ground-truth grid. Each scene
// object observed with at least k_min_detection surface points yields one
// Detection carrying exactly the hit points on that object's box.
SenseResult sense(const VoxelGrid& truth, const SceneSpec& scene, const Pose& pose,
                  const SensorConfig& cfg);

// Writes the sweep into the rolling local grid, rays in index order:
// traversed voxels become Free, terminal hit voxels Occupied.
void integrate(VoxelGrid& grid, const Pose& pose, const std::vector<SenseRay>& rays);

}  // namespace ssnav
