#include "ssnav/sim/sensor.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace ssnav {

SenseResult sense(const VoxelGrid& truth, const SceneSpec& scene, const Pose& pose,
                  const SensorConfig& cfg) {
  if (truth.at(pose.position) == VoxelState::Occupied)
    throw std::invalid_argument("sense: pose inside occupied voxel");

  SenseResult out;
  out.rays.reserve(static_cast<size_t>(cfg.rays_h) * cfg.rays_v);
  out.sensed_region = Box(pose.position, pose.position);

  const double fov_h = cfg.fov_h_deg * M_PI / 180.0;
  const double fov_v = cfg.fov_v_deg * M_PI / 180.0;

  for (int iv = 0; iv < cfg.rays_v; ++iv) {
    double el = fov_v * (static_cast<double>(iv) + 0.5) / cfg.rays_v - fov_v * 0.5;
    for (int ih = 0; ih < cfg.rays_h; ++ih) {
      double az = pose.yaw + fov_h * (static_cast<double>(ih) + 0.5) / cfg.rays_h - fov_h * 0.5;
      SenseRay ray;
      ray.dir = Vec3(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
      auto res = truth.castRayFast(pose.position, ray.dir, cfg.max_range,
                                    [](VoxelState s) { return s == VoxelState::Occupied; });
      ray.hit = res.outcome == VoxelGrid::RayOutcome::Hit;
      ray.t = res.t;
      ray.endpoint = res.point;
      ray.truth_voxel = res.voxel;
      out.sensed_region.extend(ray.endpoint);
      out.rays.push_back(ray);
    }
  }

  // Group hit points by the scene object whose box owns the blocking voxel.
  std::map<size_t, std::vector<Vec3>> per_object;
  for (const auto& ray : out.rays) {
    if (!ray.hit) continue;
    Vec3 vc = truth.indexToCenter(ray.truth_voxel);
    for (size_t i = 0; i < scene.objects.size(); ++i) {
      if (scene.objects[i].box.contains(vc)) per_object[i].push_back(ray.endpoint);
    }
  }
  for (auto& [obj_idx, pts] : per_object) {
    if (static_cast<int>(pts.size()) < cfg.k_min_detection) continue;
    Detection det;
    det.label = scene.objects[obj_idx].label;
    det.points_world = std::move(pts);
    det.source_pose = pose;
    out.detections.push_back(std::move(det));
  }
  return out;
}

void integrate(VoxelGrid& grid, const Pose& pose, const std::vector<SenseRay>& rays) {
  for (const auto& ray : rays) {
    grid.traverseFast(pose.position, ray.endpoint,
                  [&](const Vec3i& idx) { grid.set(idx, VoxelState::Free); });
    if (ray.hit) grid.set(grid.worldToIndex(ray.endpoint + ray.dir * 1e-6), VoxelState::Occupied);
  }
}

}  // namespace ssnav
