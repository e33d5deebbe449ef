#include "ssnav/frontier/frontier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <set>

namespace ssnav {

namespace {

constexpr std::array<std::array<int, 3>, 6> kFaceNeighbors{
    {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};

}  // namespace

bool FrontierMap::isFrontierVoxel(const VoxelGrid& grid, const Vec3i& world_voxel) {
  Vec3i local = grid.worldToLocalVoxel(world_voxel);
  if (!grid.inBounds(local) || grid.at(local) != VoxelState::Free) return false;
  for (const auto& d : kFaceNeighbors) {
    Vec3i nb = local + Vec3i(d[0], d[1], d[2]);
    if (grid.inBounds(nb) && grid.at(nb) == VoxelState::Unknown) return true;
  }
  return false;
}

bool FrontierMap::survives(const VoxelGrid& grid, const GlobalCoverageMask& gcm,
                           const Frontier& f) const {
  for (const Vec3i& w : f.voxels) {
    Vec3 center = grid.worldVoxelCenter(w);
    if (gcm.visited(gcm.cellOf(center))) return false;
    Vec3i local = grid.worldToLocalVoxel(w);
    if (!grid.inBounds(local)) continue;  // out of window: cannot be refuted
    if (grid.at(local) != VoxelState::Free) return false;
    bool has_unknown = false;
    bool all_neighbors_visible = true;
    for (const auto& d : kFaceNeighbors) {
      Vec3i nb = local + Vec3i(d[0], d[1], d[2]);
      if (!grid.inBounds(nb))
        all_neighbors_visible = false;
      else if (grid.at(nb) == VoxelState::Unknown)
        has_unknown = true;
    }
    if (!has_unknown && all_neighbors_visible) return false;
  }
  return true;
}

double FrontierMap::viewGain(const VoxelGrid& grid, const Vec3& vp, double yaw) const {
  const double range = fcfg_.gain_range;
  const double half_h = scfg_.fov_h_deg * M_PI / 360.0;
  const double half_v = scfg_.fov_v_deg * M_PI / 360.0;

  // anything past the vertical FOV cannot pass the elevation test below
  const double z_span = range * std::sin(half_v) + grid.resolution();
  Vec3i lo = grid.worldToIndex(vp - Vec3(range, range, z_span));
  Vec3i hi = grid.worldToIndex(vp + Vec3(range, range, z_span));
  lo = lo.cwiseMax(Vec3i(0, 0, 0));
  hi = hi.cwiseMin(grid.dims() - Vec3i(1, 1, 1));

  double count = 0.0;
  for (int y = lo.y(); y <= hi.y(); ++y)
    for (int x = lo.x(); x <= hi.x(); ++x) {
      // azimuth is constant along a column; reject whole columns early
      Vec3 base = grid.indexToCenter(Vec3i(x, y, lo.z())) - vp;
      if (std::abs(wrapAngle(std::atan2(base.y(), base.x()) - yaw)) > half_h) continue;
      for (int z = lo.z(); z <= hi.z(); ++z) {
        Vec3i idx(x, y, z);
        if (grid.at(idx) != VoxelState::Unknown) continue;
        Vec3 c = grid.indexToCenter(idx);
        Vec3 v = c - vp;
        double dist = v.norm();
        if (dist > range || dist < 1e-9) continue;
        double horiz = std::hypot(v.x(), v.y());
        if (std::atan2(std::abs(v.z()), horiz) > half_v) continue;
        // optimistic occlusion: only mapped obstacles block the view
        auto rr = grid.castRayFast(vp, v / dist, dist,
                               [](VoxelState s) { return s == VoxelState::Occupied; });
        if (rr.outcome == VoxelGrid::RayOutcome::Hit) continue;
        count += 1.0;
      }
    }
  return count;
}

std::optional<std::pair<Pose, double>> FrontierMap::bestViewpoint(const VoxelGrid& grid,
                                                                  const Vec3& centroid) const {
  std::optional<std::pair<Pose, double>> best;
  double best_dist = 0.0;
  for (double r : fcfg_.ring_radii)
    for (int k = 0; k < fcfg_.ring_yaw_samples; ++k) {
      double theta = 2.0 * M_PI * k / fcfg_.ring_yaw_samples;
      Vec3 pos = centroid + r * Vec3(std::cos(theta), std::sin(theta), 0.0);
      Vec3i local = grid.worldToIndex(pos);
      if (!grid.inBounds(local) || grid.at(local) != VoxelState::Free) continue;
      Vec3 to_centroid = centroid - pos;
      double d = to_centroid.norm();
      if (d > 1e-9) {
        auto rr = grid.castRayFast(pos, to_centroid / d, d,
                              [](VoxelState s) { return s != VoxelState::Free; });
        // allow the terminal voxel to clip the unknown seam
        if (rr.outcome == VoxelGrid::RayOutcome::Hit && rr.t < d - 1.5 * grid.resolution())
          continue;
      }
      Pose vp;
      vp.position = pos;
      vp.yaw = std::atan2(to_centroid.y(), to_centroid.x());
      double gain = viewGain(grid, pos, vp.yaw);
      if (!best || gain > best->second || (gain == best->second && r < best_dist)) {
        best = {vp, gain};
        best_dist = r;
      }
    }
  return best;
}

void FrontierMap::update(const VoxelGrid& grid, const GlobalCoverageMask& gcm,
                         const Box& sensed_region, const SpatialConnectivityGraph& scg,
                         const Vec3& observer) {
  // whole-frontier invalidation
  for (auto it = frontiers_.begin(); it != frontiers_.end();) {
    if (survives(grid, gcm, it->second))
      ++it;
    else
      it = frontiers_.erase(it);
  }

  std::set<Vec3i, Vec3iLess> owned;
  for (const auto& [id, f] : frontiers_)
    for (const Vec3i& w : f.voxels) owned.insert(w);

  // fresh candidates: frontier voxels inside the sensed region, skipping
  // visited coverage cells and voxels already owned by a surviving frontier
  std::set<Vec3i, Vec3iLess> candidates;
  Box window = grid.bounds();
  Box scan = sensed_region.intersection(window);
  if (!scan.isEmpty()) {
    Vec3i lo = grid.worldToIndex(scan.min()).cwiseMax(Vec3i(0, 0, 0));
    Vec3i hi = grid.worldToIndex(scan.max()).cwiseMin(grid.dims() - Vec3i(1, 1, 1));
    for (int z = lo.z(); z <= hi.z(); ++z)
      for (int y = lo.y(); y <= hi.y(); ++y)
        for (int x = lo.x(); x <= hi.x(); ++x) {
          Vec3i local(x, y, z);
          Vec3 center = grid.indexToCenter(local);
          if (!sensed_region.contains(center)) continue;
          Vec3i w = grid.localToWorldVoxel(local);
          if (owned.count(w)) continue;
          if (gcm.visited(gcm.cellOf(center))) continue;
          if (isFrontierVoxel(grid, w)) candidates.insert(w);
        }
  }

  // cluster by 26-connectivity, visiting in lattice order for determinism
  int anchor = scg.size() > 0 ? scg.locate(observer) : -1;
  std::set<Vec3i, Vec3iLess> pending = candidates;
  while (!pending.empty()) {
    Vec3i start = *pending.begin();
    pending.erase(pending.begin());
    std::vector<Vec3i> cluster{start};
    std::deque<Vec3i> bfs{start};
    while (!bfs.empty()) {
      Vec3i cur = bfs.front();
      bfs.pop_front();
      for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0 && dz == 0) continue;
            Vec3i nb = cur + Vec3i(dx, dy, dz);
            auto it = pending.find(nb);
            if (it == pending.end()) continue;
            pending.erase(it);
            cluster.push_back(nb);
            bfs.push_back(nb);
          }
    }
    if (static_cast<int>(cluster.size()) < fcfg_.min_cluster_voxels) continue;

    Frontier f;
    f.id = next_id_++;
    std::sort(cluster.begin(), cluster.end(), Vec3iLess{});
    f.voxels = std::move(cluster);
    Vec3 sum = Vec3::Zero();
    for (const Vec3i& w : f.voxels) sum += grid.worldVoxelCenter(w);
    f.centroid = sum / static_cast<double>(f.voxels.size());
    f.anchor_node = anchor;
    if (auto vp = bestViewpoint(grid, f.centroid)) {
      f.viewpoint = vp->first;
      f.gain = vp->second;
    } else {
      f.dormant = true;
    }
    frontiers_[f.id] = std::move(f);
  }

  // dormant frontiers retry for a viewpoint each cycle
  for (auto& [id, f] : frontiers_) {
    if (!f.dormant) continue;
    if (auto vp = bestViewpoint(grid, f.centroid)) {
      f.viewpoint = vp->first;
      f.gain = vp->second;
      f.dormant = false;
    }
  }
}

int FrontierMap::regionOf(int frontier_id, const SpatialConnectivityGraph& scg) const {
  auto it = frontiers_.find(frontier_id);
  if (it == frontiers_.end() || it->second.anchor_node < 0 ||
      it->second.anchor_node >= static_cast<int>(scg.size()))
    return 0;
  return scg.node(it->second.anchor_node).region_id;
}

}  // namespace ssnav
