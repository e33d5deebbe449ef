#pragma once

#include "ssnav/core/geometry.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace ssnav {

enum class VoxelState : uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

// Dense tri-state voxel grid. Used both for the global ground-truth grid and
// for the rolling local window; the origin always lies on the global voxel
// lattice so that windows rolled by recenter() stay aligned with each other
// and with the world-index lattice.
class VoxelGrid {
 public:
  VoxelGrid() = default;
  VoxelGrid(const Vec3& origin, const Vec3i& dims, double resolution,
            VoxelState fill = VoxelState::Unknown);

  // Window of the given metric size centered (after lattice snapping) on center.
  static VoxelGrid makeWindow(const Vec3& center, const Vec3& size, double resolution);

  const Vec3& origin() const { return origin_; }
  const Vec3i& dims() const { return dims_; }
  double resolution() const { return res_; }
  Box bounds() const { return Box(origin_, origin_ + dims_.cast<double>() * res_); }
  Vec3 center() const { return origin_ + dims_.cast<double>() * res_ * 0.5; }
  size_t voxelCount() const { return states_.size(); }

  bool inBounds(const Vec3i& idx) const {
    return (idx.array() >= 0).all() && (idx.array() < dims_.array()).all();
  }
  bool inBounds(const Vec3& p) const { return inBounds(worldToIndex(p)); }

  Vec3i worldToIndex(const Vec3& p) const {
    Vec3 q = (p - origin_) / res_;
    return Vec3i(static_cast<int>(std::floor(q.x())), static_cast<int>(std::floor(q.y())),
                 static_cast<int>(std::floor(q.z())));
  }
  Vec3 indexToCenter(const Vec3i& idx) const {
    return origin_ + (idx.cast<double>() + Vec3(0.5, 0.5, 0.5)) * res_;
  }

  // Global lattice index: floor(world / resolution), independent of the window origin.
  Vec3i worldVoxel(const Vec3& p) const {
    return Vec3i(static_cast<int>(std::floor(p.x() / res_)),
                 static_cast<int>(std::floor(p.y() / res_)),
                 static_cast<int>(std::floor(p.z() / res_)));
  }
  Vec3i localToWorldVoxel(const Vec3i& idx) const { return idx + originVoxel(); }
  Vec3i worldToLocalVoxel(const Vec3i& world_idx) const { return world_idx - originVoxel(); }
  Vec3i originVoxel() const {
    return Vec3i(static_cast<int>(std::llround(origin_.x() / res_)),
                 static_cast<int>(std::llround(origin_.y() / res_)),
                 static_cast<int>(std::llround(origin_.z() / res_)));
  }
  Vec3 worldVoxelCenter(const Vec3i& wv) const {
    return (wv.cast<double>() + Vec3(0.5, 0.5, 0.5)) * res_;
  }

  size_t linearIndex(const Vec3i& idx) const {
    return (static_cast<size_t>(idx.z()) * dims_.y() + idx.y()) * dims_.x() + idx.x();
  }
  Vec3i fromLinear(size_t lin) const {
    int x = static_cast<int>(lin % dims_.x());
    int y = static_cast<int>((lin / dims_.x()) % dims_.y());
    int z = static_cast<int>(lin / (static_cast<size_t>(dims_.x()) * dims_.y()));
    return Vec3i(x, y, z);
  }

  VoxelState at(const Vec3i& idx) const {
    return inBounds(idx) ? states_[linearIndex(idx)] : VoxelState::Unknown;
  }
  VoxelState at(const Vec3& p) const { return at(worldToIndex(p)); }
  void set(const Vec3i& idx, VoxelState s) {
    if (inBounds(idx)) states_[linearIndex(idx)] = s;
  }
  const std::vector<VoxelState>& states() const { return states_; }
  std::vector<VoxelState>& states() { return states_; }

  size_t countState(VoxelState s) const;

  // Shift the window so that new_center is interior. Overlapping voxels keep
  // their state; voxels entering the window are Unknown.
  void recenter(const Vec3& new_center);

  enum class RayOutcome { Hit, MaxRange, LeftGrid };
  struct RayResult {
    RayOutcome outcome = RayOutcome::MaxRange;
    double t = 0.0;    // distance to the hit-voxel entry plane, or to the ray end
    Vec3i voxel{0, 0, 0};  // blocking voxel (valid for Hit)
    Vec3 point{0.0, 0.0, 0.0};  // hit entry point / truncation point
  };

  // Amortized grid marching from origin along dir (unit) up to max_dist.
  // A voxel whose state satisfies `blocks` stops the ray at its entry plane.
  // The starting voxel is never treated as blocking.
  RayResult castRay(const Vec3& origin, const Vec3& dir, double max_dist,
                    const std::function<bool(VoxelState)>& blocks) const;

  // Same algorithm with an inlineable predicate; the hot paths use this.
  template <class F>
  RayResult castRayFast(const Vec3& origin, const Vec3& dir, double max_dist,
                        F&& blocks) const {
    RayResult out;
    Vec3i idx = worldToIndex(origin);
    const Vec3i start = idx;

    Vec3i step;
    Vec3 t_max, t_delta;
    for (int a = 0; a < 3; ++a) {
      if (dir[a] > kTraverseEps) {
        step[a] = 1;
        double next = origin_[a] + (idx[a] + 1) * res_;
        t_max[a] = (next - origin[a]) / dir[a];
        t_delta[a] = res_ / dir[a];
      } else if (dir[a] < -kTraverseEps) {
        step[a] = -1;
        double next = origin_[a] + idx[a] * res_;
        t_max[a] = (next - origin[a]) / dir[a];
        t_delta[a] = -res_ / dir[a];
      } else {
        step[a] = 0;
        t_max[a] = std::numeric_limits<double>::infinity();
        t_delta[a] = std::numeric_limits<double>::infinity();
      }
    }

    double t = 0.0;
    while (true) {
      if (!inBounds(idx)) {
        out.outcome = RayOutcome::LeftGrid;
        out.t = std::min(t, max_dist);
        out.point = origin + dir * out.t;
        out.voxel = idx;
        return out;
      }
      if (idx != start && blocks(states_[linearIndex(idx)])) {
        out.outcome = RayOutcome::Hit;
        out.t = t;
        out.voxel = idx;
        out.point = origin + dir * t;
        return out;
      }
      int axis = 0;
      if (t_max.y() < t_max.x()) axis = 1;
      if (t_max.z() < t_max[axis]) axis = 2;
      if (t_max[axis] > max_dist) {
        out.outcome = RayOutcome::MaxRange;
        out.t = max_dist;
        out.point = origin + dir * max_dist;
        out.voxel = idx;
        return out;
      }
      t = t_max[axis];
      t_max[axis] += t_delta[axis];
      idx[axis] += step[axis];
    }
  }

  // Visit every voxel index the segment [from, to] passes through, in order.
  // Indices outside the grid are skipped but traversal continues.
  void traverse(const Vec3& from, const Vec3& to,
                const std::function<void(const Vec3i&)>& visit) const;

  template <class F>
  void traverseFast(const Vec3& from, const Vec3& to, F&& visit) const {
    Vec3 delta = to - from;
    double len = delta.norm();
    if (len < kTraverseEps) {
      Vec3i idx = worldToIndex(from);
      if (inBounds(idx)) visit(idx);
      return;
    }
    Vec3 dir = delta / len;
    Vec3i idx = worldToIndex(from);
    const Vec3i end = worldToIndex(to);

    Vec3i step;
    Vec3 t_max, t_delta;
    for (int a = 0; a < 3; ++a) {
      if (dir[a] > kTraverseEps) {
        step[a] = 1;
        t_max[a] = (origin_[a] + (idx[a] + 1) * res_ - from[a]) / dir[a];
        t_delta[a] = res_ / dir[a];
      } else if (dir[a] < -kTraverseEps) {
        step[a] = -1;
        t_max[a] = (origin_[a] + idx[a] * res_ - from[a]) / dir[a];
        t_delta[a] = -res_ / dir[a];
      } else {
        step[a] = 0;
        t_max[a] = std::numeric_limits<double>::infinity();
        t_delta[a] = std::numeric_limits<double>::infinity();
      }
    }

    while (true) {
      if (inBounds(idx)) visit(idx);
      if (idx == end) return;
      int axis = 0;
      if (t_max.y() < t_max.x()) axis = 1;
      if (t_max.z() < t_max[axis]) axis = 2;
      if (t_max[axis] > len + kTraverseEps) return;  // numeric guard; end voxel reached above
      t_max[axis] += t_delta[axis];
      idx[axis] += step[axis];
    }
  }

  void saveSnapshot(const std::string& path) const;
  static VoxelGrid loadSnapshot(const std::string& path);

 private:
  static constexpr double kTraverseEps = 1e-9;

  Vec3 origin_{0.0, 0.0, 0.0};
  Vec3i dims_{0, 0, 0};
  double res_ = 0.1;
  std::vector<VoxelState> states_;
};

inline bool blocksOccupied(VoxelState s) { return s == VoxelState::Occupied; }
inline bool blocksOccupiedOrUnknown(VoxelState s) {
  return s == VoxelState::Occupied || s == VoxelState::Unknown;
}

}  // namespace ssnav
