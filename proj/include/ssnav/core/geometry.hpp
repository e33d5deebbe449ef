#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <cstdint>

namespace ssnav {

using Vec3 = Eigen::Vector3d;
using Vec3i = Eigen::Vector3i;
using Box = Eigen::AlignedBox3d;

// 4-DoF pose: position plus heading about world z.
struct Pose {
  Vec3 position{0.0, 0.0, 0.0};
  double yaw = 0.0;
};

inline double wrapAngle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a < 0.0) a += 2.0 * M_PI;
  return a - M_PI;
}

inline Vec3 yawDirection(double yaw) {
  return Vec3(std::cos(yaw), std::sin(yaw), 0.0);
}

// Lexicographic ordering for integer voxel/cell indices, used wherever a
// deterministic iteration order over sparse index maps is required.
struct Vec3iLess {
  bool operator()(const Vec3i& a, const Vec3i& b) const {
    if (a.x() != b.x()) return a.x() < b.x();
    if (a.y() != b.y()) return a.y() < b.y();
    return a.z() < b.z();
  }
};

inline bool boxValid(const Box& b) {
  return (b.max().array() > b.min().array()).all();
}

}  // namespace ssnav
